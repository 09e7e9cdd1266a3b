"""
Asymptotic laboratory
Euler-Maclaurin expansions of lattice sums, Ingham-type Tauberian predictions
and high-precision checks of modular-form tables
"""

__version__ = "0.2.0"
__description__ = "Euler-Maclaurin and Tauberian asymptotics in log-domain arbitrary precision"

from .em_engine import ExpansionSeries, eval_expansion, expand, expand_lattice, fit_remainder_order
from .errors import DomainError, LabError, ResourceRefusal
from .lattice_sums import LatticeSum, lattice_sum
from .models import FunctionModel, FunctionModel2D, get_model
from .modular_lab import log_partition_gf, partition_main_term_error, table1, table2
from .numerics import LogComplex, PrecisionContext
from .report_writer import LabReportWriter, write_lab_report
from .tauberian import InghamParams, ingham_coefficient_asymptotic, ingham_partial_sum_asymptotic

__all__ = [
    "ExpansionSeries",
    "eval_expansion",
    "expand",
    "expand_lattice",
    "fit_remainder_order",
    "DomainError",
    "LabError",
    "ResourceRefusal",
    "LatticeSum",
    "lattice_sum",
    "FunctionModel",
    "FunctionModel2D",
    "get_model",
    "log_partition_gf",
    "partition_main_term_error",
    "table1",
    "table2",
    "LogComplex",
    "PrecisionContext",
    "LabReportWriter",
    "write_lab_report",
    "InghamParams",
    "ingham_coefficient_asymptotic",
    "ingham_partial_sum_asymptotic",
]
