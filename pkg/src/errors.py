"""
Error taxonomy for the asymptotic laboratory
Domain errors mean bad parameters; resource refusals mean the job is too big
"""


class LabError(Exception):
    """Base class for every failure raised by the laboratory"""

    exit_code = 1


class DomainError(LabError):
    """Parameters outside the mathematical domain of an operation"""

    exit_code = 1


class ResourceRefusal(LabError):
    """The computation was refused or abandoned for resource reasons"""

    exit_code = 2


class ParameterError(DomainError):
    """Malformed or out-of-range parameter"""


class PoleShiftError(DomainError):
    """Shift a lies in -N0, so some lattice point sits on the pole"""

    def __init__(self, a):
        super().__init__(f"shift a={a} is a non-positive integer; the term m={-a} hits the pole")
        self.a = a


class InsufficientTaylorData(DomainError):
    """The model does not carry enough Laurent/Taylor coefficients"""

    def __init__(self, needed, supplied, what="Taylor coefficients"):
        super().__init__(f"need {needed} {what}, model supplies {supplied}")
        self.needed = needed
        self.supplied = supplied


class InsufficientPole(DomainError):
    """A pole expansion was requested for a model with b_{-1} = 0"""


class UnsupportedDimension(DomainError):
    """Lattice dimension above two"""

    def __init__(self, dimension):
        super().__init__(
            f"lattice sums in {dimension} dimensions are not supported; only s = 1 and s = 2 are"
        )
        self.dimension = dimension


class SectorError(DomainError):
    """Point outside the sector D_theta (or outside the right half-plane)"""


class DegenerateFit(DomainError):
    """Too few sample points keep a remainder above the noise floor"""


class RepresentationError(DomainError):
    """Log-domain value cannot be converted to an ordinary complex number"""


class PrecisionRefused(ResourceRefusal):
    """Required working precision exceeds the configured ceiling, or the
    supplied precision is below what the quantity needs"""

    def __init__(self, required_bits, limit_bits, reason="precision ceiling"):
        super().__init__(f"{reason}: requires {required_bits} bits, limit is {limit_bits} bits")
        self.required_bits = required_bits
        self.limit_bits = limit_bits
        self.reason = reason


class SlowConvergence(ResourceRefusal):
    """Term cap reached before the tail bound met the tolerance"""

    def __init__(self, terms, what="series"):
        super().__init__(f"{what} needs more than {terms} terms (max_terms reached)")
        self.terms = terms
