#!/usr/bin/env python3
"""
Tests for certified direct evaluation of shifted lattice sums
"""

import os
import sys
from fractions import Fraction

import mpmath
import pytest

# Add project root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from src.errors import ParameterError, PoleShiftError, SectorError, SlowConvergence
from src.lattice_sums import alternating_sum, lattice_sum, shifted_sum, shifted_sum_2d, tail_bound
from src.models import eisenstein_kernel_model, exp2d_model, exp2d_skew_model, exp_model, exp_over_x_model
from src.modular_lab import eisenstein_g3
from src.numerics import PrecisionContext

CTX = PrecisionContext.with_bits(128)
TOL = mpmath.mpf(10) ** -30


def test_geometric_sum():
    with CTX.workprec():
        for w in (mpmath.mpf("0.5"), mpmath.mpc("0.3", "0.2"), mpmath.mpc("0.05", "-0.4")):
            result = shifted_sum(exp_model(), w, 0, CTX)
            expected = 1 / (1 - mpmath.exp(-w))
            assert abs(result.value - expected) < TOL * abs(expected)
            assert result.error_bound < TOL * abs(expected)
            assert result.terms > 0


def test_negative_shift_runs_head_terms():
    with CTX.workprec():
        w = mpmath.mpc("0.4", "0.1")
        result = shifted_sum(exp_model(), w, Fraction(-5, 2), CTX)
        expected = mpmath.exp(w * 5 / 2) / (1 - mpmath.exp(-w))
        assert abs(result.value - expected) < TOL * abs(expected)


def test_alternating_sum():
    with CTX.workprec():
        w = mpmath.mpc("0.2", "0.1")
        result = alternating_sum(exp_model(), w, 0, CTX)
        expected = 1 / (1 + mpmath.exp(-w))
        assert abs(result.value - expected) < TOL
        assert result.terms % 2 == 0


def test_pole_model_sum():
    with CTX.workprec():
        w = mpmath.mpc("0.25", "0.25")
        result = shifted_sum(exp_over_x_model(), w, 1, CTX)
        expected = -mpmath.log(1 - mpmath.exp(-w)) / w
        assert abs(result.value - expected) < TOL * abs(expected)
    with pytest.raises(PoleShiftError):
        shifted_sum(exp_over_x_model(), w, 0, CTX)
    with pytest.raises(PoleShiftError):
        shifted_sum(exp_over_x_model(), w, -3, CTX)


def test_eisenstein_kernel_sum_matches_q_series():
    with CTX.workprec():
        w = mpmath.mpc("0.5", "0.3")
        result = shifted_sum(eisenstein_kernel_model(), w, 1, CTX)
        expected = w**3 * eisenstein_g3(w, CTX).to_mpc()
        assert abs(result.value - expected) < TOL * abs(expected)


def test_sector_is_enforced():
    with pytest.raises(SectorError):
        shifted_sum(exp_model(), mpmath.mpc("0.01", 1), 0, CTX)
    with pytest.raises(SectorError):
        shifted_sum(eisenstein_kernel_model(), mpmath.mpc(1, 2), 1, CTX)


def test_tail_bound():
    with CTX.workprec():
        w = mpmath.mpc("0.1", "0.05")
        assert tail_bound(exp_model(), w, -3, 2) is None
        near = tail_bound(exp_model(), w, 0, 10)
        far = tail_bound(exp_model(), w, 0, 100)
        assert far < near
        # the exponential bound is the exact geometric tail of |e^{-wm}|
        actual = mpmath.nsum(lambda m: abs(mpmath.exp(-w * m)), [100, mpmath.inf])
        assert far >= actual * (1 - mpmath.mpf(10) ** -25)
        assert far <= actual * (1 + mpmath.mpf(10) ** -25)
        # below its threshold the pole model only has the power-law bound
        assert tail_bound(exp_over_x_model(), w, 0, 1) is not None


def test_term_cap():
    ctx = PrecisionContext(bits=128, max_terms=50)
    with pytest.raises(SlowConvergence):
        shifted_sum(exp_model(), mpmath.mpf("0.01"), 0, ctx)


def test_two_dimensional_sums():
    with CTX.workprec():
        w = mpmath.mpc("0.4", "0.2")
        geometric = 1 / (1 - mpmath.exp(-w))
        result = shifted_sum_2d(exp2d_model(), w, (0, 0), CTX)
        assert abs(result.value - geometric**2) < TOL * abs(geometric**2)
        assert result.error_bound < TOL * abs(geometric**2)

        shifted = shifted_sum_2d(exp2d_model(), w, ("1/2", "1/3"), CTX)
        expected = mpmath.exp(-w / 2) * mpmath.exp(-w / 3) * geometric**2
        assert abs(shifted.value - expected) < TOL * abs(expected)

        skew = shifted_sum_2d(exp2d_skew_model(), w, (0, 0), CTX)
        expected = geometric / (1 - mpmath.exp(-2 * w))
        assert abs(skew.value - expected) < TOL * abs(expected)

    with pytest.raises(ParameterError):
        shifted_sum_2d(exp2d_model(), w, (-1, 0), CTX)
    with pytest.raises(ParameterError):
        shifted_sum_2d(exp2d_model(), w, (0,), CTX)


def test_dispatch():
    with CTX.workprec():
        w = mpmath.mpf("0.5")
        assert abs(lattice_sum(exp_model(), w, 0, CTX).value - 1 / (1 - mpmath.exp(-w))) < TOL
        assert abs(lattice_sum(exp2d_model(), w, (0, 0), CTX).value - 1 / (1 - mpmath.exp(-w)) ** 2) < TOL
    with pytest.raises(ParameterError):
        lattice_sum(exp2d_model(), w, (0, 0), CTX, alternating=True)
    with pytest.raises(ParameterError):
        shifted_sum(exp2d_model(), w, 0, CTX)


def main():
    """Run all lattice sum tests"""
    print("🧪 Lattice sum tests")
    print("=" * 50)
    tests = [
        test_geometric_sum,
        test_negative_shift_runs_head_terms,
        test_alternating_sum,
        test_pole_model_sum,
        test_eisenstein_kernel_sum_matches_q_series,
        test_sector_is_enforced,
        test_tail_bound,
        test_term_cap,
        test_two_dimensional_sums,
        test_dispatch,
    ]
    for test in tests:
        test()
        print(f"✅ {test.__name__}")
    return True


if __name__ == "__main__":
    sys.exit(0 if main() else 1)
