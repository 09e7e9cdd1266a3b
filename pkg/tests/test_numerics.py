#!/usr/bin/env python3
"""
Tests for precision contexts, log-domain values, stable kernels and sector geometry
"""

import os
import sys

import mpmath
import pytest

# Add project root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from src.errors import ParameterError, RepresentationError, SectorError
from src.numerics import (
    LogComplex,
    PathSpec,
    PrecisionContext,
    SectorPoint,
    expm1_complex,
    log_sum_exp,
    log_sum_exp_real,
    normalize_arg,
    path_point,
)


def test_precision_context_defaults():
    ctx = PrecisionContext()
    assert ctx.bits == 256
    assert ctx.tail_tol == mpmath.ldexp(1, -244)
    assert ctx.max_terms == 20_000_000

    narrow = PrecisionContext.with_bits(128)
    assert narrow.tail_tol == mpmath.ldexp(1, -116)
    assert ctx.replace(bits=128).tail_tol == narrow.tail_tol


def test_precision_context_rejects_bad_values():
    with pytest.raises(ParameterError):
        PrecisionContext(bits=40)
    with pytest.raises(ParameterError):
        PrecisionContext(tail_tol=2)
    with pytest.raises(ParameterError):
        PrecisionContext(max_terms=0)


def test_workprec_does_not_leak():
    before = mpmath.mp.prec
    with PrecisionContext.with_bits(300).workprec():
        assert mpmath.mp.prec == 300
    assert mpmath.mp.prec == before


def test_log_complex_arithmetic():
    with mpmath.workprec(128):
        a = LogComplex.from_complex(mpmath.mpc(3, 4))
        b = LogComplex.from_complex(-2)
        assert abs(a.log_mag - mpmath.log(5)) < mpmath.mpf(10) ** -35
        assert b.arg == +mpmath.pi
        product = (a * b).to_mpc()
        assert abs(product - mpmath.mpc(-6, -8)) < mpmath.mpf(10) ** -30
        quotient = (a / b).to_mpc()
        assert abs(quotient - mpmath.mpc(-1.5, -2)) < mpmath.mpf(10) ** -30
        assert (-LogComplex.one()).to_mpc() == -1


def test_log_complex_zero_and_range():
    zero = LogComplex.zero()
    assert zero.is_zero
    assert (zero * LogComplex.one()).is_zero
    with pytest.raises(ZeroDivisionError):
        LogComplex.one() / zero
    with pytest.raises(RepresentationError):
        zero.log()
    # e^1000 has no double representation but stays an mpf
    huge = LogComplex(1000, 0)
    with pytest.raises(RepresentationError):
        huge.to_complex()
    assert mpmath.isfinite(huge.to_mpc().real)


def test_log_sum_exp_extreme_magnitudes():
    with mpmath.workprec(128):
        total = log_sum_exp_real([10000, 10000])
        assert abs(total - (10000 + mpmath.log(2))) < mpmath.mpf(10) ** -30
        cancelled = log_sum_exp([LogComplex(10000, 0), LogComplex(10000, mpmath.pi)])
        assert cancelled.is_zero
    with pytest.raises(ParameterError):
        log_sum_exp([])


def test_expm1_keeps_relative_accuracy():
    ctx = PrecisionContext.with_bits(128)
    with ctx.workprec():
        tiny = mpmath.mpf(10) ** -30
        value = expm1_complex(tiny, ctx)
        assert abs(value / tiny - 1) < mpmath.mpf(10) ** -25
        rotated = expm1_complex(mpmath.mpc(0, tiny), ctx)
        assert abs(rotated.imag / tiny - 1) < mpmath.mpf(10) ** -25


def test_normalize_arg():
    with mpmath.workprec(100):
        assert abs(normalize_arg(3 * mpmath.pi) - mpmath.pi) < mpmath.mpf(10) ** -25
        assert abs(normalize_arg(-mpmath.pi / 2 - 4 * mpmath.pi) + mpmath.pi / 2) < mpmath.mpf(10) ** -25


def test_sector_point():
    point = SectorPoint(mpmath.mpc(1, 1), mpmath.pi / 4)
    assert point.in_restricted_angle()
    with pytest.raises(SectorError):
        SectorPoint(mpmath.mpc(1, 2), mpmath.pi / 4)
    with pytest.raises(SectorError):
        SectorPoint(0, 1)
    with pytest.raises(SectorError):
        SectorPoint(1, 2)


def test_paths():
    straight = PathSpec.parse("1")
    steep = PathSpec.parse("2")
    tangential = PathSpec.parse("1/3")
    assert not straight.tangential and not steep.tangential
    assert tangential.tangential
    assert tangential.label() == "1/3"

    point = path_point(straight, "0.1")
    assert isinstance(point, SectorPoint)
    with mpmath.workprec(100):
        z = path_point(tangential, mpmath.mpf("0.001"))
        assert abs(z - mpmath.mpc("0.001", "0.1")) < mpmath.mpf(10) ** -25
    with pytest.raises(ParameterError):
        path_point(straight, 0)
    with pytest.raises(ParameterError):
        PathSpec.parse("0")


def main():
    """Run all numerics tests"""
    print("🧪 Numerics tests")
    print("=" * 50)
    tests = [
        test_precision_context_defaults,
        test_precision_context_rejects_bad_values,
        test_workprec_does_not_leak,
        test_log_complex_arithmetic,
        test_log_complex_zero_and_range,
        test_log_sum_exp_extreme_magnitudes,
        test_expm1_keeps_relative_accuracy,
        test_normalize_arg,
        test_sector_point,
        test_paths,
    ]
    for test in tests:
        test()
        print(f"✅ {test.__name__}")
    return True


if __name__ == "__main__":
    sys.exit(0 if main() else 1)
