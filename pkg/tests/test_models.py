#!/usr/bin/env python3
"""
Tests for function models, their rescaling and the built-in catalogue
"""

import os
import sys
from fractions import Fraction

import mpmath
import pytest

# Add project root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from src.errors import InsufficientTaylorData, ParameterError
from src.models import (
    FunctionModel,
    FunctionModel2D,
    eisenstein_kernel_model,
    exact_or_mpf,
    exp2d_model,
    exp2d_skew_model,
    exp_model,
    exp_over_x_model,
    get_model,
    quadrature_integral,
    scalar_product,
)
from src.numerics import PrecisionContext

CTX = PrecisionContext.with_bits(128)


def test_exact_scalars():
    assert exact_or_mpf("1/3") == Fraction(1, 3)
    assert exact_or_mpf(0.5) == Fraction(1, 2)
    assert exact_or_mpf(2) == 2
    assert isinstance(exact_or_mpf(mpmath.mpf("0.25")), mpmath.mpf)
    assert scalar_product(Fraction(1, 2), 3) == Fraction(3, 2)
    assert isinstance(scalar_product(Fraction(1, 2), mpmath.mpf(3)), mpmath.mpf)
    with pytest.raises(ParameterError):
        exact_or_mpf(True)


def test_exp_model_data():
    model = exp_model()
    assert not model.has_pole
    assert model.taylor[3] == Fraction(-1, 6)
    assert model.derivative_at_zero(3) == -1
    assert model.integral() == 1
    with pytest.raises(InsufficientTaylorData):
        exp_model(terms=3).require_taylor(5)


def test_scaled_model():
    doubled = exp_model().scaled(2)
    assert doubled.taylor[1] == -2
    assert doubled.integral() == Fraction(1, 2)
    assert doubled.decay_rate == 2
    with CTX.workprec():
        assert abs(doubled(mpmath.mpf(1)) - mpmath.exp(-2)) < mpmath.mpf(10) ** -35
    with pytest.raises(ParameterError):
        exp_model().scaled(0)


def test_scaled_pole_model_regularized_integral():
    model = exp_over_x_model().scaled(2)
    assert model.residue == Fraction(1, 2)
    with CTX.workprec():
        expected = -mpmath.log(2) / 2
        assert abs(model.integral() - expected) < mpmath.mpf(10) ** -30
        assert abs(quadrature_integral(model, CTX) - expected) < mpmath.mpf(10) ** -20


def test_eisenstein_kernel_integral():
    model = eisenstein_kernel_model()
    with CTX.workprec():
        assert abs(model.integral() - mpmath.pi**4 / 15) < mpmath.mpf(10) ** -30
        assert abs(quadrature_integral(model, CTX) - mpmath.pi**4 / 15) < mpmath.mpf(10) ** -20
    assert model.taylor[:5] == (0, 0, 1, Fraction(-1, 2), Fraction(1, 12))


def test_laurent_residuals():
    pole = exp_over_x_model()
    with CTX.workprec():
        assert pole.laurent_residual(mpmath.mpf("0.001"), 4, CTX) < mpmath.mpf(10) ** -12
        kernel = eisenstein_kernel_model()
        assert kernel.laurent_residual(mpmath.mpf("0.01"), 10, CTX) < mpmath.mpf(10) ** -18


def test_decay_certificates_hold_in_sector():
    points = [mpmath.mpc(1, 0), mpmath.mpc(2, 3), mpmath.mpc(10, -5), mpmath.mpc("0.5", "0.8")]
    for model in (exp_model(), exp_over_x_model(), eisenstein_kernel_model()):
        for w in points:
            if abs(mpmath.arg(w)) <= model.sector_half_angle:
                assert model.certificate_holds(w, CTX), (model.name, w)


def test_model_validation():
    with pytest.raises(ParameterError):
        FunctionModel("bad", lambda w: w, (), 0, sector_half_angle=1.6)
    with pytest.raises(ParameterError):
        FunctionModel("bad", lambda w: w, (), 0, sector_half_angle=1, decay_rate=1)


def test_two_dimensional_models():
    model = exp2d_model()
    assert isinstance(model, FunctionModel2D)
    assert model.order == 24
    assert model.mixed[2][3] == -1
    assert model.edge_first[1] == -1
    assert model.full_integral == 1
    model.require_order(23)
    with pytest.raises(InsufficientTaylorData):
        model.require_order(24)

    skew = exp2d_skew_model()
    assert skew.full_integral == Fraction(1, 2)
    assert skew.decay_rates == (1, 2)
    assert skew.mixed[1][1] == 2
    with CTX.workprec():
        assert abs(skew(1, 1) - mpmath.exp(-3)) < mpmath.mpf(10) ** -35

    with pytest.raises(ParameterError):
        FunctionModel2D.separable(exp_model(), exp_over_x_model())


def test_catalogue():
    assert get_model("exp").name == "exp"
    assert get_model("exp2d", 10).order == 10
    with pytest.raises(ParameterError):
        get_model("gamma")


def main():
    """Run all model tests"""
    print("🧪 Function model tests")
    print("=" * 50)
    tests = [
        test_exact_scalars,
        test_exp_model_data,
        test_scaled_model,
        test_scaled_pole_model_regularized_integral,
        test_eisenstein_kernel_integral,
        test_laurent_residuals,
        test_decay_certificates_hold_in_sector,
        test_model_validation,
        test_two_dimensional_models,
        test_catalogue,
    ]
    for test in tests:
        test()
        print(f"✅ {test.__name__}")
    return True


if __name__ == "__main__":
    sys.exit(0 if main() else 1)
