"""
Euler-Maclaurin asymptotic expansions of shifted lattice sums
Regular, simple-pole, alternating and two-dimensional builders, evaluation
of the truncated series, and empirical remainder-order fits
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

import mpmath
import numpy as np

from . import lattice_sums
from .errors import (
    DegenerateFit,
    InsufficientPole,
    ParameterError,
    PoleShiftError,
    SectorError,
    UnsupportedDimension,
)
from .models import (
    FunctionModel,
    FunctionModel2D,
    exact_or_mpf,
    is_exact,
    scalar_product,
    scalar_sum,
)
from .numerics import DEFAULT_CONTEXT, GUARD_BITS, PrecisionContext, SectorPoint, to_mpc, to_mpf
from .special_fn import bernoulli_poly, digamma_constant, euler_poly, is_pole_shift

FIT_STANDARDS = {
    "exponents": tuple(range(2, 10)),
    "two_d_exponents": tuple(1.5 + 0.375 * i for i in range(8)),
    "min_points": 8,
    "noise_offset_bits": GUARD_BITS,
}

KINDS = ("regular", "pole", "alternating", "2d")


def format_scalar(value, digits=None):
    """Decimal string for a coefficient: "p/q" for exact values, nstr otherwise"""
    if is_exact(value):
        value = Fraction(value)
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if digits is None:
        digits = mpmath.libmp.prec_to_dps(mpmath.mp.prec)
    return mpmath.nstr(to_mpf(value), digits)


def parse_scalar(text):
    text = str(text).strip()
    try:
        return Fraction(text)
    except ValueError:
        return mpmath.mpf(text)


@dataclass(frozen=True)
class ExpansionSeries:
    """log_over_w_coeff * Log(1/w)/w + sum_s inv_coeffs[s] w^{-s} + sum_{n<order} poly_coeffs[n] w^n"""

    log_over_w_coeff: object
    inv_coeffs: dict
    poly_coeffs: tuple
    order: int
    kind: str = "regular"
    shift: object = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "poly_coeffs", tuple(self.poly_coeffs))
        object.__setattr__(self, "inv_coeffs", dict(sorted(self.inv_coeffs.items())))
        if len(self.poly_coeffs) != self.order:
            raise ParameterError(
                f"expansion of order {self.order} needs {self.order} polynomial coefficients"
            )

    def laurent_terms(self):
        """Power -> coefficient, leaving out the logarithmic term"""
        terms = {-s: c for s, c in self.inv_coeffs.items()}
        terms.update(enumerate(self.poly_coeffs))
        return terms

    def multiply(self, other: "ExpansionSeries", order=None):
        """Product of two log-free series, truncated to the smaller order"""
        if self.log_over_w_coeff != 0 or other.log_over_w_coeff != 0:
            raise ParameterError("only log-free expansions can be multiplied")
        order = min(self.order, other.order) if order is None else order
        product = {}
        for p, c in self.laurent_terms().items():
            for q, d in other.laurent_terms().items():
                if p + q < order:
                    product[p + q] = scalar_sum(product.get(p + q, Fraction(0)), scalar_product(c, d))
        inv = {-p: c for p, c in product.items() if p < 0}
        poly = tuple(product.get(n, Fraction(0)) for n in range(order))
        return ExpansionSeries(Fraction(0), inv, poly, order, kind="2d")

    def to_record(self, digits=None):
        return {
            "kind": self.kind,
            "log_over_w_coeff": format_scalar(self.log_over_w_coeff, digits),
            "inv_coeffs": [[s, format_scalar(c, digits)] for s, c in self.inv_coeffs.items()],
            "poly_coeffs": [format_scalar(c, digits) for c in self.poly_coeffs],
            "order": self.order,
        }

    @classmethod
    def from_record(cls, record):
        return cls(
            log_over_w_coeff=parse_scalar(record["log_over_w_coeff"]),
            inv_coeffs={int(s): parse_scalar(c) for s, c in record["inv_coeffs"]},
            poly_coeffs=tuple(parse_scalar(c) for c in record["poly_coeffs"]),
            order=int(record["order"]),
            kind=record.get("kind", "regular"),
        )


def _check_order(N):
    if int(N) != N or N < 0:
        raise ParameterError(f"truncation order must be a non-negative integer, got {N}")
    return int(N)


def expand_regular(model: FunctionModel, a, N, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """sum_{m>=0} f(w(m+a)) ~ (1/w) int f - sum_{n<N} B_{n+1}(a) b_n/(n+1) w^n"""
    N = _check_order(N)
    if model.has_pole:
        raise ParameterError(f"{model.name} has a pole at 0; use the pole expansion")
    model.require_taylor(N)
    a = exact_or_mpf(a)
    with ctx.workprec():
        poly = tuple(
            scalar_product(-1, bernoulli_poly(n + 1, a), model.taylor[n], Fraction(1, n + 1))
            for n in range(N)
        )
        integral = model.integral()
    return ExpansionSeries(Fraction(0), {1: integral}, poly, N, kind="regular", shift=a)


def expand_pole(model: FunctionModel, a, N, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Expansion for f with a simple pole b_{-1}/x at the origin.

    b_{-1} Log(1/w)/w + (b_{-1} C_a + regularized integral)/w
    - sum_{n<N} B_{n+1}(a) b_n/(n+1) w^n"""
    N = _check_order(N)
    if not model.has_pole:
        raise InsufficientPole(f"{model.name} has b_{{-1}} = 0; use the regular expansion")
    a = exact_or_mpf(a)
    if is_pole_shift(a):
        raise PoleShiftError(a)
    model.require_taylor(N)
    with ctx.workprec():
        c_a = Fraction(0) if is_exact(a) and a == 1 else digamma_constant(a, ctx)
        inv = scalar_sum(scalar_product(model.residue, c_a), model.integral())
        poly = tuple(
            scalar_product(-1, bernoulli_poly(n + 1, a), model.taylor[n], Fraction(1, n + 1))
            for n in range(N)
        )
    return ExpansionSeries(model.residue, {1: inv}, poly, N, kind="pole", shift=a)


def expand_alternating(model: FunctionModel, a, N, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """sum_{m>=0} (-1)^m f(w(m+a)) ~ (1/2) sum_{n<N} E_n(a) b_n w^n"""
    N = _check_order(N)
    if model.has_pole:
        raise ParameterError(f"alternating expansion needs a regular model, {model.name} has a pole")
    model.require_taylor(N)
    a = exact_or_mpf(a)
    with ctx.workprec():
        poly = tuple(
            scalar_product(Fraction(1, 2), euler_poly(n, a), model.taylor[n]) for n in range(N)
        )
    return ExpansionSeries(Fraction(0), {}, poly, N, kind="alternating", shift=a)


def expand_2d(model: FunctionModel2D, a, N, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Two-dimensional expansion: full integral over w^2, the two edge sums
    (their n = 0 parts over w, the rest polynomial) and the double Bernoulli sum"""
    N = _check_order(N)
    if len(a) != 2:
        raise UnsupportedDimension(len(a))
    model.require_order(N)
    a1, a2 = (exact_or_mpf(x) for x in a)

    def weight(n, shift):
        # B_{n+1}(shift)/(n+1)!
        return scalar_product(bernoulli_poly(n + 1, shift), Fraction(1, factorial(n + 1)))

    with ctx.workprec():
        inv = {
            2: model.full_integral,
            1: scalar_sum(
                scalar_product(-1, weight(0, a2), model.edge_second[0]),
                scalar_product(-1, weight(0, a1), model.edge_first[0]),
            ),
        }
        poly = []
        for n in range(N):
            terms = [
                scalar_product(-1, weight(n + 1, a2), model.edge_second[n + 1]),
                scalar_product(-1, weight(n + 1, a1), model.edge_first[n + 1]),
            ]
            terms.extend(
                scalar_product(weight(n1, a1), weight(n - n1, a2), model.mixed[n1][n - n1])
                for n1 in range(n + 1)
            )
            poly.append(scalar_sum(*terms))
    return ExpansionSeries(Fraction(0), inv, tuple(poly), N, kind="2d", shift=(a1, a2))


def expand_lattice(model, a, N, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Route a shift (scalar or vector) to the expansion of matching dimension"""
    if isinstance(a, (tuple, list)):
        if len(a) == 1:
            a = a[0]
        elif len(a) == 2:
            if not isinstance(model, FunctionModel2D):
                raise ParameterError("a two-component shift needs a two-dimensional model")
            return expand_2d(model, a, N, ctx)
        else:
            raise UnsupportedDimension(len(a))
    if isinstance(model, FunctionModel2D):
        raise ParameterError("a two-dimensional model needs a shift pair")
    if model.has_pole:
        return expand_pole(model, a, N, ctx)
    return expand_regular(model, a, N, ctx)


def expand(kind, model, a, N, ctx: PrecisionContext = DEFAULT_CONTEXT):
    builders = {
        "regular": expand_regular,
        "pole": expand_pole,
        "alternating": expand_alternating,
        "2d": expand_2d,
    }
    if kind not in builders:
        raise ParameterError(f"unknown expansion kind {kind!r}; choose from {', '.join(KINDS)}")
    return builders[kind](model, a, N, ctx)


def eval_expansion(series: ExpansionSeries, w, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Value of the truncated series at w, with Log(1/w) = -Log(w) on the principal branch"""
    with ctx.workprec(GUARD_BITS):
        w = to_mpc(w)
        if w == 0:
            raise SectorError("the expansion is not defined at w = 0")
        if w.real <= 0:
            raise SectorError(f"Re w must be positive, got w = {mpmath.nstr(w, 8)}")
        total = mpmath.mpc(0)
        if series.log_over_w_coeff != 0:
            total += to_mpf(series.log_over_w_coeff) * (-mpmath.log(w)) / w
        for s, c in series.inv_coeffs.items():
            total += to_mpf(c) / w**s
        poly = mpmath.mpc(0)
        for c in reversed(series.poly_coeffs):
            poly = poly * w + to_mpf(c)
        total += poly
    with ctx.workprec():
        return +total


@dataclass(frozen=True)
class RemainderSample:
    radius: object
    remainder: object
    direct: object


def _direct_sum(series, model, a, w, ctx):
    if series.kind == "alternating":
        return lattice_sums.alternating_sum(model, w, a, ctx).value
    if series.kind == "2d":
        return lattice_sums.shifted_sum_2d(model, w, a, ctx).value
    return lattice_sums.shifted_sum(model, w, a, ctx).value


def remainder_samples(series: ExpansionSeries, model, a, ray_angle,
                      ctx: PrecisionContext = DEFAULT_CONTEXT, exponents=None,
                      reference=None, cache=None):
    """|direct - expansion| at w = 2^{-k} e^{i ray_angle}.

    reference replaces the lattice sum by a closed form; cache (a dict)
    reuses direct values across truncation orders."""
    theta = model.sector_half_angle
    with ctx.workprec():
        angle = to_mpf(ray_angle)
        if abs(angle) > theta:
            raise SectorError(
                f"ray angle {mpmath.nstr(angle, 8)} lies outside the model sector "
                f"(half angle {mpmath.nstr(theta, 8)})"
            )
    if exponents is None:
        exponents = FIT_STANDARDS["two_d_exponents" if series.kind == "2d" else "exponents"]
    samples = []
    for k in exponents:
        with ctx.workprec(GUARD_BITS):
            radius = mpmath.mpf(2) ** (-mpmath.mpf(k))
            value = radius if angle == 0 else radius * mpmath.expj(angle)
            w = SectorPoint(value, theta)
        key = (series.kind, getattr(model, "name", None), str(a), str(ray_angle), k, ctx.bits)
        if cache is not None and reference is None and key in cache:
            direct = cache[key]
        else:
            if reference is not None:
                with ctx.workprec():
                    direct = +reference(w.value)
            else:
                direct = _direct_sum(series, model, a, w, ctx)
            if cache is not None and reference is None:
                cache[key] = direct
        approx = eval_expansion(series, w, ctx)
        with ctx.workprec():
            samples.append(RemainderSample(radius, abs(direct - approx), direct))
    return samples


def fit_remainder_order(series: ExpansionSeries, model, a, ray_angle,
                        ctx: PrecisionContext = DEFAULT_CONTEXT, exponents=None,
                        reference=None, cache=None):
    """Least-squares slope of log|remainder| against log|w|; about N for an order-N expansion"""
    if exponents is not None and len(exponents) < FIT_STANDARDS["min_points"]:
        raise ParameterError(
            f"a remainder fit needs at least {FIT_STANDARDS['min_points']} sample points"
        )
    samples = remainder_samples(series, model, a, ray_angle, ctx, exponents, reference, cache)
    floor_bits = ctx.bits - FIT_STANDARDS["noise_offset_bits"]
    with ctx.workprec():
        floor = mpmath.ldexp(mpmath.mpf(1), -floor_bits)
        kept = [s for s in samples if s.remainder > floor * max(1, abs(s.direct))]
        # the minimum applies to the points that survive the noise floor
        if len(kept) < FIT_STANDARDS["min_points"]:
            raise DegenerateFit(
                f"remainder below the noise floor 2^-{floor_bits} at "
                f"{len(samples) - len(kept)} of {len(samples)} sample points; "
                f"{len(kept)} left, {FIT_STANDARDS['min_points']} needed"
            )
        xs = np.array([float(mpmath.log(s.radius)) for s in kept])
        ys = np.array([float(mpmath.log(s.remainder)) for s in kept])
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)


def effective_order(model, a, N, kind="regular", ctx: PrecisionContext = DEFAULT_CONTEXT, lookahead=4):
    """Index of the first non-vanishing coefficient at or beyond w^N; the
    remainder of an order-N truncation decays like this power"""
    longer = expand(kind, model, a, N + lookahead, ctx)
    for n in range(N, N + lookahead):
        if longer.poly_coeffs[n] != 0:
            return n
    return N + lookahead
