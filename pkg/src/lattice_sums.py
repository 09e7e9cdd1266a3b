"""
Direct evaluation of shifted lattice sums in working precision
Truncation is driven by the model's decay certificates, never by the size of the last term
"""

from dataclasses import dataclass

import mpmath

from .errors import ParameterError, PoleShiftError, SlowConvergence
from .models import FunctionModel, FunctionModel2D, exact_or_mpf
from .numerics import DEFAULT_CONTEXT, GUARD_BITS, PrecisionContext, SectorPoint, to_mpc, to_mpf
from .special_fn import is_pole_shift

# terms between two evaluations of the tail bound
CHECK_INTERVAL = 64
MAX_2D_PASSES = 4


@dataclass(frozen=True)
class LatticeSum:
    """Truncated sum with an upper bound for truncation tail plus rounding"""

    value: object
    error_bound: object
    terms: int


def _sector_value(w, theta):
    """w as an mpc, checked against the model sector D_theta"""
    value = to_mpc(w)
    SectorPoint(value, theta)
    return value


def _head_length(a):
    # terms with m + a near or below zero are summed without tail logic
    return int(mpmath.ceil(-to_mpf(a))) + 2 if a < 0 else 0


def tail_bound(model: FunctionModel, w, a, start):
    """Upper bound for sum_{m >= start} |f(w(m+a))| from the model's certificates,
    or None while no certificate applies yet"""
    w = to_mpc(w)
    x0 = start + to_mpf(a)
    if x0 <= 0:
        return None
    candidates = []
    eps = to_mpf(model.decay_eps)
    if abs(w) * x0 >= to_mpf(model.decay_radius):
        # C |w|^{-1-eps} (x0^{-1-eps} + int_{x0}^inf x^{-1-eps} dx)
        candidates.append(
            to_mpf(model.decay_const) * abs(w) ** (-1 - eps) * (x0 ** (-1 - eps) + x0 ** (-eps) / eps)
        )
    if model.has_exponential_certificate and w.real * x0 >= to_mpf(model.decay_threshold):
        step = to_mpf(model.decay_rate) * w.real
        candidates.append(
            to_mpf(model.decay_const_exp) * mpmath.exp(-step * x0) / -mpmath.expm1(-step)
        )
    return min(candidates) if candidates else None


def _rounding_bound(terms, abs_total, ctx):
    return terms * mpmath.ldexp(abs_total, -(ctx.bits + GUARD_BITS) + 1)


def _prepare(model, w, a):
    if isinstance(model, FunctionModel2D):
        raise ParameterError("two-dimensional models are summed by shifted_sum_2d")
    a = exact_or_mpf(a)
    if model.has_pole and is_pole_shift(a):
        raise PoleShiftError(a)
    return _sector_value(w, model.sector_half_angle), a


def shifted_sum(model: FunctionModel, w, a, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """sum_{m >= 0} f(w(m+a))"""
    with ctx.workprec(GUARD_BITS):
        w, a = _prepare(model, w, a)
        a_mp = to_mpf(a)
        head = _head_length(a)
        total = mpmath.mpc(0)
        abs_total = mpmath.mpf(0)
        m = 0
        while True:
            if m >= head and (m - head) % CHECK_INTERVAL == 0:
                bound = tail_bound(model, w, a, m)
                if bound is not None and bound <= ctx.tail_tol * abs(total):
                    break
            if m >= ctx.max_terms:
                raise SlowConvergence(ctx.max_terms, f"lattice sum of {model.name}")
            term = model.evaluator(w * (m + a_mp))
            total += term
            abs_total += abs(term)
            m += 1
        error = bound + _rounding_bound(m, abs_total, ctx)
    with ctx.workprec():
        return LatticeSum(+total, +error, m)


def alternating_sum(model: FunctionModel, w, a, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """sum_{m >= 0} (-1)^m f(w(m+a)), accumulated in (m, m+1) pairs"""
    with ctx.workprec(GUARD_BITS):
        w, a = _prepare(model, w, a)
        a_mp = to_mpf(a)
        head = _head_length(a)
        total = mpmath.mpc(0)
        abs_total = mpmath.mpf(0)
        m = 0
        while True:
            if m >= head and (m // 2) % (CHECK_INTERVAL // 2) == 0:
                bound = tail_bound(model, w, a, m)
                if bound is not None and bound <= ctx.tail_tol * abs(total):
                    break
            if m >= ctx.max_terms:
                raise SlowConvergence(ctx.max_terms, f"alternating lattice sum of {model.name}")
            even = model.evaluator(w * (m + a_mp))
            odd = model.evaluator(w * (m + 1 + a_mp))
            total += even - odd
            abs_total += abs(even) + abs(odd)
            m += 2
        error = bound + _rounding_bound(m, abs_total, ctx)
    with ctx.workprec():
        return LatticeSum(+total, +error, m)


def _axis_tail(rate, re_w, shift, start):
    # sum_{m >= start} e^{-rate Re(w) (m + shift)}
    step = rate * re_w
    return mpmath.exp(-step * (start + shift)) / -mpmath.expm1(-step)


def _axis_cutoff(rate, re_w, shift, budget):
    # smallest M with e^{-rate Re(w) (M + shift)} / (1 - e^{-rate Re(w)}) <= budget
    step = rate * re_w
    needed = -mpmath.log(budget * -mpmath.expm1(-step)) / step - shift
    return max(1, int(mpmath.ceil(needed)))


def shifted_sum_2d(model: FunctionModel2D, w, a, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """sum over m in N0^2 of f(w(m1+a1), w(m2+a2)) on a rectangle sized by the
    per-axis exponential certificates"""
    if len(a) != 2:
        raise ParameterError(f"a two-dimensional sum needs a shift pair, got {a!r}")
    with ctx.workprec(GUARD_BITS):
        w = _sector_value(w, model.sector_half_angle)
        shifts = tuple(to_mpf(exact_or_mpf(x)) for x in a)
        if any(s < 0 for s in shifts):
            raise ParameterError("two-dimensional shifts must be non-negative")
        rates = tuple(to_mpf(r) for r in model.decay_rates)
        const = to_mpf(model.decay_const_exp)
        re_w = w.real
        heads = tuple(_axis_tail(r, re_w, s, 0) for r, s in zip(rates, shifts))

        target = ctx.tail_tol * const * heads[0] * heads[1]
        for _ in range(MAX_2D_PASSES):
            cut1 = _axis_cutoff(rates[0], re_w, shifts[0], target / (2 * const * heads[1]))
            cut2 = _axis_cutoff(rates[1], re_w, shifts[1], target / (2 * const * heads[0]))
            if cut1 * cut2 > ctx.max_terms:
                raise SlowConvergence(ctx.max_terms, f"two-dimensional lattice sum of {model.name}")
            total = mpmath.mpc(0)
            abs_total = mpmath.mpf(0)
            for m1 in range(cut1):
                w1 = w * (m1 + shifts[0])
                for m2 in range(cut2):
                    term = model.evaluator(w1, w * (m2 + shifts[1]))
                    total += term
                    abs_total += abs(term)
            bound = const * (
                _axis_tail(rates[0], re_w, shifts[0], cut1) * heads[1]
                + heads[0] * _axis_tail(rates[1], re_w, shifts[1], cut2)
            )
            if bound <= ctx.tail_tol * abs(total):
                break
            if total == 0:
                raise SlowConvergence(cut1 * cut2, f"two-dimensional lattice sum of {model.name}")
            target = ctx.tail_tol * abs(total) / 2
        else:
            raise SlowConvergence(cut1 * cut2, f"two-dimensional lattice sum of {model.name}")
        error = bound + _rounding_bound(cut1 * cut2, abs_total, ctx)
    with ctx.workprec():
        return LatticeSum(+total, +error, cut1 * cut2)


def lattice_sum(model, w, a, ctx: PrecisionContext = DEFAULT_CONTEXT, alternating=False):
    """Dispatch on the model's dimension"""
    if isinstance(model, FunctionModel2D):
        if alternating:
            raise ParameterError("alternating sums are one-dimensional")
        return shifted_sum_2d(model, w, a, ctx)
    if alternating:
        return alternating_sum(model, w, a, ctx)
    return shifted_sum(model, w, a, ctx)
