"""
Block-constant coefficients whose generating function satisfies the real-axis
hypothesis of the Tauberian theorem but not the sector bound
A(n) = e^{2 m^{3/2}} m^{-1/4} for m^3 <= n < (m+1)^3, A(0) = 0
"""

from dataclasses import dataclass

import mpmath

from .errors import ParameterError, SlowConvergence
from .numerics import DEFAULT_CONTEXT, GUARD_BITS, LogComplex, PrecisionContext, log_sum_exp_real, to_mpf

# log-decrement per step beyond which the remaining terms form a geometric tail
_TAIL_DECREMENT = 1


def icbrt(n):
    """floor(n^{1/3}) in exact integer arithmetic"""
    if int(n) != n or n < 0:
        raise ParameterError(f"cube root needs a non-negative integer, got {n}")
    n = int(n)
    if n < 2:
        return n
    m = 1 << ((n.bit_length() + 2) // 3)
    # Newton iteration from above
    while True:
        nxt = (2 * m + n // (m * m)) // 3
        if nxt >= m:
            break
        m = nxt
    while m**3 > n:
        m -= 1
    while (m + 1) ** 3 <= n:
        m += 1
    return m


def _block(n):
    m = icbrt(n)
    return m, m**3 == n


def ak_log_coefficient(n, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """log A(n) = 2 m^{3/2} - (1/4) log m; -inf for n = 0"""
    m = icbrt(n)
    with ctx.workprec():
        if m == 0:
            return mpmath.ninf
        m = mpmath.mpf(m)
        return 2 * m * mpmath.sqrt(m) - mpmath.log(m) / 4


def ak_coefficient(n, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """A(n) as a log-domain non-negative real"""
    return LogComplex(ak_log_coefficient(n, ctx), 0)


def _block_terms(t, ctx, log_term):
    """log-terms for m = 1, 2, ... until past the peak near t^{-2/3} the terms
    lie 2^{-bits-16} below the maximum and keep falling by a factor e per step"""
    cutoff = (ctx.bits + GUARD_BITS) * mpmath.ln2 + 10
    peak_index = t ** (-mpmath.mpf(2) / 3)
    terms = []
    best = mpmath.ninf
    m = 1
    while True:
        if m > ctx.max_terms:
            raise SlowConvergence(ctx.max_terms, "block sum")
        value = log_term(mpmath.mpf(m))
        terms.append(value)
        best = max(best, value)
        if m > peak_index and len(terms) > 1:
            falling = terms[-2] - value
            if value < best - cutoff and falling >= _TAIL_DECREMENT:
                return terms
        m += 1


def _check_t(t):
    t = to_mpf(t)
    if t <= 0:
        raise ParameterError(f"t must be positive, got {t}")
    return t


def ak_series(t, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """F(e^{-t}) = sum_n A(n) e^{-nt}
    = (1/(1 - e^{-t})) sum_{m>=1} e^{2m^{3/2}} m^{-1/4} (e^{-m^3 t} - e^{-(m+1)^3 t})"""
    with ctx.workprec(GUARD_BITS):
        t = _check_t(t)

        def log_term(m):
            return (
                2 * m * mpmath.sqrt(m)
                - mpmath.log(m) / 4
                - m**3 * t
                + mpmath.log(-mpmath.expm1(-(3 * m**2 + 3 * m + 1) * t))
            )

        terms = _block_terms(t, ctx, log_term)
        value = log_sum_exp_real(terms, ctx.replace(bits=ctx.bits + GUARD_BITS))
        value -= mpmath.log(-mpmath.expm1(-t))
    with ctx.workprec():
        return LogComplex(+value, 0)


def ak_normalized_series(t, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """F(e^{-t}) (3t/(2 sqrt(pi))) e^{-1/t}, which tends to 1 as t -> 0+"""
    series = ak_series(t, ctx)
    with ctx.workprec(GUARD_BITS):
        t = _check_t(t)
        value = series.log_mag + mpmath.log(3 * t / (2 * mpmath.sqrt(mpmath.pi))) - 1 / t
    with ctx.workprec():
        return mpmath.exp(value)


def _log_twelfth_root(n):
    # (1/12) log n, computed as (1/4) log m when n = m^3 so that it cancels exactly
    m, cube = _block(n)
    if cube:
        return mpmath.log(m) / 4
    return mpmath.log(n) / 12


def _log_normalized(n, with_sixth_root):
    m, _ = _block(n)
    m_mp = mpmath.mpf(m)
    grouped_logs = _log_twelfth_root(n) - mpmath.log(m_mp) / 4
    if m**3 == n:
        grouped_powers = mpmath.mpf(0)
    else:
        grouped_powers = 2 * m_mp * mpmath.sqrt(m_mp) - 2 * mpmath.sqrt(n)
    if with_sixth_root:
        grouped_powers += 3 * mpmath.root(n, 6)
    return grouped_logs + grouped_powers


def ak_normalized_extremes(m, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """(u_m, l_m): n^{1/12} e^{-2 sqrt n} A(n) at n = m^3 and
    n^{1/12} e^{-2 sqrt n + 3 n^{1/6}} A(n) at n = (m+1)^3 - 1"""
    if int(m) != m or m < 1:
        raise ParameterError(f"m must be a positive integer, got {m}")
    m = int(m)
    with ctx.workprec(GUARD_BITS):
        upper = _log_normalized(m**3, with_sixth_root=False)
        lower = _log_normalized((m + 1) ** 3 - 1, with_sixth_root=True)
    with ctx.workprec():
        return mpmath.exp(upper), mpmath.exp(lower)


def ak_gsum_ratio(t, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """sum m^{-1/4} e^{2m^{3/2} - (m+1)^3 t} / sum m^{-1/4} e^{2m^{3/2} - m^3 t}"""
    with ctx.workprec(GUARD_BITS):
        t = _check_t(t)

        def base(m):
            return 2 * m * mpmath.sqrt(m) - mpmath.log(m) / 4

        wide = ctx.replace(bits=ctx.bits + GUARD_BITS)
        denominator = _block_terms(t, ctx, lambda m: base(m) - m**3 * t)
        numerator = _block_terms(t, ctx, lambda m: base(m) - (m + 1) ** 3 * t)
        value = log_sum_exp_real(numerator, wide) - log_sum_exp_real(denominator, wide)
    with ctx.workprec():
        return mpmath.exp(value)


def ak_tauberian_log_ratio(n, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """log(A(n)/B(n)) with B(n) = (1/3) n^{-1/4} e^{2 sqrt n}, the prediction the
    Tauberian theorem would give; log 3 + (1/2) log m at n = m^3"""
    if int(n) != n or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n}")
    n = int(n)
    m, cube = _block(n)
    with ctx.workprec(GUARD_BITS):
        m_mp = mpmath.mpf(m)
        if cube:
            value = mpmath.log(3) + mpmath.log(m_mp) / 2
        else:
            value = (
                mpmath.log(3)
                + mpmath.log(n) / 4
                - mpmath.log(m_mp) / 4
                + 2 * m_mp * mpmath.sqrt(m_mp)
                - 2 * mpmath.sqrt(n)
            )
    with ctx.workprec():
        return +value


@dataclass(frozen=True)
class CounterexampleRow:
    label: str
    parameter: str
    value: object


def counterexample_grid(ts=("1e-1", "1e-2", "1e-3"), ms=(10, 100, 1000, 10000),
                        ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Normalized series, block-sum ratio, normalized extremes and failure ratios over a grid"""
    rows = []
    for t in ts:
        rows.append(CounterexampleRow("normalized_series", str(t), ak_normalized_series(t, ctx)))
        rows.append(CounterexampleRow("gsum_ratio", str(t), ak_gsum_ratio(t, ctx)))
    for m in ms:
        upper, lower = ak_normalized_extremes(m, ctx)
        rows.append(CounterexampleRow("upper_extreme", str(m), upper))
        rows.append(CounterexampleRow("lower_extreme", str(m), lower))
        rows.append(CounterexampleRow("log_ratio_at_cube", str(m), ak_tauberian_log_ratio(m**3, ctx)))
        rows.append(
            CounterexampleRow("log_ratio_before_cube", str(m), ak_tauberian_log_ratio((m + 1) ** 3 - 1, ctx))
        )
    return rows
