"""
Bernoulli and Euler polynomials in exact rational arithmetic
plus the digamma constants C_a of the simple-pole expansion
"""

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb, floor

import mpmath

from .errors import ParameterError, PoleShiftError
from .numerics import DEFAULT_CONTEXT, GUARD_BITS, PrecisionContext, to_mpf

MAX_INDEX = 1200


def _check_index(n):
    if int(n) != n or n < 0:
        raise ParameterError(f"index must be a non-negative integer, got {n}")
    if n > MAX_INDEX:
        raise ParameterError(f"index {n} exceeds the supported range (<= {MAX_INDEX})")
    return int(n)


def _is_exact(x):
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


class BernoulliCache:
    """Memoized B_n = B_n(0) and the coefficient rows of B_n(x)

    numbers[n] is B_n(0) (so B_1 = -1/2); poly_coeffs[n][k] is the
    coefficient of x^k in B_n(x)."""

    def __init__(self):
        self.numbers = [Fraction(1)]
        self.poly_coeffs = [(Fraction(1),)]
        self._lock = threading.Lock()

    def _grow_numbers(self, n):
        # sum_{k=0}^{m} C(m+1, k) B_k = 0
        for m in range(len(self.numbers), n + 1):
            total = sum(comb(m + 1, k) * self.numbers[k] for k in range(m))
            self.numbers.append(-total / (m + 1))

    def number(self, n):
        n = _check_index(n)
        if n >= len(self.numbers):
            with self._lock:
                self._grow_numbers(n)
        return self.numbers[n]

    def coefficients(self, n):
        n = _check_index(n)
        if n >= len(self.poly_coeffs):
            with self._lock:
                self._grow_numbers(n)
                for m in range(len(self.poly_coeffs), n + 1):
                    # B_m(x) = sum_k C(m, k) B_{m-k} x^k
                    row = tuple(comb(m, k) * self.numbers[m - k] for k in range(m + 1))
                    self.poly_coeffs.append(row)
        return self.poly_coeffs[n]


class EulerCache:
    """Memoized coefficient rows of the Euler polynomials E_n(x)

    Built from E_n(0) via E_n(x) + E_n(x+1) = 2x^n, which is read off the
    generating function 2e^{tx}/(e^t + 1)."""

    def __init__(self):
        self.values_at_zero = [Fraction(1)]
        self.poly_coeffs = [(Fraction(1),)]
        self._lock = threading.Lock()

    def coefficients(self, n):
        n = _check_index(n)
        if n >= len(self.poly_coeffs):
            with self._lock:
                e0 = self.values_at_zero
                for m in range(len(e0), n + 1):
                    e0.append(-sum(comb(m, k) * e0[k] for k in range(m)) / 2)
                for m in range(len(self.poly_coeffs), n + 1):
                    # E_m(x) = sum_k C(m, k) E_{m-k}(0) x^k
                    row = tuple(comb(m, k) * e0[m - k] for k in range(m + 1))
                    self.poly_coeffs.append(row)
        return self.poly_coeffs[n]


_BERNOULLI = BernoulliCache()
_EULER = EulerCache()


def _horner(coeffs, x):
    if _is_exact(x):
        x = Fraction(x)
        acc = Fraction(0)
    else:
        x = to_mpf(x)
        acc = mpmath.mpf(0)
        coeffs = [to_mpf(c) for c in coeffs]
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def bernoulli_number(n):
    """B_n = B_n(0) as an exact rational"""
    return _BERNOULLI.number(n)


def bernoulli_poly(n, x, periodic=False):
    """B_n(x), or the periodic B~_n(x) = B_n(x - floor x); exact for rational x"""
    coeffs = _BERNOULLI.coefficients(n)
    if periodic:
        if _is_exact(x):
            x = Fraction(x)
            x = x - floor(x)
        else:
            x = to_mpf(x)
            x = x - mpmath.floor(x)
    return _horner(coeffs, x)


def bernoulli_poly_coefficients(n):
    """Exact coefficients of B_n(x), constant term first"""
    return _BERNOULLI.coefficients(n)


def euler_poly(n, x):
    """E_n(x); exact for rational x"""
    return _horner(_EULER.coefficients(n), x)


def euler_poly_coefficients(n):
    return _EULER.coefficients(n)


def is_pole_shift(a):
    if _is_exact(a):
        a = Fraction(a)
        return a <= 0 and a.denominator == 1
    a = to_mpf(a)
    return a <= 0 and mpmath.isint(a)


@dataclass(frozen=True)
class DigammaConstant:
    """C_a = (1 - a) sum_{m>=0} 1/((m+a)(m+1)) = -gamma - psi(a)"""

    a: object
    value: object

    @classmethod
    def of(cls, a, ctx: PrecisionContext = DEFAULT_CONTEXT):
        return cls(a, digamma_constant(a, ctx))


def digamma_constant(a, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """C_a to working precision.

    Partial sums up to M followed by an Euler-Maclaurin correction for the
    tail sum_{m>=M} (1/(m+a) - 1/(m+1)): the integral log((M+1)/(M+a)),
    half the first term, and Bernoulli-weighted odd derivatives at M."""
    if is_pole_shift(a):
        raise PoleShiftError(a)
    if _is_exact(a) and Fraction(a) == 1:
        with ctx.workprec():
            return mpmath.mpf(0)
    with ctx.workprec(GUARD_BITS):
        a_mp = to_mpf(a)
        if a_mp == 1:
            return mpmath.mpf(0)
        target = mpmath.ldexp(mpmath.mpf(1), -(ctx.bits + GUARD_BITS))
        cutoff = max(32, ctx.bits // 4, int(mpmath.ceil(abs(a_mp))) + 8)
        partial = mpmath.fsum(1 / (m + a_mp) - 1 / (m + 1) for m in range(cutoff))

        tail = mpmath.log((cutoff + 1) / (cutoff + a_mp))
        tail += (1 / (cutoff + a_mp) - 1 / (cutoff + 1)) / 2
        previous = mpmath.inf
        k = 1
        while True:
            order = 2 * k - 1
            # d^j/dx^j (x+c)^{-1} = (-1)^j j! (x+c)^{-j-1}
            derivative = (-1) ** order * mpmath.factorial(order) * (
                (cutoff + a_mp) ** (-order - 1) - mpmath.mpf(cutoff + 1) ** (-order - 1)
            )
            term = to_mpf(bernoulli_number(2 * k)) / mpmath.factorial(2 * k) * derivative
            if abs(term) >= previous or k > MAX_INDEX // 2 - 1:
                break
            tail -= term
            previous = abs(term)
            if previous < target * abs(partial + tail):
                break
            k += 1
        value = partial + tail
    with ctx.workprec():
        return +value
