"""
Ingham-type Tauberian predictions for coefficient and partial-sum asymptotics
"""

from dataclasses import dataclass

import mpmath

from .errors import ParameterError
from .modular_lab import SequenceTable, partition_numbers
from .numerics import DEFAULT_CONTEXT, GUARD_BITS, PrecisionContext, to_mpf


@dataclass(frozen=True)
class InghamParams:
    """Generating function behaving like lambda Log(1/z)^alpha z^beta e^{gamma/z}"""

    lam: object
    alpha: object
    beta: object
    gamma: object

    def __post_init__(self):
        for name in ("lam", "alpha", "beta", "gamma"):
            object.__setattr__(self, name, to_mpf(getattr(self, name)))
        if self.gamma <= 0:
            raise ParameterError(f"gamma must be positive, got {self.gamma}")
        if self.lam < 0:
            raise ParameterError(f"lambda must be non-negative, got {self.lam}")

    @classmethod
    def partition(cls, ctx: PrecisionContext = DEFAULT_CONTEXT):
        """P(e^{-z}) ~ sqrt(z/(2 pi)) e^{pi^2/(6z)}"""
        with ctx.workprec(GUARD_BITS):
            return cls(1 / mpmath.sqrt(2 * mpmath.pi), 0, mpmath.mpf(1) / 2, mpmath.pi**2 / 6)

    def profile(self):
        return GrowthProfile(self)


def _check_argument(n, what="n"):
    n = to_mpf(n)
    if n < 2:
        raise ParameterError(f"{what} must be at least 2 so that log {what} > 0, got {n}")
    return n


def _log_power_of_log(alpha, log_value):
    # alpha * log(log_value), with the convention L^0 = 1
    if alpha == 0:
        return mpmath.mpf(0)
    if log_value <= 0:
        raise ParameterError("a non-zero log exponent needs a positive logarithm")
    return alpha * mpmath.log(log_value)


def log_ingham_coefficient(p: InghamParams, n, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """log of lambda gamma^{beta/2+1/4} (log n)^alpha / (2^{alpha+1} sqrt(pi) n^{beta/2+3/4}) e^{2 sqrt(gamma n)}"""
    with ctx.workprec(GUARD_BITS):
        n = _check_argument(n)
        if p.lam == 0:
            return mpmath.ninf
        value = (
            mpmath.log(p.lam)
            + (p.beta / 2 + mpmath.mpf(1) / 4) * mpmath.log(p.gamma)
            + _log_power_of_log(p.alpha, mpmath.log(n))
            - (p.alpha + 1) * mpmath.ln2
            - mpmath.log(mpmath.pi) / 2
            - (p.beta / 2 + mpmath.mpf(3) / 4) * mpmath.log(n)
            + 2 * mpmath.sqrt(p.gamma * n)
        )
    with ctx.workprec():
        return +value


def log_ingham_partial_sum(p: InghamParams, N, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """log of lambda gamma^{beta/2-1/4} (log N)^alpha / (2^{alpha+1} sqrt(pi) N^{beta/2+1/4}) e^{2 sqrt(gamma N)}"""
    with ctx.workprec(GUARD_BITS):
        N = _check_argument(N, "N")
        if p.lam == 0:
            return mpmath.ninf
        value = (
            mpmath.log(p.lam)
            + (p.beta / 2 - mpmath.mpf(1) / 4) * mpmath.log(p.gamma)
            + _log_power_of_log(p.alpha, mpmath.log(N))
            - (p.alpha + 1) * mpmath.ln2
            - mpmath.log(mpmath.pi) / 2
            - (p.beta / 2 + mpmath.mpf(1) / 4) * mpmath.log(N)
            + 2 * mpmath.sqrt(p.gamma * N)
        )
    with ctx.workprec():
        return +value


def ingham_coefficient_asymptotic(p: InghamParams, n, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Predicted b_n for weakly increasing coefficients; mpmath exponents do not overflow"""
    log_value = log_ingham_coefficient(p, n, ctx)
    with ctx.workprec():
        return mpmath.exp(log_value) if log_value != mpmath.ninf else mpmath.mpf(0)


def ingham_partial_sum_asymptotic(p: InghamParams, N, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Predicted sum_{n<=N} b_n"""
    log_value = log_ingham_partial_sum(p, N, ctx)
    with ctx.workprec():
        return mpmath.exp(log_value) if log_value != mpmath.ninf else mpmath.mpf(0)


def hardy_ramanujan(n, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """e^{pi sqrt(2n/3)}/(4 sqrt(3) n)"""
    with ctx.workprec():
        n = to_mpf(n)
        return mpmath.exp(mpmath.pi * mpmath.sqrt(2 * n / 3)) / (4 * mpmath.sqrt(3) * n)


class GrowthProfile:
    """phi(z) = gamma/z and chi(z) = lambda Log(1/z)^alpha z^beta, with
    psi(x) = sqrt(gamma/x) the inverse of -phi'"""

    def __init__(self, params: InghamParams):
        self.params = params

    def phi(self, z):
        return self.params.gamma / z

    def dphi(self, z):
        return -self.params.gamma / z**2

    def d2phi(self, z):
        return 2 * self.params.gamma / z**3

    def psi(self, x):
        return mpmath.sqrt(self.params.gamma / x)

    def log_chi(self, z, log_of_inverse=None):
        """log chi(z); log_of_inverse overrides Log(1/z)"""
        p = self.params
        log_inverse = -mpmath.log(z) if log_of_inverse is None else log_of_inverse
        return mpmath.log(p.lam) + _log_power_of_log(p.alpha, log_inverse) + p.beta * mpmath.log(z)


def log_ingham_general_A(profile: GrowthProfile, x, ctx: PrecisionContext = DEFAULT_CONTEXT,
                         literal_log=False):
    """log of chi(psi(x)) e^{phi(psi(x)) + x psi(x)} / (psi(x) sqrt(2 pi phi''(psi(x)))).

    By default Log(1/psi(x)) is replaced by (log x)/2, its leading behaviour,
    which turns the formula into the partial-sum prediction exactly;
    literal_log keeps Log(1/psi(x)) itself."""
    with ctx.workprec(GUARD_BITS):
        x = to_mpf(x)
        if x <= 0:
            raise ParameterError(f"x must be positive, got {x}")
        if profile.params.lam == 0:
            return mpmath.ninf
        t = profile.psi(x)
        log_inverse = None if literal_log else mpmath.log(x) / 2
        value = (
            profile.log_chi(t, log_inverse)
            + profile.phi(t)
            + x * t
            - mpmath.log(t)
            - mpmath.log(2 * mpmath.pi * profile.d2phi(t)) / 2
        )
    with ctx.workprec():
        return +value


def ingham_general_A(profile: GrowthProfile, x, ctx: PrecisionContext = DEFAULT_CONTEXT,
                     literal_log=False):
    log_value = log_ingham_general_A(profile, x, ctx, literal_log)
    with ctx.workprec():
        return mpmath.exp(log_value) if log_value != mpmath.ninf else mpmath.mpf(0)


@dataclass(frozen=True)
class PredictionCheck:
    n: int
    exact: int
    prediction: object

    @property
    def ratio(self):
        return mpmath.mpf(self.exact) / self.prediction


def partition_partial_sums(N):
    """sum_{n<=k} p(n) for k = 0..N"""
    return partition_numbers(N).partial_sums()


def check_partition_coefficients(ns, ctx: PrecisionContext = DEFAULT_CONTEXT, table: SequenceTable = None):
    """Exact p(n) against the Ingham coefficient prediction"""
    table = partition_numbers(max(ns)) if table is None else table
    params = InghamParams.partition(ctx)
    return [PredictionCheck(n, table[n], ingham_coefficient_asymptotic(params, n, ctx)) for n in ns]


def check_partition_partial_sums(Ns, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Exact sum_{n<=N} p(n) against the partial-sum prediction"""
    sums = partition_partial_sums(max(Ns))
    params = InghamParams.partition(ctx)
    return [PredictionCheck(N, sums[N], ingham_partial_sum_asymptotic(params, N, ctx)) for N in Ns]
