"""
Numerics foundation for the asymptotic laboratory
Precision contexts, log-domain complex values, stable kernels and sector geometry
"""

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Union

import mpmath

from .errors import ParameterError, RepresentationError, SectorError

GUARD_BITS = 16

# float range used when materialising a LogComplex as a Python complex
_FLOAT_LOG_MAX = 709.0
_FLOAT_LOG_MIN = -708.0

Real = Union[int, float, Fraction, str, "mpmath.mpf"]


def to_mpf(value):
    """Convert int/float/str/Fraction/mpf to an mpf at the current precision"""
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    if isinstance(value, str) and "/" in value:
        return to_mpf(Fraction(value))
    return mpmath.mpf(value)


def to_mpc(value):
    """Convert complex-like values (including SectorPoint) to an mpc"""
    if isinstance(value, SectorPoint):
        return +value.value
    if isinstance(value, Fraction):
        return mpmath.mpc(to_mpf(value))
    return mpmath.mpc(value)


def normalize_arg(theta):
    """Reduce an angle into the principal interval (-pi, pi]"""
    two_pi = 2 * mpmath.pi
    theta = theta - two_pi * mpmath.nint(theta / two_pi)
    if theta <= -mpmath.pi:
        theta += two_pi
    elif theta > mpmath.pi:
        theta -= two_pi
    return theta


def _unit(theta):
    """e^{i theta}, exact on the real axis so that 1 + (-1) cancels to zero"""
    if theta == 0:
        return mpmath.mpc(1)
    if abs(abs(theta) - mpmath.pi) <= mpmath.ldexp(mpmath.pi, 3 - mpmath.mp.prec):
        return mpmath.mpc(-1)
    return mpmath.expj(theta)


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision in bits plus truncation controls for infinite sums"""

    bits: int = 256
    tail_tol: object = field(default=None)
    max_terms: int = 20_000_000

    def __post_init__(self):
        if int(self.bits) != self.bits or self.bits < 53:
            raise ParameterError(f"precision must be an integer >= 53 bits, got {self.bits}")
        if self.tail_tol is None:
            object.__setattr__(self, "tail_tol", mpmath.ldexp(mpmath.mpf(1), -(self.bits - 12)))
        else:
            object.__setattr__(self, "tail_tol", mpmath.mpf(self.tail_tol))
        if not 0 < self.tail_tol < 1:
            raise ParameterError(f"tail_tol must lie in (0, 1), got {self.tail_tol}")
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise ParameterError(f"max_terms must be a positive integer, got {self.max_terms}")

    @classmethod
    def with_bits(cls, bits, max_terms=20_000_000):
        """Context whose tail tolerance follows the precision"""
        return cls(bits=int(bits), max_terms=max_terms)

    def replace(self, **changes):
        if "bits" in changes and "tail_tol" not in changes:
            changes["tail_tol"] = None
        return replace(self, **changes)

    def workprec(self, extra=0):
        """mpmath precision block for this context"""
        return mpmath.workprec(self.bits + extra)

    @property
    def noise_floor(self):
        return mpmath.ldexp(mpmath.mpf(1), -self.bits + GUARD_BITS)


DEFAULT_CONTEXT = PrecisionContext()


@dataclass(frozen=True)
class LogComplex:
    """Complex number stored as (log|z|, Arg z); log_mag = -inf encodes zero"""

    log_mag: object
    arg: object = 0

    def __post_init__(self):
        log_mag = mpmath.mpf(self.log_mag)
        object.__setattr__(self, "log_mag", log_mag)
        if log_mag == mpmath.ninf:
            object.__setattr__(self, "arg", mpmath.mpf(0))
        else:
            object.__setattr__(self, "arg", normalize_arg(mpmath.mpf(self.arg)))

    @classmethod
    def zero(cls):
        return cls(mpmath.ninf, 0)

    @classmethod
    def one(cls):
        return cls(0, 0)

    @classmethod
    def from_complex(cls, z):
        z = to_mpc(z)
        if z == 0:
            return cls.zero()
        if z.imag == 0:
            return cls(mpmath.log(abs(z.real)), 0 if z.real > 0 else mpmath.pi)
        return cls(mpmath.log(abs(z)), mpmath.arg(z))

    @classmethod
    def from_log(cls, log_value):
        """From a complex logarithm; the imaginary part is reduced mod 2 pi"""
        log_value = mpmath.mpc(log_value)
        return cls(log_value.real, log_value.imag)

    @property
    def is_zero(self):
        return self.log_mag == mpmath.ninf

    def log(self):
        """Principal logarithm log|z| + i Arg z"""
        if self.is_zero:
            raise RepresentationError("logarithm of zero")
        return mpmath.mpc(self.log_mag, self.arg)

    def __mul__(self, other):
        if not isinstance(other, LogComplex):
            other = LogComplex.from_complex(other)
        if self.is_zero or other.is_zero:
            return LogComplex.zero()
        return LogComplex(self.log_mag + other.log_mag, self.arg + other.arg)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, LogComplex):
            other = LogComplex.from_complex(other)
        if other.is_zero:
            raise ZeroDivisionError("division by a zero LogComplex")
        if self.is_zero:
            return LogComplex.zero()
        return LogComplex(self.log_mag - other.log_mag, self.arg - other.arg)

    def __neg__(self):
        if self.is_zero:
            return self
        return LogComplex(self.log_mag, self.arg + mpmath.pi)

    def __abs__(self):
        return LogComplex(self.log_mag, 0)

    def to_mpc(self):
        """Value as an mpc; mpmath exponents are unbounded so this never overflows"""
        if self.is_zero:
            return mpmath.mpc(0)
        return mpmath.exp(self.log_mag) * _unit(self.arg)

    def to_complex(self):
        """Value as a Python complex, refused outside the double range"""
        if self.is_zero:
            return 0j
        if not _FLOAT_LOG_MIN <= self.log_mag <= _FLOAT_LOG_MAX:
            raise RepresentationError(
                f"|z| = e^{mpmath.nstr(self.log_mag, 8)} is outside the double-precision range"
            )
        return complex(self.to_mpc())

    def log10_abs(self):
        return self.log_mag / mpmath.ln10


@dataclass(frozen=True)
class SectorPoint:
    """A point w of the sector D_theta = { r e^{i alpha} : |alpha| <= theta }, w != 0"""

    value: object
    half_angle: object

    def __post_init__(self):
        value = to_mpc(self.value)
        theta = to_mpf(self.half_angle)
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "half_angle", theta)
        if not 0 <= theta < mpmath.pi / 2:
            raise SectorError(f"half angle must lie in [0, pi/2), got {theta}")
        if value == 0:
            raise SectorError("0 is excluded from the sector")
        slack = mpmath.ldexp(mpmath.mpf(1), 4 - mpmath.mp.prec)
        if abs(mpmath.arg(value)) > theta * (1 + slack) + slack:
            raise SectorError(
                f"|Arg w| = {mpmath.nstr(abs(mpmath.arg(value)), 8)} exceeds "
                f"theta = {mpmath.nstr(theta, 8)}"
            )

    @classmethod
    def on_ray(cls, radius, angle, half_angle=None):
        angle = to_mpf(angle)
        theta = abs(angle) if half_angle is None else half_angle
        return cls(to_mpf(radius) * mpmath.expj(angle), theta)

    @property
    def delta(self):
        """Slope of the equivalent restricted-angle region |Im w| <= Delta Re w"""
        return mpmath.tan(self.half_angle)

    def in_restricted_angle(self):
        slack = mpmath.ldexp(mpmath.mpf(1), 4 - mpmath.mp.prec)
        return abs(self.value.imag) <= self.delta * self.value.real * (1 + slack)


@dataclass(frozen=True)
class PathSpec:
    """Path z = x + i x^p approaching 0; tangential to the imaginary axis iff p < 1"""

    exponent: Fraction

    def __post_init__(self):
        p = Fraction(self.exponent)
        if p <= 0:
            raise ParameterError(f"path exponent must be positive, got {p}")
        object.__setattr__(self, "exponent", p)

    @classmethod
    def parse(cls, text):
        return cls(Fraction(str(text).strip()))

    @property
    def tangential(self):
        return self.exponent < 1

    def label(self):
        p = self.exponent
        return str(p.numerator) if p.denominator == 1 else f"{p.numerator}/{p.denominator}"

    def point(self, x):
        return path_point(self, x)


def log_sum_exp(terms: Iterable[LogComplex], ctx: PrecisionContext = DEFAULT_CONTEXT):
    """LogComplex of the sum, factoring out the largest magnitude.

    Summation order is index-ascending so the result is reproducible."""
    terms = list(terms)
    if not terms:
        raise ParameterError("log_sum_exp needs at least one term")
    with ctx.workprec(GUARD_BITS):
        live = [t for t in terms if not t.is_zero]
        if not live:
            return LogComplex.zero()
        peak = max(t.log_mag for t in live)
        total = mpmath.mpc(0)
        for t in live:
            total += mpmath.exp(t.log_mag - peak) * _unit(t.arg)
        if total == 0:
            return LogComplex.zero()
        scaled = LogComplex.from_complex(total)
        result = (peak + scaled.log_mag, scaled.arg)
    with ctx.workprec():
        return LogComplex(+result[0], +result[1])


def log_sum_exp_real(log_terms, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """log of a sum of positive reals given by their logarithms"""
    return log_sum_exp([LogComplex(t, 0) for t in log_terms], ctx).log_mag


def expm1_mp(z):
    """e^z - 1 at the current mpmath precision"""
    z = to_mpc(z)
    if z == 0:
        return mpmath.mpc(0)
    if abs(z) < 1:
        half = z / 2
        return 2 * mpmath.exp(half) * mpmath.sinh(half)
    return mpmath.exp(z) - 1


def expm1_complex(z, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """e^z - 1 with full relative accuracy near z = 0"""
    with ctx.workprec(GUARD_BITS):
        value = expm1_mp(z)
    with ctx.workprec():
        return +value


def path_point(path: PathSpec, x):
    """x + i x^p; a SectorPoint of D_{pi/4} for p >= 1, a bare mpc for tangential paths"""
    x = to_mpf(x)
    if x <= 0:
        raise ParameterError(f"path parameter x must be positive, got {x}")
    p = path.exponent
    if p.denominator == 1:
        height = x ** p.numerator
    else:
        height = mpmath.root(x, p.denominator) ** p.numerator
    value = mpmath.mpc(x, height)
    if path.tangential:
        return value
    return SectorPoint(value, mpmath.pi / 4)
