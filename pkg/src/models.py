"""
Function models consumed by the Euler-Maclaurin engine and the lattice sums
A model carries an evaluator on a sector, its Laurent data at 0, decay
certificates and the value of its (regularized) improper integral
"""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Optional

import mpmath

from .errors import InsufficientTaylorData, ParameterError
from .numerics import DEFAULT_CONTEXT, GUARD_BITS, PrecisionContext, expm1_mp, to_mpc, to_mpf
from .special_fn import bernoulli_number


def is_exact(value):
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def exact_or_mpf(value):
    """Fraction for exact input (ints, Fractions, floats, "p/q" strings), mpf otherwise"""
    if isinstance(value, bool):
        raise ParameterError(f"expected a number, got {value!r}")
    if is_exact(value):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError:
            return to_mpf(value)
    return to_mpf(value)


def scalar_product(*factors):
    """Product that stays an exact Fraction while every factor is exact"""
    if all(is_exact(f) for f in factors):
        result = Fraction(1)
        for f in factors:
            result *= f
        return result
    result = mpmath.mpf(1)
    for f in factors:
        result *= to_mpf(f)
    return result


def scalar_sum(*terms):
    if all(is_exact(t) for t in terms):
        return sum((Fraction(t) for t in terms), Fraction(0))
    return mpmath.fsum(to_mpf(t) for t in terms)


def _resolve(value):
    """Materialize a stored constant; callables are evaluated at the current precision"""
    return value() if callable(value) else value


@dataclass(frozen=True)
class FunctionModel:
    """A function f on the sector D_theta together with the data the
    expansions consume.

    taylor[n] is b_n, so f^{(n)}(0) = n! b_n; residue is b_{-1} and is zero
    for regular models. integral_value is the integral of f over (0, inf),
    or for pole models the regularized integral of f(x) - b_{-1} e^{-x}/x;
    it may be a zero-argument callable evaluated at the working precision.

    Decay certificates:
      power law    |f(w)| <= decay_const |w|^{-1-decay_eps} for |w| >= decay_radius
      exponential  |f(w)| <= decay_const_exp e^{-decay_rate Re w} for Re w >= decay_threshold
    """

    name: str
    evaluator: Callable
    taylor: tuple
    integral_value: object
    sector_half_angle: object
    residue: object = Fraction(0)
    decay_eps: object = 1
    decay_const: object = 1
    decay_radius: object = 0
    decay_rate: Optional[object] = None
    decay_const_exp: Optional[object] = None
    decay_threshold: object = 0
    description: str = ""

    def __post_init__(self):
        object.__setattr__(self, "taylor", tuple(self.taylor))
        theta = to_mpf(self.sector_half_angle)
        if not 0 <= theta < mpmath.pi / 2:
            raise ParameterError(f"sector half angle must lie in [0, pi/2), got {theta}")
        object.__setattr__(self, "sector_half_angle", theta)
        if to_mpf(self.decay_eps) <= 0 or to_mpf(self.decay_const) <= 0:
            raise ParameterError("power-law decay certificate needs eps > 0 and C > 0")
        if (self.decay_rate is None) != (self.decay_const_exp is None):
            raise ParameterError("exponential certificate needs both a rate and a constant")
        if self.decay_rate is not None and to_mpf(self.decay_rate) <= 0:
            raise ParameterError("exponential decay rate must be positive")

    @property
    def has_pole(self):
        return self.residue != 0

    @property
    def laurent_at_zero(self):
        """(b_{-1}, b_0, b_1, ...)"""
        return (self.residue,) + self.taylor

    @property
    def has_exponential_certificate(self):
        return self.decay_rate is not None

    def require_taylor(self, count):
        if len(self.taylor) < count:
            raise InsufficientTaylorData(count, len(self.taylor))

    def derivative_at_zero(self, n):
        """f^{(n)}(0) = n! b_n (of the regular part for pole models)"""
        self.require_taylor(n + 1)
        return scalar_product(factorial(n), self.taylor[n])

    def integral(self):
        return _resolve(self.integral_value)

    def __call__(self, w):
        return self.evaluator(to_mpc(w))

    def scaled(self, c):
        """Model of x -> f(c x) for a real c > 0"""
        c = exact_or_mpf(c)
        if c <= 0:
            raise ParameterError(f"scale factor must be positive, got {c}")
        taylor = tuple(scalar_product(b, c**n) for n, b in enumerate(self.taylor))
        residue = scalar_product(self.residue, 1 / c)
        base_integral = self.integral_value
        base_residue = self.residue

        def integral():
            value = scalar_product(_resolve(base_integral), 1 / c)
            if base_residue == 0 or c == 1:
                return value
            # Frullani: int (e^{-u/c} - e^{-u})/u du = log c
            return to_mpf(value) - to_mpf(base_residue) * mpmath.log(to_mpf(c)) / to_mpf(c)

        exact = (base_residue == 0 or c == 1) and not callable(base_integral)
        integral_value = integral() if exact else integral

        base = self.evaluator

        def evaluator(w):
            return base(w * to_mpf(c))

        rate = None if self.decay_rate is None else scalar_product(self.decay_rate, c)
        threshold = scalar_product(self.decay_threshold, 1 / c)
        return FunctionModel(
            name=f"{self.name}*{c}",
            evaluator=evaluator,
            taylor=taylor,
            integral_value=integral_value,
            sector_half_angle=self.sector_half_angle,
            residue=residue,
            decay_eps=self.decay_eps,
            decay_const=scalar_product(
                self.decay_const, to_mpf(c) ** (-1 - to_mpf(self.decay_eps))
            ),
            decay_radius=scalar_product(self.decay_radius, 1 / c),
            decay_rate=rate,
            decay_const_exp=self.decay_const_exp,
            decay_threshold=threshold,
            description=f"{self.description} (argument scaled by {c})".strip(),
        )

    def laurent_residual(self, x, K, ctx: PrecisionContext = DEFAULT_CONTEXT):
        """|f(x) - b_{-1}/x - sum_{n<K} b_n x^n| at a small real x"""
        self.require_taylor(K)
        with ctx.workprec(GUARD_BITS):
            x = to_mpf(x)
            approx = to_mpf(self.residue) / x
            approx += mpmath.polyval([to_mpf(b) for b in reversed(self.taylor[:K])], x)
            residual = abs(self(x) - approx)
        with ctx.workprec():
            return +residual

    def certificate_holds(self, w, ctx: PrecisionContext = DEFAULT_CONTEXT):
        """Check both decay certificates at one point of the sector"""
        with ctx.workprec(GUARD_BITS):
            w = to_mpc(w)
            value = abs(self(w))
            # bounds attained with equality must survive rounding
            value = value * (1 - mpmath.ldexp(mpmath.mpf(1), -ctx.bits))
            ok = True
            if abs(w) >= to_mpf(self.decay_radius):
                bound = to_mpf(self.decay_const) * abs(w) ** (-1 - to_mpf(self.decay_eps))
                ok = ok and value <= bound
            if self.has_exponential_certificate and w.real >= to_mpf(self.decay_threshold):
                bound = to_mpf(self.decay_const_exp) * mpmath.exp(-to_mpf(self.decay_rate) * w.real)
                ok = ok and value <= bound
        return ok


@dataclass(frozen=True)
class FunctionModel2D:
    """A function of two variables on D_theta1 x D_theta2.

    mixed[n1][n2] = f^{(n1,n2)}(0,0) for n1 + n2 below the stored order;
    edge_first[n1] = int_0^inf f^{(n1,0)}(0, x2) dx2;
    edge_second[n2] = int_0^inf f^{(0,n2)}(x1, 0) dx1.
    The decay certificate |f(w1,w2)| <= decay_const_exp e^{-r1 Re w1 - r2 Re w2}
    holds on the whole product sector."""

    name: str
    evaluator: Callable
    mixed: tuple
    edge_first: tuple
    edge_second: tuple
    full_integral: object
    sector_half_angles: tuple
    decay_rates: tuple
    decay_const_exp: object
    description: str = ""

    def __post_init__(self):
        object.__setattr__(self, "mixed", tuple(tuple(row) for row in self.mixed))
        object.__setattr__(self, "edge_first", tuple(self.edge_first))
        object.__setattr__(self, "edge_second", tuple(self.edge_second))
        thetas = tuple(to_mpf(t) for t in self.sector_half_angles)
        if len(thetas) != 2 or not all(0 <= t < mpmath.pi / 2 for t in thetas):
            raise ParameterError("two sector half angles in [0, pi/2) are required")
        object.__setattr__(self, "sector_half_angles", thetas)
        if len(self.decay_rates) != 2 or any(to_mpf(r) <= 0 for r in self.decay_rates):
            raise ParameterError("two positive per-axis decay rates are required")

    @property
    def order(self):
        """Largest N for which the mixed data covers n1 + n2 < N"""
        n = 0
        while all(len(self.mixed) > n1 and len(self.mixed[n1]) > n - n1 for n1 in range(n + 1)):
            n += 1
        return n

    @property
    def sector_half_angle(self):
        return min(self.sector_half_angles)

    def require_order(self, N):
        if self.order < N:
            raise InsufficientTaylorData(N, self.order, "orders of mixed Taylor data")
        edges = min(len(self.edge_first), len(self.edge_second))
        if edges < N + 1:
            raise InsufficientTaylorData(N + 1, edges, "edge integrals")

    def __call__(self, w1, w2):
        return self.evaluator(to_mpc(w1), to_mpc(w2))

    @classmethod
    def separable(cls, g: FunctionModel, h: FunctionModel, name=None, evaluator=None,
                  ctx: PrecisionContext = DEFAULT_CONTEXT):
        """f(x1, x2) = g(x1) h(x2) with every stored quantity factored from g and h"""
        for part in (g, h):
            if part.has_pole:
                raise ParameterError(f"separable factor {part.name} must be regular")
            if not part.has_exponential_certificate or part.decay_threshold != 0:
                raise ParameterError(
                    f"separable factor {part.name} needs an exponential certificate valid on the whole sector"
                )
        with ctx.workprec(GUARD_BITS):
            int_g, int_h = g.integral(), h.integral()
            dg = [g.derivative_at_zero(n) for n in range(len(g.taylor))]
            dh = [h.derivative_at_zero(n) for n in range(len(h.taylor))]
            mixed = tuple(tuple(scalar_product(x, y) for y in dh) for x in dg)
            edge_first = tuple(scalar_product(x, int_h) for x in dg)
            edge_second = tuple(scalar_product(int_g, y) for y in dh)
            full = scalar_product(int_g, int_h)
        if evaluator is None:
            g_eval, h_eval = g.evaluator, h.evaluator

            def evaluator(w1, w2):
                return g_eval(w1) * h_eval(w2)

        return cls(
            name=name or f"{g.name}x{h.name}",
            evaluator=evaluator,
            mixed=mixed,
            edge_first=edge_first,
            edge_second=edge_second,
            full_integral=full,
            sector_half_angles=(g.sector_half_angle, h.sector_half_angle),
            decay_rates=(g.decay_rate, h.decay_rate),
            decay_const_exp=scalar_product(g.decay_const_exp, h.decay_const_exp),
            description=f"{g.description} times {h.description}",
        )


def quadrature_integral(model: FunctionModel, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Numerical (regularized) integral of a model over (0, inf), for validating integral_value"""
    with ctx.workprec(GUARD_BITS):
        residue = to_mpf(model.residue)

        def integrand(x):
            value = model(x).real
            if residue:
                value -= residue * mpmath.exp(-x) / x
            return value

        value = mpmath.quad(integrand, [0, 1, 10, mpmath.inf])
    with ctx.workprec():
        return +value


# built-in catalogue

def exp_model(terms=40, half_angle=1.5):
    """f(x) = e^{-x}"""
    theta = mpmath.mpf(half_angle)
    return FunctionModel(
        name="exp",
        evaluator=lambda w: mpmath.exp(-w),
        taylor=tuple(Fraction((-1) ** n, factorial(n)) for n in range(terms)),
        integral_value=Fraction(1),
        sector_half_angle=theta,
        decay_eps=1,
        # sup r^2 e^{-r cos theta} = (2/(e cos theta))^2
        decay_const=(2 / (mpmath.e * mpmath.cos(theta))) ** 2,
        decay_rate=1,
        decay_const_exp=1,
        decay_threshold=0,
        description="e^{-x}",
    )


def exp_over_x_model(terms=40, half_angle=1.5):
    """f(x) = e^{-x}/x, a simple pole with b_{-1} = 1"""
    theta = mpmath.mpf(half_angle)
    return FunctionModel(
        name="exp-over-x",
        evaluator=lambda w: mpmath.exp(-w) / w,
        # e^{-x}/x = 1/x + sum_{n>=0} (-1)^{n+1} x^n/(n+1)!
        taylor=tuple(Fraction((-1) ** (n + 1), factorial(n + 1)) for n in range(terms)),
        residue=Fraction(1),
        integral_value=Fraction(0),
        sector_half_angle=theta,
        decay_eps=1,
        decay_const=1 / (mpmath.e * mpmath.cos(theta)),
        decay_rate=1,
        decay_const_exp=1,
        decay_threshold=1,
        description="e^{-x}/x",
    )


def eisenstein_kernel_model(terms=40, half_angle=None):
    """f(x) = x^3 e^{-x}/(1 - e^{-x}) = x^3/(e^x - 1)"""
    theta = mpmath.pi / 3 if half_angle is None else mpmath.mpf(half_angle)
    cos_theta = mpmath.cos(theta)
    # x/(e^x - 1) = sum B_k x^k/k!
    taylor = tuple(
        Fraction(0) if n < 2 else bernoulli_number(n - 2) / factorial(n - 2) for n in range(terms)
    )
    return FunctionModel(
        name="eisenstein-kernel",
        evaluator=lambda w: w**3 / expm1_mp(w),
        taylor=taylor,
        integral_value=lambda: mpmath.pi**4 / 15,
        sector_half_angle=theta,
        decay_eps=1,
        # |w|^5 e^{-Re w}/(1 - e^{-1}) with Re w >= 1
        decay_const=(5 / (mpmath.e * cos_theta)) ** 5 / (1 - mpmath.exp(-1)),
        decay_radius=1 / cos_theta,
        decay_rate=mpmath.mpf(1) / 2,
        # sup r^3 e^{-r/2} = (6/e)^3
        decay_const_exp=(6 / mpmath.e) ** 3 / (cos_theta**3 * (1 - mpmath.exp(-1))),
        decay_threshold=1,
        description="x^3/(e^x - 1)",
    )


def exp2d_model(terms=24):
    """f(x1, x2) = e^{-x1-x2}"""
    one = exp_model(terms)
    return FunctionModel2D.separable(
        one, one, name="exp2d", evaluator=lambda w1, w2: mpmath.exp(-w1 - w2)
    )


def exp2d_skew_model(terms=24):
    """f(x1, x2) = e^{-x1-2x2}"""
    one = exp_model(terms)
    return FunctionModel2D.separable(
        one, one.scaled(2), name="exp2d-skew", evaluator=lambda w1, w2: mpmath.exp(-w1 - 2 * w2)
    )


MODEL_FACTORIES = {
    "exp": exp_model,
    "exp-over-x": exp_over_x_model,
    "eisenstein-kernel": eisenstein_kernel_model,
    "exp2d": exp2d_model,
    "exp2d-skew": exp2d_skew_model,
}

TWO_DIMENSIONAL = frozenset({"exp2d", "exp2d-skew"})


def get_model(name, terms=None):
    try:
        factory = MODEL_FACTORIES[name]
    except KeyError:
        known = ", ".join(sorted(MODEL_FACTORIES))
        raise ParameterError(f"unknown model {name!r}; built-in models are {known}") from None
    return factory() if terms is None else factory(terms)
