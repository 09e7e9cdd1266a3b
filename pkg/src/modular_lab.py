"""
Partition and Eisenstein laboratories
Exact p(n) and sigma_3(n), log-domain P(e^{-z}) and g_3(e^{-w}), the modular
oracles for both, and the two error tables along straight and tangential paths
"""

import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import isqrt
from typing import Optional

import mpmath

from .errors import LabError, ParameterError, PrecisionRefused, SlowConvergence
from .numerics import (
    DEFAULT_CONTEXT,
    GUARD_BITS,
    LogComplex,
    PathSpec,
    PrecisionContext,
    expm1_complex,
    expm1_mp,
    normalize_arg,
    path_point,
    to_mpc,
)

LAB_STANDARDS = {
    # x = 10^-k for k in exponents
    "exponents": (1, 2, 3, 4, 5),
    "paths": ("1", "2", "1/3"),
    "table1_bits": 192,
    "table2_max_bits": 2**16,
    "table2_max_terms": 10**6,
    "guard_bits": 64,
    "block_size": 256,
    "digits": 10,
}

CSV_HEADER = ("x", "path_exponent", "error_value", "precision_bits", "status")

# values as printed in the source tables, keyed by (k, path) for x = 10^-k
PRINTED_TABLE1 = {
    (1, "1"): "0.0058802931", (1, "2"): "0.0041787363", (1, "1/3"): "0.0197422414",
    (2, "1"): "0.0005891329", (2, "2"): "0.0004166007", (2, "1/3"): "0.0088566903",
    (3, "1"): "0.0000589243", (3, "2"): "0.0000416658", (3, "1/3"): "0.0234673077",
    (4, "1"): "0.0000058925", (4, "2"): "0.0000041666", (4, "1/3"): "0.1284298533",
    (5, "1"): "0.0000005892", (5, "2"): "0.0000004166", (5, "1/3"): "0.2648476442",
}

PRINTED_TABLE2 = {
    (1, "1"): "0.18293e-55", (1, "2"): "0.67139e-139", (1, "1/3"): "19030e16",
    (2, "1"): "0.53168e-823", (2, "2"): "0.17223e-1679", (2, "1/3"): "37122e21",
    (3, "1"): "0.22863e-8534", (3, "2"): "0.22329e-17106", (3, "1/3"): "75858e24",
    (4, "1"): "0.49431e-85684", (4, "2"): "0.10073e-171409", (4, "1/3"): "12065e27",
    (5, "1"): "0.11030e-857216", (5, "2"): "0.49985e-1714479", (5, "1/3"): "58757e28",
}

STATUS_OK = "ok"
STATUS_PRECISION = "skipped (precision ceiling)"
STATUS_TERMS = "skipped (term ceiling)"


@dataclass(frozen=True)
class SequenceTable:
    """Exact integer sequence indexed from 0 (sigma_3 tables carry a 0 at index 0)"""

    kind: str
    values: tuple

    def __getitem__(self, n):
        return self.values[n]

    def __len__(self):
        return len(self.values)

    def partial_sums(self):
        running, sums = 0, []
        for v in self.values:
            running += v
            sums.append(running)
        return SequenceTable(f"{self.kind} partial sums", tuple(sums))


def _pentagonal_offsets(n_max):
    offsets = []
    k = 1
    while True:
        first = k * (3 * k - 1) // 2
        if first > n_max:
            break
        sign = 1 if k % 2 else -1
        offsets.append((first, sign))
        second = k * (3 * k + 1) // 2
        if second <= n_max:
            offsets.append((second, sign))
        k += 1
    return offsets


def partition_numbers(n_max):
    """p(0..n_max) by Euler's pentagonal-number recurrence"""
    if int(n_max) != n_max or n_max < 0:
        raise ParameterError(f"n_max must be a non-negative integer, got {n_max}")
    n_max = int(n_max)
    offsets = _pentagonal_offsets(n_max)
    p = [1] + [0] * n_max
    for n in range(1, n_max + 1):
        total = 0
        for offset, sign in offsets:
            if offset > n:
                break
            total += p[n - offset] if sign > 0 else -p[n - offset]
        p[n] = total
    return SequenceTable("partition", tuple(p))


def partition_numbers_dp(n_max):
    """p(0..n_max) by coin counting over parts 1..n_max; independent of the recurrence"""
    p = [1] + [0] * n_max
    for part in range(1, n_max + 1):
        for n in range(part, n_max + 1):
            p[n] += p[n - part]
    return SequenceTable("partition", tuple(p))


def sigma3(n):
    """sum of d^3 over the divisors d of n"""
    if int(n) != n or n < 1:
        raise ParameterError(f"sigma3 needs a positive integer, got {n}")
    n = int(n)
    total = 0
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            total += d**3
            other = n // d
            if other != d:
                total += other**3
    return total


def sigma3_table(n_max):
    """sigma_3(0..n_max) by a divisor sieve, with sigma_3(0) = 0"""
    values = [0] * (n_max + 1)
    for d in range(1, n_max + 1):
        cube = d**3
        for multiple in range(d, n_max + 1, d):
            values[multiple] += cube
    return SequenceTable("sigma3", tuple(values))


def _require_right_half_plane(z, what="z"):
    z = to_mpc(z)
    if z.real <= 0:
        raise ParameterError(f"Re {what} must be positive, got {what} = {mpmath.nstr(z, 8)}")
    return z


def partition_term_count(z, bits):
    """Factors of the product needed at the given precision: ceil((bits+16) ln 2 / Re z)"""
    z = to_mpc(z)
    return int(mpmath.ceil((bits + GUARD_BITS) * mpmath.ln2 / z.real))


def log_partition_gf(z, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Log P(e^{-z}) = -sum_{n>=1} Log(1 - e^{-nz}).

    Factors are multiplied in blocks and each block contributes one logarithm;
    factors with |nz| < 1/2 use expm1 so that 1 - q^n keeps its relative accuracy."""
    z = _require_right_half_plane(z)
    n_max = partition_term_count(z, ctx.bits)
    if n_max > ctx.max_terms:
        raise SlowConvergence(ctx.max_terms, "partition product")
    guard = 32 + n_max.bit_length()
    block = LAB_STANDARDS["block_size"]
    with ctx.workprec(guard):
        z = to_mpc(z)
        q = mpmath.exp(-z)
        qn = mpmath.mpc(1)
        small = abs(z) < mpmath.mpf(1) / 2
        log_total = mpmath.mpc(0)
        product = mpmath.mpc(1)
        for n in range(1, n_max + 1):
            qn *= q
            if small and n * abs(z) < mpmath.mpf(1) / 2:
                factor = -expm1_mp(-n * z)
            else:
                factor = 1 - qn
            product *= factor
            if n % block == 0:
                log_total += mpmath.log(product)
                product = mpmath.mpc(1)
        log_total += mpmath.log(product)
        result = LogComplex.from_log(-log_total)
    with ctx.workprec():
        return LogComplex(+result.log_mag, +result.arg)


def log_partition_gf_modular(z, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Log P(e^{-z}) through eta inversion:
    pi^2/(6z) + (1/2) Log(z/(2 pi)) - z/24 + Log P(e^{-4 pi^2/z})"""
    z = _require_right_half_plane(z)
    with ctx.workprec(GUARD_BITS):
        z = to_mpc(z)
        inverted = 4 * mpmath.pi**2 / z
        tail = log_partition_gf(inverted, ctx.replace(bits=ctx.bits + GUARD_BITS))
        value = mpmath.pi**2 / (6 * z) + mpmath.log(z / (2 * mpmath.pi)) / 2 - z / 24 + tail.log()
        result = LogComplex.from_log(value)
    with ctx.workprec():
        return LogComplex(+result.log_mag, +result.arg)


def inverted_nome_modulus(z, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """|e^{-4 pi^2/z}|: tends to 0 along non-tangential paths and to 1 along x + i x^{1/3}"""
    with ctx.workprec():
        z = to_mpc(z)
        return mpmath.exp(-4 * mpmath.pi**2 * (1 / z).real)


def partition_series_sum(z, K, ctx: PrecisionContext = DEFAULT_CONTEXT, table=None):
    """sum_{n<=K} p(n) e^{-nz} together with a bound for the omitted terms"""
    table = partition_numbers(K) if table is None else table
    with ctx.workprec(GUARD_BITS):
        z = _require_right_half_plane(z)
        q = mpmath.exp(-z)
        total = mpmath.fsum(table[n] * q**n for n in range(K + 1))
        r = abs(q)
        # p(n) < e^{c sqrt n} with c = pi sqrt(2/3); successive bound terms shrink by at most ratio
        c = mpmath.pi * mpmath.sqrt(mpmath.mpf(2) / 3)
        first = mpmath.exp(c * mpmath.sqrt(K + 1)) * r ** (K + 1)
        ratio = mpmath.exp(c / (2 * mpmath.sqrt(K + 1))) * r
        tail = first / (1 - ratio) if ratio < 1 else mpmath.inf
    with ctx.workprec():
        return +total, +tail


def partition_main_term_error(z, ctx: PrecisionContext = DEFAULT_CONTEXT, method="product"):
    """|P(e^{-z}) sqrt(2 pi/z) e^{-pi^2/(6z)} - 1| = |e^S - 1| with
    S = Log P(e^{-z}) - (1/2) Log(z/(2 pi)) - pi^2/(6z) reduced mod 2 pi i"""
    z = _require_right_half_plane(z)
    if method == "product":
        log_p = log_partition_gf(z, ctx.replace(bits=ctx.bits + GUARD_BITS))
    elif method == "modular":
        log_p = log_partition_gf_modular(z, ctx.replace(bits=ctx.bits + GUARD_BITS))
    else:
        raise ParameterError(f"unknown method {method!r}; use 'product' or 'modular'")
    with ctx.workprec(GUARD_BITS):
        z = to_mpc(z)
        s = log_p.log() - mpmath.log(z / (2 * mpmath.pi)) / 2 - mpmath.pi**2 / (6 * z)
        s = mpmath.mpc(s.real, normalize_arg(s.imag))
    error = expm1_complex(s, ctx)
    with ctx.workprec():
        return abs(error)


def g3_term_count(w, bits):
    w = to_mpc(w)
    return int(mpmath.ceil((bits + GUARD_BITS) * mpmath.ln2 / w.real))


def eisenstein_g3(w, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """g_3(e^{-w}) = sum_{n>=1} n^3 q^n/(1 - q^n) as a LogComplex.

    Stops once the bound 2 sum_{n>=N} n^3 |q|^n (valid when |q|^N <= 1/2) falls
    below 2^{-bits-16} of the running sum."""
    w = _require_right_half_plane(w, "w")
    guard = GUARD_BITS + 16
    with ctx.workprec(guard):
        w = to_mpc(w)
        q = mpmath.exp(-w)
        r = abs(q)
        qn = mpmath.mpc(1)
        rn = mpmath.mpf(1)
        small = abs(w) < mpmath.mpf(1) / 2
        target = mpmath.ldexp(mpmath.mpf(1), -(ctx.bits + GUARD_BITS))
        total = mpmath.mpc(0)
        n = 0
        while True:
            n += 1
            if n > ctx.max_terms:
                raise SlowConvergence(ctx.max_terms, "g3 q-series")
            qn *= q
            rn *= r
            if small and n * abs(w) < mpmath.mpf(1) / 2:
                denominator = -expm1_mp(-n * w)
            else:
                denominator = 1 - qn
            total += mpmath.mpf(n) ** 3 * qn / denominator
            growth = (mpmath.mpf(n + 2) / (n + 1)) ** 3 * r
            if rn <= mpmath.mpf(1) / 2 and growth < 1:
                bound = 2 * mpmath.mpf(n + 1) ** 3 * rn * r / (1 - growth)
                if bound <= target * abs(total):
                    break
        result = LogComplex.from_complex(total)
    with ctx.workprec():
        return LogComplex(+result.log_mag, +result.arg)


def g3_required_bits(w, guard_bits=None):
    """Working precision for the direct g_3 error:
    4 pi^2 Re(1/w)/ln 2 + |4 log2|2 pi/w|| + guard"""
    guard = LAB_STANDARDS["guard_bits"] if guard_bits is None else guard_bits
    with mpmath.workprec(128):
        w = to_mpc(w)
        cancellation = 4 * mpmath.pi**2 * (1 / w).real / mpmath.ln2
        scale = abs(4 * mpmath.log(2 * mpmath.pi / abs(w), 2))
        return int(mpmath.ceil(cancellation + scale)) + guard


def g3_oracle(w, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """(2 pi/w)^4 g_3(e^{-4 pi^2/w}), the exact value of g_3(e^{-w}) - pi^4/(15 w^4) + 1/240"""
    w = _require_right_half_plane(w, "w")
    with ctx.workprec(GUARD_BITS):
        w = to_mpc(w)
        inverted = eisenstein_g3(4 * mpmath.pi**2 / w, ctx.replace(bits=ctx.bits + GUARD_BITS))
        result = inverted * LogComplex.from_complex((2 * mpmath.pi / w) ** 4)
    with ctx.workprec():
        return LogComplex(+result.log_mag, +result.arg)


@dataclass(frozen=True)
class G3Error:
    direct: LogComplex
    oracle: LogComplex
    precision_bits: int

    def agreeing_digits(self):
        return agreeing_digits(self.direct, self.oracle)


def g3_error(w, ctx: Optional[PrecisionContext] = None, max_bits=None, max_terms=None):
    """Direct g_3(e^{-w}) - pi^4/(15 w^4) + 1/240 next to its modular oracle.

    The precision is derived from w; the job is refused above max_bits or
    when the q-series would need more than max_terms terms."""
    w = _require_right_half_plane(w, "w")
    max_bits = LAB_STANDARDS["table2_max_bits"] if max_bits is None else max_bits
    required = g3_required_bits(w)
    if required > max_bits:
        raise PrecisionRefused(required, max_bits, "g3 error precision ceiling")
    bits = max(required, ctx.bits if ctx is not None else 0)
    work = PrecisionContext(bits=bits, max_terms=max_terms or (ctx.max_terms if ctx else 20_000_000))
    estimate = g3_term_count(w, bits)
    if max_terms is not None and estimate > max_terms:
        raise SlowConvergence(max_terms, "g3 q-series")
    series = eisenstein_g3(w, work)
    with work.workprec(GUARD_BITS):
        wv = to_mpc(w)
        direct = series.to_mpc() - mpmath.pi**4 / (15 * wv**4) + mpmath.mpf(1) / 240
        direct = LogComplex.from_complex(direct)
    oracle = g3_oracle(w, work)
    with work.workprec():
        direct = LogComplex(+direct.log_mag, +direct.arg)
    return G3Error(direct, oracle, bits)


def agreeing_digits(value: LogComplex, reference: LogComplex):
    """Number of agreeing significant decimal digits of two log-domain values"""
    if reference.is_zero:
        return 0 if not value.is_zero else mpmath.inf
    with mpmath.workprec(max(mpmath.mp.prec, 160)):
        ratio = (value / reference).to_mpc()
        gap = abs(ratio - 1)
        if gap == 0:
            return mpmath.inf
        return max(0, int(mpmath.floor(-mpmath.log10(gap))))


def format_magnitude(value, digits=None):
    """|value| in scientific notation with the given significant digits, for
    any LogComplex, mpf or mpc, however extreme the exponent"""
    digits = LAB_STANDARDS["digits"] if digits is None else digits
    if not isinstance(value, LogComplex):
        value = LogComplex.from_complex(value)
    if value.is_zero:
        return "0." + "0" * (digits - 1) + "e+0"
    log10 = value.log10_abs()
    with mpmath.workprec(max(mpmath.mp.prec, 64) + int(abs(log10)).bit_length()):
        log10 = value.log10_abs()
        exponent = int(mpmath.floor(log10))
        mantissa = mpmath.power(10, log10 - exponent)
        text = mpmath.nstr(mantissa, digits, min_fixed=-1, max_fixed=2, strip_zeros=False)
        if text.startswith("10."):
            exponent += 1
            text = mpmath.nstr(mantissa / 10, digits, min_fixed=-1, max_fixed=2, strip_zeros=False)
    sign = "+" if exponent >= 0 else "-"
    return f"{text}e{sign}{abs(exponent)}"


def parse_printed(text):
    """Printed table entry -> LogComplex magnitude"""
    text = text.strip()
    if "e" in text:
        mantissa, exponent = text.split("e")
        with mpmath.workprec(96):
            return LogComplex(mpmath.log(mpmath.mpf(mantissa)) + int(exponent) * mpmath.ln10, 0)
    with mpmath.workprec(96):
        return LogComplex.from_complex(mpmath.mpf(text))


@dataclass
class TableRow:
    exponent: int
    path: str
    error: Optional[LogComplex]
    precision_bits: int
    status: str = STATUS_OK
    extras: dict = field(default_factory=dict)

    @property
    def x_label(self):
        return f"1e-{self.exponent}"

    def csv_fields(self):
        value = "" if self.error is None else format_magnitude(self.error)
        return [self.x_label, self.path, value, str(self.precision_bits), self.status]


def _x_value(exponent):
    return mpmath.mpf(10) ** (-exponent)


def table1_row(exponent, path_label, bits, method="product", diagnostics=False):
    ctx = PrecisionContext.with_bits(bits, max_terms=10**8)
    with ctx.workprec():
        z = to_mpc(path_point(PathSpec.parse(path_label), _x_value(exponent)))
        error = partition_main_term_error(z, ctx, method=method)
        row = TableRow(exponent, path_label, LogComplex.from_complex(error), bits)
        printed = PRINTED_TABLE1.get((exponent, path_label))
        if printed is not None:
            row.extras["printed"] = printed
            row.extras["relative_gap"] = mpmath.nstr(abs(error / mpmath.mpf(printed) - 1), 3)
        if diagnostics:
            row.extras["inverted_nome_modulus"] = mpmath.nstr(inverted_nome_modulus(z, ctx), 10)
    return row


def table2_row(exponent, path_label, bits, max_bits, max_terms, compare=False, diagnostics=False):
    ctx = PrecisionContext.with_bits(bits)
    with ctx.workprec():
        w = to_mpc(path_point(PathSpec.parse(path_label), _x_value(exponent)))
    row = TableRow(exponent, path_label, None, g3_required_bits(w))
    try:
        result = g3_error(w, ctx, max_bits=max_bits, max_terms=max_terms)
    except PrecisionRefused:
        row.status = STATUS_PRECISION
    except SlowConvergence:
        row.status = STATUS_TERMS
    else:
        row.error = result.direct
        row.precision_bits = result.precision_bits
        if compare:
            row.extras["oracle"] = format_magnitude(result.oracle)
            row.extras["agreeing_digits"] = str(result.agreeing_digits())
    if compare:
        row.extras["printed"] = PRINTED_TABLE2.get((exponent, path_label), "")
        if row.error is None and row.status == STATUS_PRECISION:
            # the inverted side stays cheap even where the direct sum is refused
            try:
                row.extras["oracle"] = format_magnitude(g3_oracle(w, ctx))
            except LabError:
                row.extras["oracle"] = ""
    if diagnostics:
        row.extras["inverted_nome_modulus"] = mpmath.nstr(inverted_nome_modulus(w, ctx), 10)
    return row


def _announce(message, verbose):
    if verbose:
        print(message, file=sys.stderr)


def _run_rows(worker, jobs, verbose, title):
    _announce("=" * 50, verbose)
    _announce(f"📊 {title}", verbose)
    _announce("=" * 50, verbose)
    rows = []
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [(key, pool.submit(fn, *args)) for key, fn, args in worker]
            for key, future in futures:
                rows.append(future.result())
                _announce(f"✅ row {key} done", verbose)
    else:
        for key, fn, args in worker:
            _announce(f"🔧 computing row {key} ...", verbose)
            rows.append(fn(*args))
            _announce(f"✅ row {key} done", verbose)
    return rows


def table1(bits=None, method="product", exponents=None, paths=None, jobs=1,
           diagnostics=False, verbose=True):
    """Rows of the partition main-term error table, in fixed (x, path) order"""
    bits = LAB_STANDARDS["table1_bits"] if bits is None else bits
    exponents = exponents or LAB_STANDARDS["exponents"]
    paths = paths or LAB_STANDARDS["paths"]
    work = [
        (f"x=1e-{k} path={p}", table1_row, (k, p, bits, method, diagnostics))
        for k in exponents
        for p in paths
    ]
    return _run_rows(work, jobs, verbose, f"Partition main-term error ({method}, {bits} bits)")


def table2(bits=256, max_bits=None, max_terms=None, exponents=None, paths=None, jobs=1,
           compare=False, diagnostics=False, verbose=True):
    """Rows of the g_3 error table; rows beyond the ceilings carry a skip status"""
    max_bits = LAB_STANDARDS["table2_max_bits"] if max_bits is None else max_bits
    max_terms = LAB_STANDARDS["table2_max_terms"] if max_terms is None else max_terms
    exponents = exponents or LAB_STANDARDS["exponents"]
    paths = paths or LAB_STANDARDS["paths"]
    work = [
        (f"x=1e-{k} path={p}", table2_row, (k, p, bits, max_bits, max_terms, compare, diagnostics))
        for k in exponents
        for p in paths
    ]
    rows = _run_rows(work, jobs, verbose, f"Eisenstein g3 error (ceiling {max_bits} bits)")
    skipped = sum(1 for r in rows if r.status != STATUS_OK)
    if skipped:
        _announce(f"⚠️ {skipped} rows skipped at the configured ceilings", verbose)
    return rows


def parse_exponent_list(text):
    """'1,2,3' -> (1, 2, 3)"""
    try:
        values = tuple(int(part) for part in str(text).split(",") if part.strip())
    except ValueError:
        raise ParameterError(f"expected comma-separated integers, got {text!r}") from None
    if not values or any(v < 0 for v in values):
        raise ParameterError(f"expected non-negative decade exponents, got {text!r}")
    return values


def parse_path_list(text):
    labels = tuple(part.strip() for part in str(text).split(",") if part.strip())
    for label in labels:
        try:
            PathSpec.parse(label)
        except (ValueError, ZeroDivisionError):
            raise ParameterError(f"invalid path exponent {label!r}") from None
    return labels

