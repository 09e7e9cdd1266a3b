#!/usr/bin/env python3
"""
Command-line front end of the asymptotic laboratory
Every laboratory is a subcommand printing CSV or JSON on stdout; progress goes to stderr
"""

import argparse
import csv
import json
import re
import sys

import mpmath

from .counterexample import counterexample_grid
from .em_engine import (
    FIT_STANDARDS,
    KINDS,
    effective_order,
    eval_expansion,
    expand,
    expand_lattice,
    fit_remainder_order,
    format_scalar,
)
from .errors import LabError, ParameterError
from .lattice_sums import lattice_sum
from .models import TWO_DIMENSIONAL, get_model
from .modular_lab import (
    CSV_HEADER,
    LAB_STANDARDS,
    STATUS_OK,
    parse_exponent_list,
    parse_path_list,
    partition_numbers,
    table1,
    table2,
)
from .numerics import PrecisionContext
from .report_writer import run_identity_checks, write_lab_report
from .tauberian import (
    InghamParams,
    PredictionCheck,
    check_partition_coefficients,
    check_partition_partial_sums,
    hardy_ramanujan,
    ingham_coefficient_asymptotic,
    ingham_partial_sum_asymptotic,
)

VALUE_DIGITS = 15

_COMPLEX = re.compile(
    r"^\s*(?P<re>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?"
    r"\s*(?:(?P<sign>[+-])\s*(?P<im>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*[ij])?\s*$"
)


class LabArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with status 1 like every other domain error"""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"❌ {self.prog}: {message}", file=sys.stderr)
        sys.exit(1)


def parse_complex(text):
    """'a+bi' (or 'a', or 'a-bj') -> mpc, kept as a decimal string until parsed"""
    match = _COMPLEX.match(str(text))
    if not match or (match.group("re") is None and match.group("sign") is None):
        raise ParameterError(f"expected a complex number like 0.1+0.2i, got {text!r}")
    real = mpmath.mpf(match.group("re") or 0)
    imag = mpmath.mpf(0)
    if match.group("sign"):
        imag = mpmath.mpf(match.group("im") or 1)
        if match.group("sign") == "-":
            imag = -imag
    return mpmath.mpc(real, imag)


def _shift_argument(text):
    """'1/2' -> '1/2'; '0,1/3' -> ('0', '1/3'); strings stay exact until the model sees them"""
    parts = [part.strip() for part in str(text).split(",") if part.strip()]
    if not parts:
        raise ParameterError(f"empty shift {text!r}")
    return parts[0] if len(parts) == 1 else tuple(parts)


def _float_list(text):
    try:
        return tuple(float(part) for part in str(text).split(",") if part.strip())
    except ValueError:
        raise ParameterError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text):
    try:
        return tuple(int(part) for part in str(text).split(",") if part.strip())
    except ValueError:
        raise ParameterError(f"expected comma-separated integers, got {text!r}") from None


def format_complex(value, digits=VALUE_DIGITS):
    """mpc -> 'a+bi', the same shape parse_complex reads"""
    value = mpmath.mpc(value)
    sign = "-" if value.imag < 0 else "+"
    return f"{mpmath.nstr(value.real, digits)}{sign}{mpmath.nstr(abs(value.imag), digits)}i"


def _value(value, digits=VALUE_DIGITS):
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return format_scalar(value, digits)


def _progress(args, message):
    if not args.quiet:
        print(message, file=sys.stderr)


def emit(args, params, header, rows, precision_bits, key="rows"):
    """rows is a list of string lists in header order"""
    if args.format == "json":
        payload = {
            "command": args.command,
            "params": {k: str(v) for k, v in params.items()},
            "precision_bits": str(precision_bits),
            key: [dict(zip(header, row)) for row in rows],
        }
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _table_rows(table, extra_columns):
    header = list(CSV_HEADER) + list(extra_columns)
    rows = [row.csv_fields() + [str(row.extras.get(c, "")) for c in extra_columns] for row in table]
    return header, rows


def cmd_table1(args):
    bits = args.prec or LAB_STANDARDS["table1_bits"]
    rows = table1(
        bits=bits,
        method=args.method,
        exponents=parse_exponent_list(args.exponents) if args.exponents else None,
        paths=parse_path_list(args.paths) if args.paths else None,
        jobs=args.jobs,
        diagnostics=args.diagnostics,
        verbose=not args.quiet,
    )
    extra = []
    if args.compare:
        extra += ["printed", "relative_gap"]
    if args.diagnostics:
        extra.append("inverted_nome_modulus")
    header, body = _table_rows(rows, extra)
    emit(args, {"method": args.method, "prec": bits}, header, body, bits)
    return 0


def cmd_table2(args):
    bits = args.prec or 256
    rows = table2(
        bits=bits,
        max_bits=args.max_bits,
        max_terms=args.max_terms,
        exponents=parse_exponent_list(args.exponents) if args.exponents else None,
        paths=parse_path_list(args.paths) if args.paths else None,
        jobs=args.jobs,
        compare=args.compare,
        diagnostics=args.diagnostics,
        verbose=not args.quiet,
    )
    extra = []
    if args.compare:
        extra += ["oracle", "agreeing_digits", "printed"]
    if args.diagnostics:
        extra.append("inverted_nome_modulus")
    header, body = _table_rows(rows, extra)
    params = {
        "prec": bits,
        "max_bits": args.max_bits or LAB_STANDARDS["table2_max_bits"],
        "max_terms": args.max_terms or LAB_STANDARDS["table2_max_terms"],
    }
    computed = [r.precision_bits for r in rows if r.status == STATUS_OK]
    emit(args, params, header, body, max(computed, default=bits))
    return 0


def _load_model(args):
    model = get_model(args.model, args.terms)
    shift = _shift_argument(args.a)
    if args.model in TWO_DIMENSIONAL and not isinstance(shift, tuple):
        shift = (shift, shift)
    return model, shift


def _series_rows(series, digits):
    rows = [["log_over_w", format_scalar(series.log_over_w_coeff, digits)]]
    rows += [[f"w^-{s}", format_scalar(c, digits)] for s, c in series.inv_coeffs.items()]
    rows += [[f"w^{n}", format_scalar(c, digits)] for n, c in enumerate(series.poly_coeffs)]
    return rows


def cmd_expand(args):
    ctx = PrecisionContext.with_bits(args.prec or 256)
    model, shift = _load_model(args)
    if args.kind == "auto":
        series = expand_lattice(model, shift, args.N, ctx)
    else:
        series = expand(args.kind, model, shift, args.N, ctx)
    params = {"model": args.model, "kind": series.kind, "a": args.a, "N": args.N}
    digits = args.digits or VALUE_DIGITS
    evaluation = {}
    if args.w:
        with ctx.workprec():
            w = parse_complex(args.w)
        params["w"] = args.w
        approx = eval_expansion(series, w, ctx)
        direct = lattice_sum(model, w, shift, ctx, alternating=series.kind == "alternating")
        with ctx.workprec():
            evaluation = {
                "expansion_value": format_complex(approx, digits),
                "direct_sum": format_complex(direct.value, digits),
                "remainder": mpmath.nstr(abs(direct.value - approx), digits),
                "error_bound": mpmath.nstr(direct.error_bound, 5),
            }
    if args.format == "json":
        payload = {
            "command": args.command,
            "params": {k: str(v) for k, v in params.items()},
            "precision_bits": str(ctx.bits),
            "series": [series.to_record(digits)],
        }
        if evaluation:
            payload["evaluation"] = evaluation
        # JSON numbers are strings throughout
        payload["series"][0]["order"] = str(series.order)
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        rows = _series_rows(series, digits) + [[k, v] for k, v in evaluation.items()]
        emit(args, params, ["term", "coefficient"], rows, ctx.bits)
    return 0


def cmd_fit_order(args):
    ctx = PrecisionContext.with_bits(args.prec or 256)
    model, shift = _load_model(args)
    kind = args.kind
    if kind == "auto":
        kind = "2d" if args.model in TWO_DIMENSIONAL else ("pole" if model.has_pole else "regular")
    series = expand(kind, model, shift, args.N, ctx)
    exponents = _float_list(args.exponents) if args.exponents else None
    _progress(args, f"🔧 fitting remainder of {args.model} ({kind}, N={args.N}) ...")
    slope = fit_remainder_order(series, model, shift, args.angle, ctx, exponents=exponents)
    expected = effective_order(model, shift, args.N, kind, ctx)
    _progress(args, f"✅ slope {slope:.4f}, expected {expected}")
    params = {"model": args.model, "kind": kind, "a": args.a, "N": args.N, "angle": args.angle}
    emit(
        args,
        params,
        ["model", "kind", "a", "N", "slope", "effective_order"],
        [[args.model, kind, args.a, str(args.N), f"{slope:.6f}", str(expected)]],
        ctx.bits,
    )
    return 0


def _ingham_params(args, ctx):
    if args.preset == "partition":
        return InghamParams.partition(ctx)
    explicit = (args.lam, args.alpha, args.beta, args.gamma)
    if any(v is None for v in explicit):
        raise ParameterError("give --preset partition or all of --lam --alpha --beta --gamma")
    with ctx.workprec():
        try:
            values = [mpmath.mpf(v) for v in explicit]
        except ValueError:
            raise ParameterError(f"Ingham parameters must be decimal numbers, got {explicit!r}") from None
        return InghamParams(*values)


def cmd_ingham(args):
    ctx = PrecisionContext.with_bits(args.prec or 256)
    params = _ingham_params(args, ctx)
    ns = _int_list(args.n)
    if args.check:
        if args.preset != "partition":
            raise ParameterError("--check compares against exact partition numbers; use --preset partition")
        checks = check_partition_partial_sums(ns, ctx) if args.partial else check_partition_coefficients(ns, ctx)
    else:
        predict = ingham_partial_sum_asymptotic if args.partial else ingham_coefficient_asymptotic
        checks = [PredictionCheck(n, None, predict(params, n, ctx)) for n in ns]
    rows = []
    with ctx.workprec():
        for check in checks:
            ratio = "" if check.exact is None else _value(check.ratio)
            rows.append([str(check.n), _value(check.prediction), _value(check.exact), ratio])
    label = "N" if args.partial else "n"
    emit(
        args,
        {"preset": args.preset or "explicit", "partial": args.partial, "n": args.n},
        [label, "prediction", "exact", "ratio"],
        rows,
        ctx.bits,
    )
    return 0


def cmd_counterexample(args):
    ctx = PrecisionContext.with_bits(args.prec or 256)
    ts = tuple(part.strip() for part in args.ts.split(",") if part.strip())
    ms = _int_list(args.ms)
    _progress(args, "=" * 50)
    _progress(args, "📊 Block-constant counterexample")
    _progress(args, "=" * 50)
    grid = counterexample_grid(ts, ms, ctx)
    with ctx.workprec():
        rows = [[row.label, row.parameter, _value(row.value)] for row in grid]
    _progress(args, f"✅ {len(rows)} values")
    emit(args, {"ts": args.ts, "ms": args.ms}, ["quantity", "parameter", "value"], rows, ctx.bits)
    return 0


def cmd_partition(args):
    ctx = PrecisionContext.with_bits(args.prec or 256)
    ns = _int_list(args.n)
    if not ns or min(ns) < 0:
        raise ParameterError(f"partition indices must be non-negative, got {args.n!r}")
    table = partition_numbers(max(ns))
    rows = []
    with ctx.workprec():
        for n in ns:
            row = [str(n), str(table[n])]
            if args.check:
                if n < 1:
                    raise ParameterError("the Hardy-Ramanujan check needs n >= 1")
                prediction = hardy_ramanujan(n, ctx)
                row += [_value(prediction), _value(mpmath.mpf(table[n]) / prediction)]
            rows.append(row)
    header = ["n", "p(n)"] + (["hardy_ramanujan", "ratio"] if args.check else [])
    emit(args, {"n": args.n, "check": args.check}, header, rows, ctx.bits)
    return 0


def cmd_report(args):
    bits = args.prec or LAB_STANDARDS["table1_bits"]
    verbose = not args.quiet
    first = table1(
        bits=bits,
        exponents=parse_exponent_list(args.exponents),
        jobs=args.jobs,
        verbose=verbose,
    )
    second = table2(
        max_bits=args.max_bits,
        max_terms=args.max_terms,
        exponents=parse_exponent_list(args.table2_exponents),
        jobs=args.jobs,
        compare=True,
        verbose=verbose,
    )
    _progress(args, "🔧 running identity checks ...")
    checks = run_identity_checks()
    write_lab_report(args.out, first, second, checks, verbose=verbose)
    failed = [name for name, ok in checks if not ok]
    if failed:
        _progress(args, f"⚠️ {len(failed)} identity checks failed")
    emit(
        args,
        {"out": args.out},
        ["identity", "result"],
        [[name, "passed" if ok else "FAILED"] for name, ok in checks],
        bits,
    )
    return 0


def _common_options():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec", type=int, help="working precision in bits")
    common.add_argument("--format", choices=("csv", "json"), default="csv", help="output format")
    common.add_argument("--json", dest="format", action="store_const", const="json", help="same as --format json")
    common.add_argument("--quiet", action="store_true", help="suppress progress output on stderr")
    return common


def _table_options():
    table = argparse.ArgumentParser(add_help=False)
    table.add_argument("--exponents", help="decade exponents k for x = 10^-k, e.g. 1,2,3")
    table.add_argument("--paths", help="path exponents p for z = x + i x^p, e.g. 1,2,1/3")
    table.add_argument("--jobs", type=int, default=1, help="worker processes for table rows")
    table.add_argument("--diagnostics", action="store_true", help="add the inverted nome modulus column")
    table.add_argument("--compare", action="store_true", help="add comparison columns")
    return table


def _model_options():
    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--model", required=True, help="built-in model name")
    model.add_argument("--a", default="0", help="shift; a pair 'a1,a2' for two-dimensional models")
    model.add_argument("--N", type=int, required=True, help="truncation order")
    model.add_argument("--kind", choices=("auto",) + KINDS, default="auto", help="expansion kind")
    model.add_argument("--terms", type=int, help="Taylor coefficients carried by the model")
    return model


def build_parser():
    parser = LabArgumentParser(
        prog="asymptotic-lab",
        description="Euler-Maclaurin expansions, Tauberian predictions and modular table checks",
    )
    sub = parser.add_subparsers(dest="command", parser_class=LabArgumentParser)
    sub.required = True
    common, table, model = _common_options(), _table_options(), _model_options()

    p = sub.add_parser("table1", parents=[common, table], help="partition generating function error table")
    p.add_argument("--method", choices=("product", "modular"), default="product")
    p.set_defaults(handler=cmd_table1)

    p = sub.add_parser("table2", parents=[common, table], help="Eisenstein g3 error table")
    p.add_argument("--max-bits", type=int, help="precision ceiling in bits")
    p.add_argument("--max-terms", type=int, help="term ceiling of the direct sum")
    p.set_defaults(handler=cmd_table2)

    p = sub.add_parser("expand", parents=[common, model], help="asymptotic expansion coefficients")
    p.add_argument("--digits", type=int, help="significant digits of inexact coefficients")
    p.add_argument("--w", help="also compare with the direct lattice sum at this point, e.g. 0.1+0.1i")
    p.set_defaults(handler=cmd_expand)

    p = sub.add_parser("fit-order", parents=[common, model], help="empirical remainder order")
    p.add_argument("--angle", type=float, default=0.0, help="ray angle of the sample points")
    p.add_argument(
        "--exponents",
        help=f"sample exponents k for |w| = 2^-k (at least {FIT_STANDARDS['min_points']})",
    )
    p.set_defaults(handler=cmd_fit_order)

    p = sub.add_parser("ingham", parents=[common], help="Ingham coefficient and partial-sum predictions")
    p.add_argument("--preset", choices=("partition",))
    p.add_argument("--lam", type=str)
    p.add_argument("--alpha", type=str)
    p.add_argument("--beta", type=str)
    p.add_argument("--gamma", type=str)
    p.add_argument("--n", default="1000", help="comma-separated indices")
    p.add_argument("--partial", action="store_true", help="predict partial sums instead of coefficients")
    p.add_argument("--check", action="store_true", help="compare against exact partition numbers")
    p.set_defaults(handler=cmd_ingham)

    p = sub.add_parser("counterexample", parents=[common], help="block-constant counterexample grid")
    p.add_argument("--ts", default="1e-1,1e-2,1e-3")
    p.add_argument("--ms", default="10,100,1000,10000")
    p.set_defaults(handler=cmd_counterexample)

    p = sub.add_parser("partition", parents=[common], help="exact partition numbers")
    p.add_argument("--n", default="100", help="comma-separated indices")
    p.add_argument("--check", action="store_true", help="add the Hardy-Ramanujan ratio")
    p.set_defaults(handler=cmd_partition)

    p = sub.add_parser("report", parents=[common], help="write a Word lab report")
    p.add_argument("--out", required=True, help="output .docx path")
    p.add_argument("--exponents", default="1,2,3", help="table1 decade exponents")
    p.add_argument("--table2-exponents", default="1,2", help="table2 decade exponents")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--max-bits", type=int)
    p.add_argument("--max-terms", type=int)
    p.set_defaults(handler=cmd_report)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except LabError as exc:
        print(f"❌ {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
