#!/usr/bin/env python3
"""
Tests for the asymptotic-lab command line
"""

import io
import json
import os
import sys
from contextlib import redirect_stderr, redirect_stdout

import pytest

# Add project root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from src.main import format_complex, main, parse_complex
from src.errors import ParameterError


def run_cli(*argv):
    """Run the CLI and return (exit code, stdout, stderr)"""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


def test_complex_arguments():
    assert parse_complex("0.1+0.2i") == complex(0.1, 0.2)
    assert parse_complex("1e-3-4j") == complex(1e-3, -4)
    assert parse_complex("2") == 2
    assert format_complex(parse_complex("0.5-0.25i")) == "0.5-0.25i"
    with pytest.raises(ParameterError):
        parse_complex("0.1+")
    with pytest.raises(ParameterError):
        parse_complex("abc")


def test_expand_json_prints_exact_coefficients():
    code, out, _ = run_cli("expand", "--model", "exp", "--a", "0", "--N", "4", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["command"] == "expand"
    assert payload["params"]["kind"] == "regular"
    series = payload["series"][0]
    assert series["poly_coeffs"] == ["1/2", "1/12", "0", "-1/720"]
    assert series["inv_coeffs"] == [[1, "1"]]
    assert series["order"] == "4"


def test_expand_csv_with_evaluation():
    code, out, _ = run_cli("expand", "--model", "exp", "--N", "6", "--w", "0.05+0.05i", "--prec", "128")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "term,coefficient"
    assert "w^0,1/2" in lines
    rows = dict(line.split(",", 1) for line in lines[1:])
    assert float(rows["remainder"]) < 1e-9
    assert "direct_sum" in rows


def test_expand_pole_at_zero_shift_fails():
    code, out, err = run_cli("expand", "--model", "exp-over-x", "--a", "0", "--N", "3")
    assert code == 1
    assert out == ""
    assert "❌ PoleShiftError" in err


def test_unknown_model_is_a_domain_error():
    code, _, err = run_cli("expand", "--model", "gamma", "--N", "3")
    assert code == 1
    assert "❌ ParameterError" in err


def test_usage_errors_exit_with_one():
    for argv in (["bogus"], ["table1", "--format", "xml"], ["expand", "--model", "exp"]):
        with pytest.raises(SystemExit) as excinfo:
            run_cli(*argv)
        assert excinfo.value.code == 1


def test_partition_check():
    code, out, _ = run_cli("partition", "--n", "10,100", "--check")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,p(n),hardy_ramanujan,ratio"
    assert lines[1].startswith("10,42,")
    assert lines[2].startswith("100,190569292,")
    assert 0.9 < float(lines[2].split(",")[3]) < 1.0


def test_ingham_check_against_partitions():
    code, out, _ = run_cli("ingham", "--preset", "partition", "--n", "1000", "--check", "--json")
    assert code == 0
    row = json.loads(out)["rows"][0]
    assert row["n"] == "1000"
    assert row["exact"] == "24061467864032622473692149727991"
    assert abs(float(row["ratio"]) - 0.986) < 0.002


def test_ingham_explicit_parameters():
    code, out, _ = run_cli("ingham", "--lam", "1", "--alpha", "0", "--beta", "0", "--gamma", "1",
                           "--n", "4", "--partial")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "N,prediction,exact,ratio"
    assert lines[1].startswith("4,")
    code, _, err = run_cli("ingham", "--lam", "1", "--n", "4")
    assert code == 1
    assert "ParameterError" in err


def test_table1_compare_header():
    code, out, err = run_cli("table1", "--exponents", "1", "--paths", "1", "--compare", "--prec", "128")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "x,path_exponent,error_value,precision_bits,status,printed,relative_gap"
    fields = lines[1].split(",")
    assert fields[:2] == ["1e-1", "1"]
    assert fields[2].startswith("5.8802")
    assert fields[4] == "ok"
    assert fields[5] == "0.0058802931"
    assert "📊" in err


def test_table1_beyond_term_ceiling_is_refused():
    code, out, err = run_cli("table1", "--exponents", "7", "--paths", "1", "--quiet")
    assert code == 2
    assert out == ""
    assert "❌ SlowConvergence" in err


def test_table2_skip_rows():
    code, out, err = run_cli("table2", "--exponents", "5", "--paths", "1,2", "--quiet")
    assert code == 0
    assert err == ""
    lines = out.splitlines()
    assert len(lines) == 3
    for line in lines[1:]:
        fields = line.split(",")
        assert fields[2] == ""
        assert fields[4] == "skipped (precision ceiling)"


def test_table2_term_ceiling_rows():
    code, out, _ = run_cli("table2", "--exponents", "1", "--paths", "1", "--max-terms", "10", "--json", "--quiet")
    assert code == 0
    payload = json.loads(out)
    assert payload["params"]["max_terms"] == "10"
    assert payload["rows"][0]["status"] == "skipped (term ceiling)"


def test_counterexample_json():
    code, out, _ = run_cli("counterexample", "--ts", "1e-2", "--ms", "10", "--json", "--prec", "128", "--quiet")
    assert code == 0
    payload = json.loads(out)
    assert payload["precision_bits"] == "128"
    rows = payload["rows"]
    assert len(rows) == 6
    assert rows[2] == {"quantity": "upper_extreme", "parameter": "10", "value": "1.0"}


@pytest.mark.slow
def test_fit_order():
    code, out, _ = run_cli("fit-order", "--model", "exp", "--a", "1/2", "--N", "2", "--angle", "0.3",
                           "--prec", "128", "--quiet")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "model,kind,a,N,slope,effective_order"
    fields = lines[1].split(",")
    assert fields[-1] == "3"
    assert abs(float(fields[-2]) - 3) < 0.2


def main_tests():
    """Run all command-line tests"""
    print("🧪 Command-line tests")
    print("=" * 50)
    tests = [
        test_complex_arguments,
        test_expand_json_prints_exact_coefficients,
        test_expand_csv_with_evaluation,
        test_expand_pole_at_zero_shift_fails,
        test_unknown_model_is_a_domain_error,
        test_usage_errors_exit_with_one,
        test_partition_check,
        test_ingham_check_against_partitions,
        test_ingham_explicit_parameters,
        test_table1_compare_header,
        test_table1_beyond_term_ceiling_is_refused,
        test_table2_skip_rows,
        test_table2_term_ceiling_rows,
        test_counterexample_json,
    ]
    for test in tests:
        test()
        print(f"✅ {test.__name__}")
    return True


if __name__ == "__main__":
    sys.exit(0 if main_tests() else 1)
