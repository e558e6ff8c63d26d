# -*- coding: utf-8 -*-
"""
End-to-end suite for the penner command line.
Run with: python test_app.py  (or pytest)
"""
import json
import sys

import pytest

from main import run


def cli(capsys, *argv):
    """Run one command; return (exit code, stdout, stderr)."""
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ============================================================
# Section 1: chi
# ============================================================
def test_chi_single_value(capsys):
    code, out, _ = cli(capsys, "chi", "--kind", "complex", "--g", "1", "--n", "1")
    assert code == 0
    assert out == "-1/12\n"


def test_chi_unpunctured_value(capsys):
    code, out, _ = cli(capsys, "chi", "--kind", "real", "--g", "2", "--n", "0")
    assert code == 0
    assert out == "-7/720\n"


def test_chi_table_csv(capsys):
    code, out, _ = cli(capsys, "chi", "table", "--kind", "complex", "--gmax", "1", "--nmax", "1")
    assert code == 0
    assert out == "kind,genus_index,punctures,value\ncomplex,1,1,-1/12\n"


def test_chi_table_json(capsys):
    code, out, _ = cli(capsys, "chi", "table", "--kind", "real", "--gmax", "2", "--nmax", "3", "--format", "json")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert rows[0] == {"kind": "real", "genus_index": 0, "punctures": 2, "value": "-1/8"}


def test_chi_out_of_window_is_domain_error(capsys):
    code, out, err = cli(capsys, "chi", "--kind", "complex", "--g", "0", "--n", "2")
    assert code == 3
    assert out == ""
    assert err.startswith("error:")


def test_chi_table_format_checked_before_work(capsys, monkeypatch):
    from routers import chi

    def no_table(*args):
        raise AssertionError("table built before the format was checked")

    monkeypatch.setattr(chi, "chi_table", no_table)
    code, out, err = cli(capsys, "chi", "table", "--kind", "complex", "--gmax", "2", "--nmax", "2", "--format", "text")
    assert code == 2
    assert out == ""
    assert "--format" in err


def test_chi_table_negative_bound(capsys):
    code, _, err = cli(capsys, "chi", "table", "--kind", "real", "--gmax", "-1", "--nmax", "2")
    assert code == 2
    assert "--gmax" in err


def test_chi_missing_flags(capsys):
    code, out, err = cli(capsys, "chi", "--kind", "complex", "--g", "1")
    assert code == 2
    assert "--n" in err


# ============================================================
# Section 2: series
# ============================================================
def test_series_product_at_size_one(capsys):
    code, out, _ = cli(capsys, "series", "--model", "nonorientable-product", "--N", "1", "--order", "3")
    assert code == 0
    data = json.loads(out)
    assert data["order"] == 3
    assert [(c["power"], c["poly"]) for c in data["coefficients"]] == [
        (1, [[0, "1/1"]]),
        (2, [[0, "-1/2"]]),
        (3, [[0, "1/3"]]),
    ]


def test_series_triple_sum_symbolic_text(capsys):
    code, out, _ = cli(capsys, "series", "--model", "triple-sum", "--alpha", "1", "--N", "sym", "--order", "1",
                       "--format", "text")
    assert code == 0
    assert out == "(1/6*N^3 - 1/12*N)*t + O(t^2)\n"


def test_series_closed_form_rejects_symbolic(capsys):
    code, out, err = cli(capsys, "series", "--model", "closed-form", "--N", "sym", "--order", "4")
    assert code == 2
    assert out == ""
    assert "--N" in err


def test_series_requires_size(capsys):
    code, _, err = cli(capsys, "series", "--model", "hermitian", "--order", "4")
    assert code == 2
    assert "--N" in err


def test_series_malformed_size(capsys):
    code, _, err = cli(capsys, "series", "--model", "hermitian", "--N", "two", "--order", "4")
    assert code == 2
    assert "--N" in err


def test_series_order_zero_names_the_flag(capsys):
    code, out, err = cli(capsys, "series", "--model", "symplectic", "--N", "2", "--order", "0")
    assert code == 2
    assert out == ""
    assert "--order" in err


def test_series_negative_order_rejected_by_parser(capsys):
    code, _, err = cli(capsys, "series", "--model", "hermitian", "--N", "2", "--order", "-1")
    assert code == 2
    assert "--order" in err


def test_series_hermitian_order_zero(capsys):
    code, out, _ = cli(capsys, "series", "--model", "hermitian", "--N", "2", "--order", "0")
    assert code == 0
    assert json.loads(out) == {"order": 0, "coefficients": []}


# ============================================================
# Section 3: verify
# ============================================================
def test_verify_symplectic_split_symbolic(capsys):
    code, out, _ = cli(capsys, "verify", "--identity", "eq17", "--N", "sym", "--order", "16")
    assert code == 0
    data = json.loads(out)
    assert data["matched"] is True
    assert data["identity"] == "symplectic-split"
    assert data["mismatch_count"] == 0


@pytest.mark.parametrize("identity", ["eq5v6", "eq5v9", "prodv24", "mirror-sum", "mirror-diff"])
def test_verify_other_identities(capsys, identity):
    code, out, _ = cli(capsys, "verify", "--identity", identity, "--N", "sym", "--order", "12")
    assert code == 0
    assert json.loads(out)["matched"] is True


def test_verify_closed_form(capsys):
    code, out, _ = cli(capsys, "verify", "--identity", "closed-form", "--N", "3", "--order", "12")
    assert code == 0
    data = json.loads(out)
    assert data["winner"] == "reciprocal"
    assert any("2N*B_2m" in n for n in data["notes"])


def test_verify_text_format(capsys):
    code, out, _ = cli(capsys, "verify", "--identity", "mirror-sum", "--N", "2", "--order", "6", "--format", "text")
    assert code == 0
    assert out.startswith("mirror-sum N=2 order=6: matched")


def test_verify_unknown_identity(capsys):
    code, _, err = cli(capsys, "verify", "--identity", "eq99", "--N", "2")
    assert code == 2
    assert "--identity" in err


# ============================================================
# Section 4: continuum
# ============================================================
def test_continuum_symplectic_notes(capsys):
    code, out, _ = cli(capsys, "continuum", "--model", "symplectic", "--gmax", "4", "--kmax", "4")
    assert code == 0
    data = json.loads(out)
    log_term = [t for t in data["terms"] if t["mu_power"] == 0 and t["log_power"] == 1]
    assert log_term == [{"coeff": "-1/24", "mu_power": 0, "log_power": 1}]
    assert any("log(mu)" in n for n in data["notes"])


def test_continuum_penner(capsys):
    code, out, _ = cli(capsys, "continuum", "--model", "penner", "--gmax", "2")
    assert code == 0
    assert {"coeff": "-1/240", "mu_power": -2, "log_power": 0} in json.loads(out)["terms"]


def test_continuum_wick_density(capsys):
    code, out, _ = cli(capsys, "continuum", "--model", "density", "--mmax", "2", "--wick", "--format", "text")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "-1/2*log(mu) - 1/12*mu^-2 - 7/120*mu^-4"
    assert lines[1].startswith("note: wick rotation left unchanged")


@pytest.mark.parametrize("flag, value", [("--gmax", "1"), ("--kmax", "0"), ("--mmax", "0")])
def test_continuum_bad_truncation(capsys, flag, value):
    code, out, err = cli(capsys, "continuum", "--model", "penner", flag, value)
    assert code == 2
    assert out == ""
    assert flag in err


# ============================================================
# Section 5: doublescale
# ============================================================
def test_doublescale_residual(capsys):
    code, out, _ = cli(capsys, "doublescale", "--mu", "10", "--N", "100000", "--qmax", "3")
    assert code == 0
    data = json.loads(out)
    assert data["N"] == 100000
    assert float(data["abs_error"]) <= 1e-5


def test_doublescale_mu_out_of_range(capsys):
    code, out, err = cli(capsys, "doublescale", "--mu", "20", "--N", "10")
    assert code == 3
    assert out == ""
    assert "mu" in err


@pytest.mark.parametrize("flag", ["--N", "--qmax", "--workers"])
def test_doublescale_flags_checked_before_work(capsys, flag):
    argv = {"--N": "100", "--qmax": "3", "--workers": "1"}
    argv[flag] = "0"
    code, out, err = cli(capsys, "doublescale", "--mu", "10", *[x for kv in argv.items() for x in kv])
    assert code == 2
    assert out == ""
    assert f"argument {flag}" in err


def test_doublescale_output_is_deterministic(capsys):
    argv = ("doublescale", "--mu", "10", "--N", "5000", "--workers", "3")
    first = cli(capsys, *argv)
    second = cli(capsys, *argv)
    assert first == second


# ============================================================
# Section 6: report and global flags
# ============================================================
def test_report_passes(capsys):
    code, out, _ = cli(capsys, "report", "--N", "3", "--order", "10")
    assert code == 0
    data = json.loads(out)
    assert data["passed"] is True
    names = [c["name"] for c in data["checks"]]
    assert "closed-form" in names
    assert "double scaling residual" in names


def test_report_symbolic_skips_closed_form(capsys):
    code, out, _ = cli(capsys, "report", "--N", "sym", "--order", "8", "--format", "text")
    assert code == 0
    assert "SKIP  closed-form  skipped: needs a concrete size" in out
    assert out.rstrip().endswith("checks passed, 1 skipped")


def test_report_skipped_check_is_not_a_pass(capsys):
    code, out, _ = cli(capsys, "report", "--N", "sym", "--order", "6")
    assert code == 0
    check = [c for c in json.loads(out)["checks"] if c["name"] == "closed-form"][0]
    assert check["skipped"] is True
    assert check["passed"] is False


def test_report_fails_without_printed_sign_notes(capsys, monkeypatch):
    from exact_core import MuSeries
    from routers import report

    real = report.combined_continuum
    monkeypatch.setattr(report, "combined_continuum", lambda *a: MuSeries(real(*a).terms))
    code, out, _ = cli(capsys, "report", "--N", "2", "--order", "6")
    assert code == 1
    check = [c for c in json.loads(out)["checks"] if c["name"] == "symplectic continuum vs printed signs"][0]
    assert check["passed"] is False
    assert "no note for log(mu), mu^-1" in check["detail"]


def test_report_rejects_bad_order(capsys):
    code, _, err = cli(capsys, "report", "--N", "2", "--order", "0")
    assert code == 2
    assert "--order" in err


def test_log_level_flag(capsys):
    code, out, _ = cli(capsys, "--log-level", "INFO", "chi", "--kind", "complex", "--g", "2", "--n", "0")
    assert code == 0
    assert out == "-1/240\n"


def test_missing_subcommand(capsys):
    code, _, _ = cli(capsys)
    assert code == 2


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
