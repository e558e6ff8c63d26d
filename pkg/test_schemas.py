# -*- coding: utf-8 -*-
import random
from fractions import Fraction

import pytest

import schemas
from continuum_limit import ScalingPoint, combined_continuum, double_scaling_residual, penner_continuum
from euler_char import chi_table
from exact_core import MuSeries, NPoly, TSeries
from exceptions import DomainError
from penner_series import SYMBOLIC, Identity, Mismatch, VerificationReport, free_energy_series, verify_identity


def random_tseries(rng, order):
    terms = {}
    for k in range(order + 1):
        if rng.random() < 0.3:
            continue
        terms[k] = NPoly(tuple(Fraction(rng.randint(-50, 50), rng.randint(1, 40)) for _ in range(rng.randint(1, 5))))
    return TSeries.from_terms(order, terms)


# ============================================================
# Section 1: t-series
# ============================================================
def test_zero_series_omits_coefficients():
    assert schemas.serialize_tseries(TSeries.zero(4)) == '{"order":4,"coefficients":[]}'


def test_series_layout():
    s = free_energy_series(1, SYMBOLIC, 1)
    assert schemas.serialize_tseries(s) == '{"order":1,"coefficients":[{"power":1,"poly":[[1,"-1/12"],[3,"1/6"]]}]}'


def test_series_round_trip():
    rng = random.Random(7)
    for order in (1, 5, 12):
        s = random_tseries(rng, order)
        assert schemas.parse_tseries(schemas.serialize_tseries(s)) == s
    s = free_energy_series(2, SYMBOLIC, 10)
    assert schemas.parse_tseries(schemas.serialize_tseries(s)) == s


def test_parse_accepts_integer_rationals():
    s = schemas.parse_tseries('{"order":2,"coefficients":[{"power":2,"poly":[[0,"3"]]}]}')
    assert s.coefficient(2) == NPoly.constant(3)


def test_malformed_series_json():
    with pytest.raises(DomainError):
        schemas.parse_tseries('{"order":"x"}')
    with pytest.raises(DomainError):
        schemas.parse_tseries('{"order":1,"coefficients":[{"power":1,"poly":[[0,"a/b"]]}]}')


@pytest.mark.parametrize("text", [
    '{"order":2,"coefficients":[{"power":5,"poly":[[0,"1/1"]]}]}',
    '{"order":2,"coefficients":[{"power":-1,"poly":[[0,"1/1"]]}]}',
    '{"order":2,"coefficients":[{"power":1,"poly":[[0,"1/1"],[0,"7/1"]]}]}',
    '{"order":2,"coefficients":[{"power":1,"poly":[[0,"1/1"]]},{"power":1,"poly":[[1,"2/1"]]}]}',
])
def test_series_json_is_not_silently_repaired(text):
    with pytest.raises(DomainError):
        schemas.parse_tseries(text)


# ============================================================
# Section 2: mu-series
# ============================================================
def test_mu_term_layout():
    text = schemas.serialize_museries(penner_continuum(2))
    assert '{"coeff":"-1/240","mu_power":-2,"log_power":0}' in text
    assert text.endswith('"notes":[]}')


def test_museries_round_trip_keeps_notes():
    s = combined_continuum("symplectic", 5, 5)
    back = schemas.parse_museries(schemas.serialize_museries(s))
    assert back == s
    assert back.notes == s.notes


def test_museries_round_trip_randomized():
    rng = random.Random(11)
    for _ in range(20):
        terms = tuple(
            (Fraction(rng.randint(-20, 20) or 1, rng.randint(1, 30)), rng.randint(-8, 3), rng.randint(0, 1))
            for _ in range(rng.randint(0, 6))
        )
        s = MuSeries(terms)
        assert schemas.parse_museries(schemas.serialize_museries(s)) == s


# ============================================================
# Section 3: Euler characteristic tables
# ============================================================
def test_chi_csv_row():
    text = schemas.chi_table_csv(chi_table("complex", 1, 1))
    assert text == "kind,genus_index,punctures,value\ncomplex,1,1,-1/12\n"


def test_chi_csv_round_trip():
    for kind in ("complex", "real"):
        rows = chi_table(kind, 4, 5)
        assert schemas.parse_chi_csv(schemas.chi_table_csv(rows)) == rows


def test_chi_csv_header_checked():
    with pytest.raises(DomainError):
        schemas.parse_chi_csv("kind,g,n,value\ncomplex,1,1,-1/12\n")


def test_chi_table_json():
    text = schemas.serialize_chi_table(chi_table("real", 1, 1))
    assert text == '{"rows":[{"kind":"real","genus_index":1,"punctures":1,"value":"-1/24"}]}'


# ============================================================
# Section 4: Reports and residuals
# ============================================================
def test_report_truncates_mismatches():
    mismatches = tuple(Mismatch(k, NPoly.constant(k), NPoly()) for k in range(1, 9))
    report = VerificationReport(Identity.MIRROR_SUM, 8, 3, False, mismatches)
    out = schemas.report_out(report)
    assert out.mismatch_count == 8
    assert [m.power for m in out.mismatches] == [1, 2, 3, 4, 5]
    assert "... and 3 more" in schemas.report_text(report)


def test_report_json_fields():
    report = verify_identity(Identity.CLOSED_FORM_ORIENTATION, 2, 6)
    out = schemas.VerificationReportOut.model_validate_json(schemas.serialize_report(report))
    assert out.identity == "closed-form"
    assert out.size_param == 2
    assert out.matched and out.winner == "reciprocal"
    symbolic = schemas.report_out(verify_identity("mirror-sum", SYMBOLIC, 4))
    assert symbolic.size_param == "sym"


def test_residual_floats_are_strings():
    check = double_scaling_residual(ScalingPoint(5, 5.0), 1)
    out = schemas.ResidualCheckOut.model_validate_json(schemas.serialize_residual(check))
    assert out.N == 5 and out.mu == "5" and out.t == "0.5"
    assert float(out.target) == check.target
    assert float(out.abs_error) == check.abs_error


def test_format_float_keeps_seventeen_digits():
    assert schemas.format_float(0.1) == "0.10000000000000001"
