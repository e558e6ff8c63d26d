import io
from typing import List, Optional, Tuple, Union

import pandas as pd
from pydantic import BaseModel, ValidationError

import config
from continuum_limit import ResidualCheck
from euler_char import ChiValue
from exact_core import MuSeries, NPoly, TSeries, format_rational, parse_rational
from exceptions import DomainError
from penner_series import Mismatch, VerificationReport

CHI_CSV_COLUMNS = ["kind", "genus_index", "punctures", "value"]


def format_float(value: float) -> str:
    return format(float(value), f".{config.FLOAT_DIGITS}g")


# --- Series Schemas ---
# Rationals travel as "num/den" strings; zero coefficients are omitted.
PolyOut = List[Tuple[int, str]]


class CoefficientOut(BaseModel):
    power: int
    poly: PolyOut


class TSeriesOut(BaseModel):
    order: int
    coefficients: List[CoefficientOut]


class MuTermOut(BaseModel):
    coeff: str
    mu_power: int
    log_power: int


class MuSeriesOut(BaseModel):
    terms: List[MuTermOut]
    notes: List[str] = []


def _poly_out(p: NPoly) -> PolyOut:
    return [(k, format_rational(c)) for k, c in enumerate(p.coefficients) if c != 0]


def _poly_in(pairs: PolyOut) -> NPoly:
    if not pairs:
        return NPoly()
    degree = max(k for k, _ in pairs)
    coeffs = [0] * (degree + 1)
    seen = set()
    for k, text in pairs:
        if k < 0:
            raise DomainError(f"negative degree {k} in serialized polynomial")
        if k in seen:
            raise DomainError(f"degree {k} repeated in serialized polynomial")
        seen.add(k)
        coeffs[k] = parse_rational(text)
    return NPoly(tuple(coeffs))


def tseries_out(s: TSeries) -> TSeriesOut:
    return TSeriesOut(
        order=s.order,
        coefficients=[CoefficientOut(power=k, poly=_poly_out(c)) for k, c in enumerate(s.coeffs) if not c.is_zero()],
    )


def serialize_tseries(s: TSeries) -> str:
    return tseries_out(s).model_dump_json()


def parse_tseries(text: str) -> TSeries:
    try:
        data = TSeriesOut.model_validate_json(text)
    except ValidationError as e:
        raise DomainError(f"malformed series JSON: {e.error_count()} errors") from e
    if data.order < 0:
        raise DomainError(f"series order must be >= 0, got {data.order}")
    terms = {}
    for c in data.coefficients:
        if not 0 <= c.power <= data.order:
            raise DomainError(f"power {c.power} outside 0..{data.order}")
        if c.power in terms:
            raise DomainError(f"power {c.power} repeated in serialized series")
        terms[c.power] = _poly_in(c.poly)
    return TSeries.from_terms(data.order, terms)


def museries_out(s: MuSeries) -> MuSeriesOut:
    return MuSeriesOut(
        terms=[MuTermOut(coeff=format_rational(t.coeff), mu_power=t.mu_power, log_power=t.log_power) for t in s.terms],
        notes=list(s.notes),
    )


def serialize_museries(s: MuSeries) -> str:
    return museries_out(s).model_dump_json()


def parse_museries(text: str) -> MuSeries:
    try:
        data = MuSeriesOut.model_validate_json(text)
    except ValidationError as e:
        raise DomainError(f"malformed mu-series JSON: {e.error_count()} errors") from e
    terms = tuple((parse_rational(t.coeff), t.mu_power, t.log_power) for t in data.terms)
    return MuSeries(terms, tuple(data.notes))


# --- Verification Schemas ---
class MismatchOut(BaseModel):
    power: int
    left: PolyOut
    right: PolyOut


class VerificationReportOut(BaseModel):
    identity: str
    order: int
    size_param: Union[int, str]
    matched: bool
    mismatch_count: int
    mismatches: List[MismatchOut]
    notes: List[str]
    winner: Optional[str] = None


def _mismatch_out(m: Mismatch) -> MismatchOut:
    return MismatchOut(power=m.power, left=_poly_out(m.left), right=_poly_out(m.right))


def report_out(r: VerificationReport) -> VerificationReportOut:
    """Only the first MAX_REPORTED_MISMATCHES mismatches are written in full."""
    shown = r.mismatches[: config.MAX_REPORTED_MISMATCHES]
    return VerificationReportOut(
        identity=r.identity.value,
        order=r.order,
        size_param=r.size_param,
        matched=r.matched,
        mismatch_count=len(r.mismatches),
        mismatches=[_mismatch_out(m) for m in shown],
        notes=list(r.notes),
        winner=r.winner,
    )


def serialize_report(r: VerificationReport) -> str:
    return report_out(r).model_dump_json()


def report_text(r: VerificationReport) -> str:
    lines = [f"{r.identity.value} N={r.size_param} order={r.order}: {'matched' if r.matched else 'MISMATCH'}"]
    for m in r.mismatches[: config.MAX_REPORTED_MISMATCHES]:
        lines.append(f"  t^{m.power}: {m.left} != {m.right}")
    hidden = len(r.mismatches) - config.MAX_REPORTED_MISMATCHES
    if hidden > 0:
        lines.append(f"  ... and {hidden} more")
    lines += [f"  note: {n}" for n in r.notes]
    return "\n".join(lines)


# --- Euler Characteristic Schemas ---
class ChiValueOut(BaseModel):
    kind: str
    genus_index: int
    punctures: int
    value: str


class ChiTableOut(BaseModel):
    rows: List[ChiValueOut]


def chi_value_out(v: ChiValue) -> ChiValueOut:
    return ChiValueOut(kind=v.kind.value, genus_index=v.genus_index, punctures=v.punctures, value=format_rational(v.value))


def serialize_chi_table(rows: List[ChiValue]) -> str:
    return ChiTableOut(rows=[chi_value_out(v) for v in rows]).model_dump_json()


def chi_table_csv(rows: List[ChiValue]) -> str:
    df = pd.DataFrame([chi_value_out(v).model_dump() for v in rows], columns=CHI_CSV_COLUMNS)
    return df.to_csv(index=False, lineterminator="\n")


def parse_chi_csv(text: str) -> List[ChiValue]:
    df = pd.read_csv(io.StringIO(text), dtype=str, keep_default_na=False)
    if list(df.columns) != CHI_CSV_COLUMNS:
        raise DomainError(f"chi CSV header must be {','.join(CHI_CSV_COLUMNS)}, got {','.join(df.columns)}")
    return [
        ChiValue(row.kind, int(row.genus_index), int(row.punctures), parse_rational(row.value))
        for row in df.itertuples(index=False)
    ]


# --- Double Scaling Schemas ---
# Floats are "%.17g" strings so the text survives the pipe unchanged.
class ResidualCheckOut(BaseModel):
    N: int
    mu: str
    t: str
    q_max: int
    residual: str
    target: str
    abs_error: str


def residual_out(c: ResidualCheck) -> ResidualCheckOut:
    return ResidualCheckOut(
        N=c.point.size,
        mu=format_float(c.point.mu),
        t=format_float(c.point.coupling),
        q_max=c.q_max,
        residual=format_float(c.residual),
        target=format_float(c.target),
        abs_error=format_float(c.abs_error),
    )


def serialize_residual(c: ResidualCheck) -> str:
    return residual_out(c).model_dump_json()


# --- Summary Report Schemas ---
class CheckOut(BaseModel):
    name: str
    passed: bool
    skipped: bool = False
    detail: str = ""


class SummaryOut(BaseModel):
    N: Union[int, str]
    order: int
    passed: bool
    checks: List[CheckOut]
