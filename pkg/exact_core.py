"""
Exact arithmetic layer.

Rationals are `fractions.Fraction` values (always normalized, positive
denominator, zero stored as 0/1). On top of them:

* `NPoly`    polynomial in the symbolic matrix size N, dense, rational coefficients
* `TSeries`  formal power series in the coupling t truncated at t^order,
             coefficients `NPoly`
* `MuSeries` finite sum of c * mu^a * (log mu)^b with b in {0, 1}

All values are immutable. Bernoulli numbers are memoized in a process-wide
table that only grows under a lock, so every function here may be called
from several threads.
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Tuple, Union

from exceptions import DomainError, UnsupportedTermError
from internal.cache import cache_data, cache_lock

logger = logging.getLogger(__name__)

Rational = Fraction
Scalar = Union[int, Fraction]


def format_rational(value: Scalar) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise DomainError(f"not an exact rational: {text!r}") from e


# ============================================================
# Bernoulli numbers and power sums
# ============================================================

def bernoulli(m: int) -> Fraction:
    """B_m from sum_{k=0}^{m} C(m+1, k) B_k = 0, hence B_1 = -1/2.

    Only even indices enter the formulas of this package, so the B_1
    convention is internal.
    """
    if m < 0:
        raise DomainError(f"bernoulli index must be >= 0, got {m}")
    table = cache_data["bernoulli"]
    if m < len(table):
        return table[m]
    with cache_lock:
        if len(table) <= m:
            logger.debug(f"Extending Bernoulli table from B_{len(table) - 1} to B_{m}")
        while len(table) <= m:
            n = len(table)
            acc = sum(math.comb(n + 1, k) * table[k] for k in range(n))
            table.append(Fraction(-acc, n + 1))
    return table[m]


@lru_cache(maxsize=None)
def faulhaber(m: int) -> "NPoly":
    """P_m(N) with P_m(n) = 1^m + 2^m + ... + n^m.

    N^{m+1}/(m+1) + N^m/2 + sum_{k=1}^{m//2} C(m, 2k-1) B_{2k}/(2k) N^{m+1-2k}
    """
    if m < 1:
        raise DomainError(f"faulhaber needs m >= 1, got {m}")
    coeffs = [Fraction(0)] * (m + 2)
    coeffs[m + 1] += Fraction(1, m + 1)
    coeffs[m] += Fraction(1, 2)
    for k in range(1, m // 2 + 1):
        coeffs[m + 1 - 2 * k] += math.comb(m, 2 * k - 1) * bernoulli(2 * k) / (2 * k)
    return NPoly(tuple(coeffs))


@lru_cache(maxsize=None)
def odd_power_sum(m: int) -> "NPoly":
    """Q_m(N) with Q_m(n) = 1^m + 3^m + ... + (2n-1)^m, as P_m(2N) - 2^m P_m(N)."""
    if m < 1:
        raise DomainError(f"odd_power_sum needs m >= 1, got {m}")
    full = faulhaber(m)
    result = full.scale_argument(2) - full * 2 ** m
    # the N^m/2 middle terms of the two power sums cancel
    if result.coefficient(m) != 0:
        raise ArithmeticError(f"N^{m} terms did not cancel in odd power sum: {result.coefficient(m)}")
    return result


@lru_cache(maxsize=None)
def lower_power_sum(r: int) -> "NPoly":
    """sum_{i=0}^{N-1} i^r (with 0^0 = 1)."""
    if r < 0:
        raise DomainError(f"power must be >= 0, got {r}")
    if r == 0:
        return NPoly.monomial(1)
    return faulhaber(r) - NPoly.monomial(r)


# ============================================================
# Polynomials in N
# ============================================================

@dataclass(frozen=True)
class NPoly:
    """Dense polynomial in N; coefficients[k] multiplies N^k, trailing zeros stripped."""

    coefficients: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        coeffs = [Fraction(c) for c in self.coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def constant(cls, value: Scalar) -> "NPoly":
        return cls((Fraction(value),))

    @classmethod
    def monomial(cls, degree: int, coeff: Scalar = 1) -> "NPoly":
        if degree < 0:
            raise DomainError(f"negative degree {degree}")
        return cls((Fraction(0),) * degree + (Fraction(coeff),))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def is_constant(self) -> bool:
        return len(self.coefficients) <= 1

    def coefficient(self, k: int) -> Fraction:
        if 0 <= k < len(self.coefficients):
            return self.coefficients[k]
        return Fraction(0)

    def evaluate(self, n: Scalar) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * n + c
        return acc

    def scale_argument(self, factor: Scalar) -> "NPoly":
        """p(factor * N)."""
        factor = Fraction(factor)
        return NPoly(tuple(c * factor ** k for k, c in enumerate(self.coefficients)))

    @staticmethod
    def _coerce(other):
        if isinstance(other, NPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return NPoly.constant(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        size = max(len(self.coefficients), len(other.coefficients))
        return NPoly(tuple(self.coefficient(k) + other.coefficient(k) for k in range(size)))

    __radd__ = __add__

    def __neg__(self):
        return NPoly(tuple(-c for c in self.coefficients))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return NPoly(tuple(c * other for c in self.coefficients))
        if not isinstance(other, NPoly):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return NPoly()
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a == 0:
                continue
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return NPoly(tuple(out))

    __rmul__ = __mul__

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k in range(len(self.coefficients) - 1, -1, -1):
            c = self.coefficients[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                var = "N" if k == 1 else f"N^{k}"
                body = var if mag == 1 else f"{mag}*{var}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


# ============================================================
# Truncated t-series
# ============================================================

@dataclass(frozen=True)
class TSeries:
    """sum_{k=0}^{order} coeffs[k] t^k; nothing above t^order is ever consulted."""

    order: int
    coeffs: Tuple[NPoly, ...]

    def __post_init__(self):
        if self.order < 0:
            raise DomainError(f"series order must be >= 0, got {self.order}")
        coeffs = tuple(c if isinstance(c, NPoly) else NPoly.constant(c) for c in self.coeffs)
        if len(coeffs) != self.order + 1:
            raise DomainError(f"series of order {self.order} needs {self.order + 1} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zero(cls, order: int) -> "TSeries":
        return cls(order, (NPoly(),) * (order + 1))

    @classmethod
    def from_terms(cls, order: int, terms) -> "TSeries":
        """Build from a {power: NPoly-or-scalar} mapping; powers above `order` are dropped."""
        coeffs = [NPoly()] * (order + 1)
        for k, c in dict(terms).items():
            if 0 <= k <= order:
                coeffs[k] = coeffs[k] + c
        return cls(order, tuple(coeffs))

    def coefficient(self, k: int) -> NPoly:
        if 0 <= k <= self.order:
            return self.coeffs[k]
        return NPoly()

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def nonzero_powers(self):
        return [k for k, c in enumerate(self.coeffs) if not c.is_zero()]

    def _check_order(self, other: "TSeries"):
        if other.order != self.order:
            raise DomainError(f"series orders differ: {self.order} vs {other.order}")

    def __add__(self, other):
        if not isinstance(other, TSeries):
            return NotImplemented
        self._check_order(other)
        return TSeries(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return TSeries(self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if not isinstance(other, TSeries):
            return NotImplemented
        return self + (-other)

    def scale(self, factor) -> "TSeries":
        """Multiply every coefficient by a scalar or an NPoly."""
        return TSeries(self.order, tuple(c * factor for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, TSeries):
            self._check_order(other)
            out = []
            for k in range(self.order + 1):
                acc = NPoly()
                for i in range(k + 1):
                    a = self.coeffs[i]
                    if a.is_zero():
                        continue
                    acc = acc + a * other.coeffs[k - i]
                out.append(acc)
            return TSeries(self.order, tuple(out))
        if isinstance(other, (int, Fraction, NPoly)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, NPoly)):
            return self.scale(other)
        return NotImplemented

    def truncate(self, order: int) -> "TSeries":
        if order < 0 or order > self.order:
            raise DomainError(f"cannot truncate order {self.order} series to {order}")
        return TSeries(order, self.coeffs[: order + 1])

    def evaluate(self, n: Scalar) -> "TSeries":
        """Substitute a concrete matrix size; coefficients become constants."""
        return TSeries(self.order, tuple(NPoly.constant(c.evaluate(n)) for c in self.coeffs))

    def scale_size(self, factor: Scalar) -> "TSeries":
        """Substitute N -> factor * N."""
        return TSeries(self.order, tuple(c.scale_argument(factor) for c in self.coeffs))

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            power = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            parts.append(f"({c})*{power}" if power else f"({c})")
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O(t^{self.order + 1})"


def tseries_log_one_plus(c: Scalar, order: int) -> TSeries:
    """log(1 + c t) truncated at t^order."""
    if order < 1:
        raise DomainError(f"order must be >= 1, got {order}")
    c = Fraction(c)
    terms = {m: Fraction((-1) ** (m - 1)) * c ** m / m for m in range(1, order + 1)}
    return TSeries.from_terms(order, terms)


# ============================================================
# mu-series with logarithms
# ============================================================

@dataclass(frozen=True)
class MuTerm:
    coeff: Fraction
    mu_power: int
    log_power: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        if self.coeff == 0:
            raise DomainError("zero mu-terms are not stored")
        if self.log_power not in (0, 1):
            raise UnsupportedTermError(f"log power {self.log_power} not supported (only 0 or 1)")

    @property
    def key(self) -> Tuple[int, int]:
        return self.mu_power, self.log_power

    def __str__(self):
        factors = []
        if self.mu_power == 1:
            factors.append("mu")
        elif self.mu_power != 0:
            factors.append(f"mu^{self.mu_power}")
        if self.log_power:
            factors.append("log(mu)")
        if not factors:
            return str(self.coeff)
        return "*".join([str(self.coeff)] + factors)


def _canonical_terms(items: Iterable) -> Tuple[MuTerm, ...]:
    merged = {}
    for item in items:
        if isinstance(item, MuTerm):
            coeff, a, b = item.coeff, item.mu_power, item.log_power
        else:
            coeff, a, b = item
        merged[(a, b)] = merged.get((a, b), Fraction(0)) + Fraction(coeff)
    ordered = sorted(merged.items(), key=lambda kv: (-kv[0][0], -kv[0][1]))
    return tuple(MuTerm(c, a, b) for (a, b), c in ordered if c != 0)


@dataclass(frozen=True)
class MuSeries:
    """Sorted by (mu_power desc, log_power desc), one term per (a, b)."""

    terms: Tuple[MuTerm, ...] = ()
    notes: Tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "terms", _canonical_terms(self.terms))
        object.__setattr__(self, "notes", tuple(self.notes))

    def coefficient(self, mu_power: int, log_power: int = 0) -> Fraction:
        for term in self.terms:
            if term.key == (mu_power, log_power):
                return term.coeff
        return Fraction(0)

    def with_notes(self, *notes: str) -> "MuSeries":
        return MuSeries(self.terms, _merge_notes(self.notes, notes))

    def __add__(self, other):
        if not isinstance(other, MuSeries):
            return NotImplemented
        return MuSeries(self.terms + other.terms, _merge_notes(self.notes, other.notes))

    def __neg__(self):
        return MuSeries(tuple((-t.coeff, t.mu_power, t.log_power) for t in self.terms), self.notes)

    def __sub__(self, other):
        if not isinstance(other, MuSeries):
            return NotImplemented
        return self + (-other)

    def scale(self, factor: Scalar) -> "MuSeries":
        factor = Fraction(factor)
        return MuSeries(tuple((t.coeff * factor, t.mu_power, t.log_power) for t in self.terms), self.notes)

    def restrict(self, predicate) -> "MuSeries":
        return MuSeries(tuple(t for t in self.terms if predicate(t)), self.notes)

    def differentiate(self) -> "MuSeries":
        out = []
        for term in self.terms:
            c, a, b = term.coeff, term.mu_power, term.log_power
            if a != 0:
                out.append((c * a, a - 1, b))
            if b == 1:
                out.append((c, a - 1, 0))
        return MuSeries(tuple(out), self.notes)

    def integrate(self) -> "MuSeries":
        """Term-wise antiderivative with zero integration constant."""
        out = []
        for term in self.terms:
            c, a, b = term.coeff, term.mu_power, term.log_power
            if b == 0:
                if a == -1:
                    out.append((c, 0, 1))
                else:
                    out.append((c / (a + 1), a + 1, 0))
            elif a == -1:
                raise UnsupportedTermError("integrating mu^-1 log(mu) needs (log mu)^2")
            else:
                out.append((c / (a + 1), a + 1, 1))
                out.append((-c / (a + 1) ** 2, a + 1, 0))
        return MuSeries(tuple(out), self.notes)

    def __str__(self):
        if not self.terms:
            return "0"
        text = str(self.terms[0])
        for term in self.terms[1:]:
            body = str(term)
            text += f" - {body[1:]}" if body.startswith("-") else f" + {body}"
        return text


def _merge_notes(left, right) -> Tuple[str, ...]:
    merged = list(left)
    for note in right:
        if note not in merged:
            merged.append(note)
    return tuple(merged)


def mu_differentiate(s: MuSeries) -> MuSeries:
    return s.differentiate()


def mu_integrate(s: MuSeries) -> MuSeries:
    return s.integrate()
