"""
Continuum (double-scaling) limit of the symplectic and orthogonal Penner models.

Exact side: the mu-series of the Penner, non-orientable and combined
continuum free energies, the density of states and its Wick rotation.

Numeric side: the finite-N non-orientable sector after t -> -t/(2N) with
t = 1 - mu/(2N), the genus-zero closed form subtracted from it, the puncture
resummation at fixed genus, and Euler-Maclaurin for sums of log(1 + p t).
Long sums go through compensated summation in a fixed reduction order.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Tuple

import numpy as np
from mpmath import mp

import config
from euler_char import chi_complex_unpunctured, chi_real_unpunctured
from exact_core import MuSeries, MuTerm, bernoulli, format_rational
from exceptions import DomainError
from internal.precision import neumaier_sum, tree_sum

logger = logging.getLogger(__name__)


class ContinuumModel(str, Enum):
    PENNER = "penner"
    NONORIENTABLE = "nonorientable"
    SYMPLECTIC = "symplectic"
    ORTHOGONAL = "orthogonal"


def _check_positive_int(name: str, value: int, minimum: int):
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise DomainError(f"{name} must be an integer >= {minimum}, got {value!r}")


def _check_coupling(t: float):
    if not (0.0 < t < 1.0):
        raise DomainError(f"coupling t must lie in (0, 1), got {t!r}")


# ============================================================
# Exact mu-series
# ============================================================

def penner_continuum(g_max: int) -> MuSeries:
    _check_positive_int("g_max", g_max, 2)
    terms = [(Fraction(1, 2), 2, 1), (Fraction(-1, 12), 0, 1)]
    terms += [(chi_complex_unpunctured(g), 2 - 2 * g, 0) for g in range(2, g_max + 1)]
    return MuSeries(tuple(terms))


def nonorientable_continuum(k_max: int) -> MuSeries:
    _check_positive_int("k_max", k_max, 1)
    terms = [(Fraction(1, 4), 1, 1)]
    terms += [(-chi_real_unpunctured(k), 1 - 2 * k, 0) for k in range(1, k_max + 1)]
    return MuSeries(tuple(terms))


def printed_continuum(model, g_max: int, k_max: int) -> MuSeries:
    """The symplectic continuum free energy with the signs as printed in the source.

    The orthogonal counterpart flips the sign of the non-orientable terms
    (mu log mu and the tail); the log mu term is left as printed.
    """
    model = ContinuumModel(model)
    if model not in (ContinuumModel.SYMPLECTIC, ContinuumModel.ORTHOGONAL):
        raise DomainError(f"no printed form for model {model.value!r}")
    _check_positive_int("g_max", g_max, 2)
    _check_positive_int("k_max", k_max, 1)
    sign = -1 if model == ContinuumModel.SYMPLECTIC else 1
    terms = [(Fraction(1, 4), 2, 1), (Fraction(1, 24), 0, 1), (Fraction(sign, 4), 1, 1)]
    terms += [(chi_complex_unpunctured(g) / 2, 2 - 2 * g, 0) for g in range(2, g_max + 1)]
    terms += [(sign * chi_real_unpunctured(k), 1 - 2 * k, 0) for k in range(1, k_max + 1)]
    return MuSeries(tuple(terms))


def _basis_label(mu_power: int, log_power: int) -> str:
    label = str(MuTerm(1, mu_power, log_power))
    return label[2:] if label.startswith("1*") else label


def _discrepancy_notes(computed: MuSeries, printed: MuSeries) -> Tuple[str, ...]:
    keys = sorted({t.key for t in computed.terms} | {t.key for t in printed.terms}, key=lambda k: (-k[0], -k[1]))
    notes = []
    for a, b in keys:
        ours, theirs = computed.coefficient(a, b), printed.coefficient(a, b)
        if ours != theirs:
            notes.append(
                f"printed form differs at {_basis_label(a, b)}: "
                f"combination gives {format_rational(ours)}, printed has {format_rational(theirs)}"
            )
    return tuple(notes)


def combined_continuum(model, g_max: int, k_max: int) -> MuSeries:
    """1/2 F(mu) -/+ F_NO(mu) for symplectic/orthogonal, with notes against the printed signs."""
    model = ContinuumModel(model)
    if model not in (ContinuumModel.SYMPLECTIC, ContinuumModel.ORTHOGONAL):
        raise DomainError(f"combined continuum needs symplectic or orthogonal, got {model.value!r}")
    orientable = penner_continuum(g_max).scale(Fraction(1, 2))
    nonorientable = nonorientable_continuum(k_max)
    if model == ContinuumModel.SYMPLECTIC:
        combined = orientable - nonorientable
    else:
        combined = orientable + nonorientable
    notes = _discrepancy_notes(combined, printed_continuum(model, g_max, k_max))
    if notes:
        logger.info(f"{model.value} continuum: {len(notes)} terms differ from the printed form")
    return combined.with_notes(*notes)


def build_continuum(model, g_max: int = config.DEFAULT_G_MAX, k_max: int = config.DEFAULT_K_MAX) -> MuSeries:
    model = ContinuumModel(model)
    if model == ContinuumModel.PENNER:
        return penner_continuum(g_max)
    if model == ContinuumModel.NONORIENTABLE:
        return nonorientable_continuum(k_max)
    return combined_continuum(model, g_max, k_max)


def density_of_states_series(m_max: int) -> MuSeries:
    """1/2 [-log mu + sum_m (2^(2m-1) - 1) B_2m/m mu^(-2m)]."""
    _check_positive_int("m_max", m_max, 1)
    terms = [(Fraction(-1, 2), 0, 1)]
    for m in range(1, m_max + 1):
        terms.append(((2 ** (2 * m - 1) - 1) * bernoulli(2 * m) / (2 * m), -2 * m, 0))
    return MuSeries(tuple(terms))


def wick_rotate(s: MuSeries) -> MuSeries:
    """mu -> i mu on the real part: c mu^a picks up (-1)^(a/2) for even a.

    Odd powers and log terms have no agreed rotation; they are passed through
    unchanged and listed in a note.
    """
    rotated = []
    untouched = []
    for term in s.terms:
        if term.log_power == 0 and term.mu_power % 2 == 0:
            rotated.append((term.coeff * (-1) ** (abs(term.mu_power) // 2), term.mu_power, 0))
        else:
            rotated.append((term.coeff, term.mu_power, term.log_power))
            untouched.append(str(term))
    out = MuSeries(tuple(rotated), s.notes)
    if untouched:
        out = out.with_notes("wick rotation left unchanged: " + ", ".join(untouched))
    return out


# ============================================================
# Genus zero and the puncture sums
# ============================================================

def genus_zero_series_term(N: int, t: float, n: int) -> float:
    """1/4 (2N)^n (-t)^(n-1) / (n(n-1)): the n-punctured sphere in the non-orientable sum."""
    _check_positive_int("N", N, 1)
    _check_positive_int("n", n, 2)
    two_n = 2 * N
    return 0.25 * two_n * (-two_n * t) ** (n - 1) / (n * (n - 1))


def genus_zero_partial_sum(N: int, t: float, n_max: int) -> float:
    """(N/2) sum_{n=2}^{n_max} t^(n-1)/(n(n-1)), the genus-zero tower after t -> -t/(2N)."""
    _check_positive_int("N", N, 1)
    _check_positive_int("n_max", n_max, 1)
    if not (0.0 <= t < 1.0):
        raise DomainError(f"coupling t must lie in [0, 1), got {t!r}")
    formal = -t / (2 * N)
    return neumaier_sum(genus_zero_series_term(N, formal, n) for n in range(2, n_max + 1))


def _genus_zero_from_complement(N: int, s: float) -> float:
    """genus_zero_closed at t = 1 - s, with s given directly."""
    return 0.5 * N * (1.0 + s / (1.0 - s) * math.log(s))


def genus_zero_closed(N: int, t: float) -> float:
    """(N/2) [1 + ((1-t)/t) log(1-t)]."""
    _check_positive_int("N", N, 1)
    _check_coupling(t)
    return 0.5 * N * (1.0 + (1.0 - t) / t * math.log1p(-t))


def _higher_genus_at(q: int, argument: float) -> float:
    return -float(chi_real_unpunctured(q)) * argument ** (1 - 2 * q)


def higher_genus_term(q: int, N: int, t: float) -> float:
    """-chi_r(q) (2N(1-t)/t)^(1-2q)."""
    _check_positive_int("q", q, 1)
    _check_positive_int("N", N, 1)
    _check_coupling(t)
    return _higher_genus_at(q, 2 * N * (1.0 - t) / t)


@dataclass(frozen=True)
class ResummationCheck:
    partial: float
    closed: float
    error: float


def puncture_resummation_check(q: int, N: int, t: float, n_max: int) -> ResummationCheck:
    """Sum the genus-2q tower over n = 0..n_max after t -> -t/(2N).

    Term n is -1/2 (2^(2q-1)-1) B_2q/(2q)! (2q+n-2)!/n! t^(2q+n-1) (2N)^(1-2q);
    the full sum is higher_genus_term(q, N, t).
    """
    _check_positive_int("q", q, 1)
    _check_positive_int("N", N, 1)
    _check_positive_int("n_max", n_max, 0)
    _check_coupling(t)
    if 2 * N * t >= 1:
        logger.warning(f"puncture sum may diverge: 2N*t = {2 * N * t:.6g} >= 1")

    lead = Fraction(-1, 2) * (2 ** (2 * q - 1) - 1) * bernoulli(2 * q) * math.factorial(2 * q - 2) / math.factorial(2 * q)
    term = float(lead) * (t / (2 * N)) ** (2 * q - 1)
    terms = [term]
    for n in range(1, n_max + 1):
        term *= t * (2 * q + n - 2) / n
        terms.append(term)
    partial = neumaier_sum(terms)
    closed = higher_genus_term(q, N, t)
    return ResummationCheck(partial, closed, abs(partial - closed))


# ============================================================
# Double scaling
# ============================================================

@dataclass(frozen=True)
class ScalingPoint:
    """Matrix size N and continuum coupling mu; the lattice coupling is t = 1 - mu/(2N)."""

    size: int
    mu: float

    def __post_init__(self):
        _check_positive_int("N", self.size, 1)
        mu = float(self.mu)
        object.__setattr__(self, "mu", mu)
        if not math.isfinite(mu) or not (0.0 < mu < 2 * self.size):
            raise DomainError(f"mu must satisfy 0 < mu < 2N = {2 * self.size}, got {self.mu!r}")
        if self.smallest_log_argument() <= 0:
            raise DomainError(f"non-positive log argument at N={self.size}, mu={mu}")

    @property
    def complement(self) -> float:
        """1 - t = mu/(2N)."""
        return self.mu / (2 * self.size)

    @property
    def coupling(self) -> float:
        return 1.0 - self.complement

    def log_arguments(self) -> np.ndarray:
        """1 - p t/(2N) for odd p, as (2N - p)/(2N) + p mu/(4N^2)."""
        two_n = 2.0 * self.size
        p = np.arange(1, 2 * self.size, 2, dtype=np.float64)
        return (two_n - p) / two_n + p * (self.mu / (two_n * two_n))

    def smallest_log_argument(self) -> float:
        p = 2 * self.size - 1
        two_n = 2.0 * self.size
        return (two_n - p) / two_n + p * (self.mu / (two_n * two_n))


@dataclass(frozen=True)
class ResidualCheck:
    point: ScalingPoint
    q_max: int
    residual: float
    target: float
    abs_error: float


def double_scaling_eval(point: ScalingPoint, workers: int = config.DEFAULT_WORKERS) -> float:
    """E(N, mu) = -1/2 sum_{p odd < 2N} log(1 - p t/(2N))."""
    args = point.log_arguments()
    if np.any(args <= 0):
        raise DomainError(f"non-positive log argument at N={point.size}, mu={point.mu}")
    p = np.arange(1, 2 * point.size, 2, dtype=np.float64)
    shifted = -p * (point.coupling / (2.0 * point.size))
    # log1p near 1, exact-complement form elsewhere
    logs = np.where(args < 0.5, np.log(args), np.log1p(np.maximum(shifted, -0.5)))
    logger.info(f"double scaling sum: N={point.size}, mu={point.mu}, {p.size} terms, workers={workers}")
    return -0.5 * tree_sum(logs, workers)


def double_scaling_oracle(point: ScalingPoint, dps: int = config.ORACLE_DPS):
    """E(N, mu) through the Gamma-function form of the odd product, at `dps` digits.

    prod_{j<N} (1 - (2j+1)t/(2N)) = (t/N)^N Gamma(N/t + 1/2) / Gamma(mu/(2t) + 1/2)
    """
    with mp.workdps(dps):
        n = mp.mpf(point.size)
        mu = mp.mpf(point.mu)
        t = 1 - mu / (2 * n)
        log_product = n * mp.log(t / n) + mp.loggamma(n / t + mp.mpf(1) / 2) - mp.loggamma(mu / (2 * t) + mp.mpf(1) / 2)
        return -log_product / 2


def double_scaling_residual(point: ScalingPoint, q_max: int, workers: int = config.DEFAULT_WORKERS,
                            oracle: bool = False) -> ResidualCheck:
    """E(N, mu) minus the genus-zero closed form, against the truncated genus tail at mu/t."""
    _check_positive_int("q_max", q_max, 1)
    if oracle:
        energy = float(double_scaling_oracle(point))
    else:
        energy = double_scaling_eval(point, workers)
    residual = energy - _genus_zero_from_complement(point.size, point.complement)
    argument = point.mu / point.coupling
    target = neumaier_sum(_higher_genus_at(q, argument) for q in range(1, q_max + 1))
    check = ResidualCheck(point, q_max, residual, target, abs(residual - target))
    logger.info(f"double scaling residual: N={point.size}, mu={point.mu}, abs_error={check.abs_error:.3e}")
    return check


# ============================================================
# Euler-Maclaurin
# ============================================================

def _log_derivative(j: int, x: float, t: float) -> float:
    """j-th derivative of log(1 + x t) in x."""
    return (-1) ** (j - 1) * math.factorial(j - 1) * t ** j * (1.0 + x * t) ** (-j)


def _log_antiderivative(u: float) -> float:
    return (1.0 + u) * math.log1p(u) - u


def euler_maclaurin_log_sum(lo: int, hi: int, t: float, k_max: int) -> float:
    """Euler-Maclaurin estimate of sum_{p=lo}^{hi} log(1 + p t).

    1/2 [f(lo) + f(hi)] + int_lo^hi f + sum_k B_2k/(2k)! [f^(2k-1)(hi) - f^(2k-1)(lo)]
    """
    _check_positive_int("k_max", k_max, 1)
    if not isinstance(lo, int) or not isinstance(hi, int) or hi < lo:
        raise DomainError(f"need integers lo <= hi, got lo={lo!r}, hi={hi!r}")
    if 1 + lo * t <= 0 or 1 + hi * t <= 0:
        raise DomainError(f"non-positive log argument on [{lo}, {hi}] at t={t}")
    if t == 0:
        return 0.0
    if hi == lo:
        return math.log1p(lo * t)

    pieces = [
        0.5 * (math.log1p(lo * t) + math.log1p(hi * t)),
        (_log_antiderivative(hi * t) - _log_antiderivative(lo * t)) / t,
    ]
    for k in range(1, k_max + 1):
        weight = float(bernoulli(2 * k) / math.factorial(2 * k))
        pieces.append(weight * (_log_derivative(2 * k - 1, hi, t) - _log_derivative(2 * k - 1, lo, t)))
    return neumaier_sum(pieces)


def nonorientable_euler_maclaurin(N: int, t: float, k_max: int) -> float:
    """-1/2 sum_{p odd < 2N} log(1 + p t) as all p up to 2N minus the even ones."""
    _check_positive_int("N", N, 1)
    everything = euler_maclaurin_log_sum(1, 2 * N, t, k_max)
    evens = euler_maclaurin_log_sum(1, N, 2 * t, k_max)
    return -0.5 * (everything - evens)


def nonorientable_direct(N: int, t: float, workers: int = config.DEFAULT_WORKERS) -> float:
    _check_positive_int("N", N, 1)
    p = np.arange(1, 2 * N, 2, dtype=np.float64)
    args = p * t
    if np.any(args <= -1):
        raise DomainError(f"non-positive log argument at N={N}, t={t}")
    return -0.5 * tree_sum(np.log1p(args), workers)

