"""
Orbifold Euler characteristics of moduli spaces of curves.

chi_complex(g, n): complex curves of genus g with n marked points.
chi_real(q, n):    real curves of genus 2q with n marked points (the
                   non-orientable contributions).

Everything is exact; factorials are big integers, never gamma approximations.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import factorial
from typing import List

from exact_core import bernoulli
from exceptions import DomainError, StabilityError

logger = logging.getLogger(__name__)


class ChiKind(str, Enum):
    COMPLEX = "complex"
    REAL = "real"


def _in_window(kind: ChiKind, genus_index: int, punctures: int) -> bool:
    if genus_index < 0 or punctures < 1:
        return False
    if kind == ChiKind.COMPLEX:
        return 2 - 2 * genus_index - punctures < 0
    return 1 - 2 * genus_index - punctures < 0


@dataclass(frozen=True)
class ChiValue:
    """genus_index is g for the complex kind and q (actual genus 2q) for the real kind."""

    kind: ChiKind
    genus_index: int
    punctures: int
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "kind", ChiKind(self.kind))
        object.__setattr__(self, "value", Fraction(self.value))
        if self.punctures > 0 and not _in_window(self.kind, self.genus_index, self.punctures):
            raise StabilityError(
                f"({self.genus_index}, {self.punctures}) is outside the {self.kind.value} stability window"
            )


def chi_complex(g: int, n: int) -> Fraction:
    """(-1)^n (2g+n-3)! (2g-1) / ((2g)! n!) * B_{2g}, for 2 - 2g - n < 0."""
    if not _in_window(ChiKind.COMPLEX, g, n):
        raise StabilityError(f"chi_complex({g}, {n}): need g >= 0, n >= 1 and 2 - 2g - n < 0")
    ratio = Fraction(factorial(2 * g + n - 3) * (2 * g - 1), factorial(2 * g) * factorial(n))
    return (-1) ** n * ratio * bernoulli(2 * g)


def chi_real(q: int, n: int) -> Fraction:
    """(-1)^n / 2 * (2q+n-2)! (2^{2q-1} - 1) / ((2q)! n!) * B_{2q}, for 1 - 2q - n < 0.

    2^{2q-1} is the exact rational 1/2 at q = 0.
    """
    if not _in_window(ChiKind.REAL, q, n):
        raise StabilityError(f"chi_real({q}, {n}): need q >= 0, n >= 1 and 1 - 2q - n < 0")
    ratio = Fraction(factorial(2 * q + n - 2), factorial(2 * q) * factorial(n))
    return (-1) ** n * Fraction(1, 2) * ratio * (Fraction(2) ** (2 * q - 1) - 1) * bernoulli(2 * q)


def chi_complex_unpunctured(g: int) -> Fraction:
    """B_{2g} / (2g (2g-2)); sphere and torus are logarithmic and excluded."""
    if g < 2:
        raise DomainError(f"chi_complex_unpunctured needs g >= 2, got {g}")
    return bernoulli(2 * g) / (2 * g * (2 * g - 2))


def chi_real_unpunctured(k: int) -> Fraction:
    """(2^{2k-1} - 1)/(2k - 1) * B_{2k}/(4k).

    Returned with a positive prefactor; the minus sign in front of the
    continuum tail is applied by the continuum builders.
    """
    if k < 1:
        raise DomainError(f"chi_real_unpunctured needs k >= 1, got {k}")
    return Fraction(2 ** (2 * k - 1) - 1, 2 * k - 1) * bernoulli(2 * k) / (4 * k)


def chi_table(kind, g_max: int, n_max: int) -> List[ChiValue]:
    """Every in-window cell with genus_index <= g_max and 1 <= punctures <= n_max, row-major."""
    kind = ChiKind(kind)
    if g_max < 0 or n_max < 0:
        raise DomainError(f"table bounds must be >= 0, got g_max={g_max}, n_max={n_max}")
    compute = chi_complex if kind == ChiKind.COMPLEX else chi_real
    rows = []
    for genus_index in range(g_max + 1):
        for punctures in range(1, n_max + 1):
            if _in_window(kind, genus_index, punctures):
                rows.append(ChiValue(kind, genus_index, punctures, compute(genus_index, punctures)))
    logger.info(f"chi table {kind.value}: {len(rows)} cells for g_max={g_max}, n_max={n_max}")
    return rows
