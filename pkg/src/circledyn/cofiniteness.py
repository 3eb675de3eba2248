"""Boundary-of-cofiniteness statistics on exact period sets.

The low-period density condition count <= 2*log2(L-2) is decided exactly
through the equivalent integer inequality 2^count <= (L-2)^2, so ties at
equality come out right.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import NotCofinite
from .periods import PeriodSet


def _require_cofinite(ps: PeriodSet) -> int:
    if not ps.is_cofinite():
        raise NotCofinite("period set has no cofinite tail")
    return ps.tail_from


def sbc(ps: PeriodSet) -> int:
    """Strict boundary of cofiniteness: least n with S(n) contained in ps."""
    n = _require_cofinite(ps)
    while n > 1 and (n - 1) in ps:
        n -= 1
    return n


def low_period_count(ps: PeriodSet, L: int) -> int:
    """Card({1..L-2} ∩ ps)."""
    return sum(1 for k in range(1, L - 1) if k in ps)


def density_condition(ps: PeriodSet, L: int) -> bool:
    """count <= 2*log2(L-2), decided exactly as 2^count <= (L-2)^2."""
    if L <= 2:
        return False
    return 2 ** low_period_count(ps, L) <= (L - 2) ** 2


def sbcset(ps: PeriodSet) -> set[int]:
    """{L in ps : L > 2, L-1 not in ps, low-period density condition holds}."""
    top = sbc(ps)
    out = set()
    for L in range(3, top + 1):
        if L in ps and (L - 1) not in ps and density_condition(ps, L):
            out.add(L)
    return out


def bc(ps: PeriodSet) -> Optional[int]:
    """max sbcset(ps), or None when the candidate set is empty."""
    s = sbcset(ps)
    return max(s) if s else None


def dens_low_per(ps: PeriodSet, L: int) -> Fraction:
    """Density of the L-low periods: Card({1..L-2} ∩ ps) / (L-2)."""
    _require_cofinite(ps)
    if L <= 2:
        raise ValueError("density needs L > 2")
    return Fraction(low_period_count(ps, L), L - 2)


@dataclass(frozen=True)
class CofinitenessReport:
    sbc: int
    sbcset: frozenset
    bc: Optional[int]
    dens_at: dict

    def to_json(self) -> dict:
        return {
            "sbc": self.sbc,
            "sbcset": sorted(self.sbcset),
            "bc": self.bc,
            "dens_at": {str(L): f"{d.numerator}/{d.denominator}" for L, d in sorted(self.dens_at.items())},
        }


def report(ps: PeriodSet) -> CofinitenessReport:
    s = sbc(ps)
    cand = sbcset(ps)
    b = max(cand) if cand else None
    dens = {}
    for L in sorted(cand):
        dens[L] = dens_low_per(ps, L)
    if b is not None and b not in dens:
        dens[b] = dens_low_per(ps, b)
    return CofinitenessReport(sbc=s, sbcset=frozenset(cand), bc=b, dens_at=dens)
