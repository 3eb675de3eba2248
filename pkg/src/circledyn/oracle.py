"""Brute-force exact periodic points of a piecewise-affine lifting.

Every loop of the Markov graph modulo 1 carries a composed affine branch whose
fixed point (solved exactly over Q) is a candidate periodic point; partition
points are classified by direct iteration.  Zero tolerance anywhere: witnesses
satisfy their defining equations as rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from .arith import floor_frac, rat_str
from .lifting import Lifting
from .markov import DEFAULT_LOOP_CAP, MarkovSystem, enumerate_loops


@dataclass(frozen=True)
class PeriodicWitness:
    point: Fraction
    minimal_period: int
    rotation: Fraction
    itinerary: tuple

    def check(self, F: Lifting) -> bool:
        """Exact defining property: F^m(x) = x + rotation*m, no divisor works."""
        m = self.minimal_period
        gain = self.rotation * m
        if gain.denominator != 1:
            return False
        if F.iterate(self.point, m) != self.point + gain:
            return False
        for div in range(1, m):
            if m % div == 0 and (F.iterate(self.point, div) - self.point).denominator == 1:
                return False
        return True

    def to_json(self) -> dict:
        return {
            "point": rat_str(self.point),
            "minimal_period": self.minimal_period,
            "rotation": rat_str(self.rotation),
            "itinerary": list(self.itinerary),
        }


@dataclass
class DegenerateLoopReport:
    """A loop whose composed branch is a translation by an integer: an
    interval of fixed points of F^L - K.  Reported alongside the witnesses
    sampled from its interior."""

    loop: tuple
    length: int


@dataclass
class OracleResult:
    bound: int
    witnesses: dict = field(default_factory=dict)  # (period, rotation) -> PeriodicWitness
    degenerate_loops: list = field(default_factory=list)

    def add(self, w: PeriodicWitness):
        key = (w.minimal_period, w.rotation)
        self.witnesses.setdefault(key, w)

    def periods(self) -> set[int]:
        return {m for (m, _) in self.witnesses}

    def period_rotations(self) -> set:
        return set(self.witnesses)

    def to_json(self) -> dict:
        items = sorted(self.witnesses.items(), key=lambda kv: (kv[0][0], kv[0][1]))
        return {
            "bound": self.bound,
            "witnesses": [w.to_json() for _, w in items],
            "degenerate_loops": [list(d.loop) for d in self.degenerate_loops],
        }


# ---------------------------------------------------------------------------
# loop branches
# ---------------------------------------------------------------------------


def loop_branch(F: Lifting, M: MarkovSystem, word: tuple) -> tuple[Fraction, Fraction]:
    """Composed affine return map y -> A y + B along the loop word.

    Each step is y -> F(y) - shift on the class representative, so a fixed
    point of the composition is a point whose F-orbit realizes the itinerary
    and comes back to itself modulo the accumulated integer translation.
    """
    A, B = Fraction(1), Fraction(0)
    for t in range(len(word)):
        i = word[t]
        j = word[(t + 1) % len(word)]
        a, b = M.classes[i]
        fa, fb = F.eval(a), F.eval(b)
        alpha = (fb - fa) / (b - a)
        beta = fa - alpha * a
        s = M.shifts[i][j]
        A, B = alpha * A, alpha * B + beta - s
    return A, B


def _follows_itinerary(F: Lifting, M: MarkovSystem, word: tuple, x0: Fraction) -> bool:
    """Does x0's orbit stay strictly inside the representatives of the word
    (translated back by the arrow shifts) and return exactly?"""
    z = x0
    for t in range(len(word)):
        i = word[t]
        j = word[(t + 1) % len(word)]
        a, b = M.classes[i]
        if not (a < z < b):
            return False
        z = F.eval(z) - M.shifts[i][j]
    return z == x0


def solve_loop(F: Lifting, M: MarkovSystem, word: tuple):
    """("point", y*), ("degenerate", None) or ("none", None) for a loop word.

    "point": the unique fixed point of the composed branch, verified strictly
    interior to its itinerary (boundary hits are rejected; partition orbits
    are classified separately).  "degenerate": identity branch, an interval of
    fixed points.
    """
    A, B = loop_branch(F, M, word)
    if A == 1:
        return ("degenerate", None) if B == 0 else ("none", None)
    y = B / (1 - A)
    if _follows_itinerary(F, M, word, y):
        return "point", y
    return "none", None


def _minimal_period_data(F: Lifting, x: Fraction, L: int) -> tuple[int, Fraction]:
    """Minimal period m | L of the periodic point x, with rotation number."""
    z = x
    for m in range(1, L + 1):
        z = F.eval(z)
        if L % m == 0 and (z - x).denominator == 1:
            return m, Fraction((z - x).numerator, m)
    raise AssertionError("point not periodic with period dividing L")


def _class_of_point(M: MarkovSystem, x: Fraction) -> int:
    from bisect import bisect_right

    r = x - floor_frac(x)
    i = bisect_right(M.partition, r) - 1
    if i < 0:
        return len(M.classes) - 1  # r below partition[0]: wrap class
    return i


def _itinerary_of(F: Lifting, M: MarkovSystem, x: Fraction, m: int) -> tuple:
    out = []
    z = x
    for _ in range(m):
        out.append(_class_of_point(M, z))
        z = F.eval(z)
    return tuple(out)


def _classify_partition_orbits(F: Lifting, M: MarkovSystem, result: OracleResult, bound: int):
    seen: set = set()
    for start in M.partition:
        if start in seen:
            continue
        index_of: dict = {}
        lifts: list = []
        z = start
        while True:
            r = z - floor_frac(z)
            if r in index_of:
                j = index_of[r]
                L = len(lifts) - j
                x0 = lifts[j] - floor_frac(lifts[j])
                m, rho = _minimal_period_data(F, x0, L)
                if m <= bound:
                    result.add(PeriodicWitness(x0, m, rho, _itinerary_of(F, M, x0, m)))
                break
            index_of[r] = len(lifts)
            lifts.append(z)
            seen.add(r)
            z = F.eval(z)


def _sample_degenerate(F, M, word, result: OracleResult, bound: int):
    """Witnesses from an identity branch: several interior sample points."""
    a, b = M.classes[word[0]]
    for num, den in ((1, 2), (1, 3), (2, 5)):
        x0 = a + (b - a) * Fraction(num, den)
        if _follows_itinerary(F, M, word, x0):
            m, rho = _minimal_period_data(F, x0, len(word))
            if m <= bound:
                result.add(PeriodicWitness(x0, m, rho, _itinerary_of(F, M, x0, m)))


def periods_up_to(
    F: Lifting, M: MarkovSystem, P: int, loop_cap: int = DEFAULT_LOOP_CAP
) -> OracleResult:
    """Exact set of (minimal period, rotation number) pairs with period <= P.

    Loops of length p <= P catch every periodic orbit disjoint from the
    partition (the associated loop has the orbit's length); partition orbits
    are classified directly.  Minimal periods need only be checked on divisors
    of the loop length, which F^p(x) = x + m forces.  Non-simple loops carry
    no new orbits except even repetitions of a branch with slope -1, whose
    doubled (identity) branch is sampled explicitly.
    """
    if P < 1:
        raise ValueError("P must be >= 1")
    result = OracleResult(bound=P)
    _classify_partition_orbits(F, M, result, P)
    for loop in enumerate_loops(M, P, cap=loop_cap):
        if not loop.simple:
            continue
        word = loop.vertices
        A, B = loop_branch(F, M, word)
        if A == 1:
            if B == 0:
                result.degenerate_loops.append(DegenerateLoopReport(word, loop.length))
                _sample_degenerate(F, M, word, result, P)
            continue
        y = B / (1 - A)
        if _follows_itinerary(F, M, word, y):
            m, rho = _minimal_period_data(F, y, loop.length)
            if m <= P:
                result.add(PeriodicWitness(y, m, rho, tuple(word[:m])))
        if A == -1 and 2 * loop.length <= P:
            # doubled branch is the identity: an interval of period-2L points
            doubled = word + word
            result.degenerate_loops.append(DegenerateLoopReport(doubled, 2 * loop.length))
            _sample_degenerate(F, M, doubled, result, P)
    return result
