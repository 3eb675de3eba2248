"""Exact scalar arithmetic: rationals, the Sharkovskii ordering, integer
polynomials and certified real root isolation.

Rationals are `fractions.Fraction` throughout the package (always reduced,
positive denominator). They serialize as "p/q" strings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import NoRootAbove

Rational = Fraction


def rat(x, y=None) -> Fraction:
    """Build a Fraction; `rat("2/5")`, `rat(2, 5)` and `rat(3)` all work."""
    if y is not None:
        return Fraction(x, y)
    return Fraction(x)


def rat_str(q: Fraction) -> str:
    """Serialize a rational as "p/q" (integers stay "p/1" free: "p")."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rat(s: str) -> Fraction:
    return Fraction(s.strip())


def floor_frac(q: Fraction) -> int:
    return q.numerator // q.denominator


def ceil_frac(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


# ---------------------------------------------------------------------------
# Sharkovskii ordering on N ∪ {2^∞}
# ---------------------------------------------------------------------------

TWO_INFINITY = "2^inf"


@dataclass(frozen=True)
class ShoNumber:
    """An element of N ∪ {2^∞}.

    `value` is a positive integer, or the string "2^inf" for the symbol 2^∞
    that sits above all powers of two and below everything with odd part >= 3.
    """

    value: object

    def __post_init__(self):
        if self.value != TWO_INFINITY:
            if not isinstance(self.value, int) or self.value < 1:
                raise ValueError(f"ShoNumber needs a positive integer or 2^inf, got {self.value!r}")

    @property
    def is_two_infinity(self) -> bool:
        return self.value == TWO_INFINITY

    def __repr__(self):
        return f"ShoNumber({self.value})"


def _split_pow2(n: int) -> tuple[int, int]:
    """n = 2^a * m with m odd; returns (a, m)."""
    a = 0
    while n % 2 == 0:
        n //= 2
        a += 1
    return a, n


def _sho_key(s: ShoNumber) -> tuple:
    # Comparable key, *smaller key = greater in the Sharkovskii order*.
    # Bucket 0: numbers with odd part >= 3, ordered by (doubling level, odd part).
    # Bucket 1: 2^∞. Bucket 2: powers of two, descending exponent.
    if s.is_two_infinity:
        return (1,)
    a, m = _split_pow2(s.value)
    if m >= 3:
        return (0, a, m)
    return (2, -a)


def sharkovskii_geq(a: ShoNumber | int, b: ShoNumber | int) -> bool:
    """True iff a >= b in the Sharkovskii ordering 3 > 5 > ... > 2^∞ > ... > 2 > 1."""
    if isinstance(a, int):
        a = ShoNumber(a)
    if isinstance(b, int):
        b = ShoNumber(b)
    return _sho_key(a) <= _sho_key(b)


def sharkovskii_tail(s: ShoNumber | int):
    """The set {k in N : k <=_Sh s} as a PeriodSet.

    For s = 2^a (finite power of two) the tail is the finite set
    {1, 2, ..., 2^a}.  For s = 2^∞ it is all powers of two.  For
    s = 2^a * m with m >= 3 odd it is
        {2^a * m' : m' odd >= m} ∪ {k : v2(k) > a, odd(k) >= 3} ∪ {2^b : b >= 0},
    encoded through the pattern components of PeriodSet.
    """
    from .periods import PeriodSet  # local import: periods builds on arith

    if isinstance(s, int):
        s = ShoNumber(s)
    if s.is_two_infinity:
        return PeriodSet(patterns=(("pow2",),))
    a, m = _split_pow2(s.value)
    if m == 1:
        return PeriodSet(finite=frozenset(2**j for j in range(a + 1)))
    return PeriodSet(
        patterns=(
            ("level_odds", a, m),
            ("deeper_odds", a),
            ("pow2",),
        )
    )


# ---------------------------------------------------------------------------
# Integer polynomials
# ---------------------------------------------------------------------------


class IntPolynomial:
    """Dense integer-coefficient polynomial, constant term first.

    Immutable; the coefficient list is normalized so the leading coefficient
    is nonzero (the zero polynomial is the empty tuple).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int]):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("IntPolynomial is immutable")

    # -- basic structure ----------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> int:
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other):
        return isinstance(other, IntPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if self.is_zero():
            return "IntPolynomial(0)"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                terms.append(f"{c:+d}")
            elif i == 1:
                terms.append(f"{c:+d}*x")
            else:
                terms.append(f"{c:+d}*x^{i}")
        return "IntPolynomial(" + " ".join(terms) + ")"

    # -- arithmetic ----------------------------------------------------------

    @staticmethod
    def zero() -> "IntPolynomial":
        return IntPolynomial(())

    @staticmethod
    def monomial(coeff: int, power: int) -> "IntPolynomial":
        return IntPolynomial([0] * power + [coeff])

    @staticmethod
    def x_minus(c: int) -> "IntPolynomial":
        return IntPolynomial([-c, 1])

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPolynomial(out)

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial([-c for c in self.coeffs])

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPolynomial([c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return IntPolynomial.zero()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPolynomial(out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "IntPolynomial":
        """Multiply by x^k."""
        if self.is_zero():
            return self
        return IntPolynomial((0,) * k + self.coeffs)

    def eval(self, x):
        """Exact Horner evaluation; accepts int or Fraction."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def divmod_exact(self, divisor: "IntPolynomial") -> tuple["IntPolynomial", "IntPolynomial"]:
        """Euclidean division when it stays over the integers.

        Requires every intermediate leading-coefficient division to be exact;
        sufficient for monic or +-1-leading divisors, which is all we use.
        """
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        rem = list(self.coeffs)
        dlead = divisor.leading()
        dd = divisor.degree
        if len(rem) - 1 < dd:
            return IntPolynomial.zero(), IntPolynomial(rem)
        q = [0] * (len(rem) - dd)
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            if c % dlead != 0:
                raise ValueError("non-exact division over Z")
            f = c // dlead
            q[i - dd] = f
            for j, dc in enumerate(divisor.coeffs):
                rem[i - dd + j] -= f * dc
        return IntPolynomial(q), IntPolynomial(rem)

    def divides(self, other: "IntPolynomial") -> bool:
        try:
            _, r = other.divmod_exact(self)
        except ValueError:
            return False
        return r.is_zero()

    def cauchy_root_bound(self) -> Fraction:
        """1 + max|c_i| / |lead|: every real root lies in (-B, B)."""
        if self.is_zero():
            raise ValueError("zero polynomial")
        lead = abs(self.leading())
        if self.degree == 0:
            return Fraction(1)
        m = max(abs(c) for c in self.coeffs[:-1])
        return 1 + Fraction(m, lead)


# ---------------------------------------------------------------------------
# Certified root isolation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CertifiedRoot:
    """A bracket [lower, upper] with a sign change of the tracked function."""

    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("empty bracket")

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2

    def log_float(self) -> float:
        """float(log(midpoint)); presentation only, never used in proofs."""
        return math.log(float(self.midpoint()))

    def overlaps(self, other: "CertifiedRoot", slack: Fraction = Fraction(0)) -> bool:
        return self.lower <= other.upper + slack and other.lower <= self.upper + slack

    def to_json(self) -> dict:
        return {"lower": rat_str(self.lower), "upper": rat_str(self.upper)}


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def largest_root_above(
    p: IntPolynomial,
    floor: Fraction,
    tol: Fraction,
    probes: int = 200,
    grid_checks: int = 64,
) -> CertifiedRoot:
    """Certified bracket of width <= tol around the largest real root > floor.

    Strategy: descend geometrically from the Cauchy bound looking for a point
    whose sign differs from the sign at +infinity, then bisect keeping the
    sign-at-infinity side on the right.  Roots exactly at `floor` are deflated
    first (x - floor factors for integer floor; otherwise rejected by a probe).
    The "no sign change above the bracket" condition is sampled on a geometric
    grid up to the Cauchy bound; for characteristic polynomials of nonnegative
    matrices it holds a priori (Perron root dominates all real eigenvalues).
    """
    floor = Fraction(floor)
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if p.is_zero() or p.degree == 0:
        raise NoRootAbove("constant polynomial")

    # deflate roots at the floor itself (only x - floor with integer floor,
    # which covers the unit-circle cofactors met in practice)
    while p.eval(floor) == 0:
        if floor.denominator == 1:
            p, _ = p.divmod_exact(IntPolynomial.x_minus(int(floor)))
        else:
            num, den = floor.numerator, floor.denominator
            p, _ = p.divmod_exact(IntPolynomial([-num, den]))
        if p.is_zero() or p.degree == 0:
            raise NoRootAbove("all roots at the floor")

    bound = p.cauchy_root_bound()
    if bound <= floor:
        raise NoRootAbove("Cauchy bound at or below floor")
    s_inf = _sign(p.leading())
    hi = bound
    assert _sign(p.eval(hi)) == s_inf

    lo = None
    span = bound - floor
    x = floor + span / 2
    for _ in range(probes):
        sx = _sign(p.eval(x))
        if sx != s_inf and sx != 0:
            lo = x
            break
        if sx == 0:
            # probe hit a root exactly; bracket it by nudging
            lo = x - span / (2 * probes)
            break
        x = floor + (x - floor) / 2
    if lo is None:
        raise NoRootAbove("no sign change found above floor")

    while hi - lo > tol:
        mid = (lo + hi) / 2
        sm = _sign(p.eval(mid))
        if sm == s_inf:
            hi = mid
        elif sm == 0:
            half = tol / 4
            lo, hi = mid - half, mid + half
            break
        else:
            lo = mid

    # sampled certificate that no sign change exists above the bracket
    step = (bound - hi) / grid_checks
    if step > 0:
        for j in range(1, grid_checks + 1):
            if _sign(p.eval(hi + j * step)) != s_inf:
                raise NoRootAbove("sign change above candidate bracket: not the largest root")
    return CertifiedRoot(lo, hi)


# ---------------------------------------------------------------------------
# Characteristic polynomial oracle
# ---------------------------------------------------------------------------


def bareiss_det(matrix: Sequence[Sequence[int]]) -> int:
    """Exact determinant of an integer matrix by fraction-free elimination."""
    n = len(matrix)
    if n == 0:
        return 1
    m = [list(map(int, row)) for row in matrix]
    if any(len(row) != n for row in m):
        raise ValueError("matrix must be square")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def char_poly(matrix: Sequence[Sequence[int]]) -> IntPolynomial:
    """Exact characteristic polynomial det(xI - M) of a square integer matrix.

    Fraction-free Bareiss determinants at the integer nodes x = 0..n, then
    exact Lagrange interpolation of the (monic, degree n) result.
    """
    n = len(matrix)
    if n == 0:
        return IntPolynomial([1])
    nodes = list(range(n + 1))
    values = []
    for t in nodes:
        a = [[(t if i == j else 0) - matrix[i][j] for j in range(n)] for i in range(n)]
        values.append(bareiss_det(a))

    # Newton's divided differences, exact over Q
    coeffs_newton: list[Fraction] = []
    table = [Fraction(v) for v in values]
    for level in range(n + 1):
        coeffs_newton.append(table[0])
        table = [
            (table[i + 1] - table[i]) / (nodes[i + 1 + level] - nodes[i])
            for i in range(len(table) - 1)
        ]
        if not table:
            break

    # expand the Newton form into monomial coefficients
    poly = [Fraction(0)] * (n + 1)
    basis = [Fraction(1)] + [Fraction(0)] * n  # running prod (x - x_0)...(x - x_{k-1})
    for k, c in enumerate(coeffs_newton):
        for i in range(n + 1):
            poly[i] += c * basis[i]
        if k < n:
            new_basis = [Fraction(0)] * (n + 1)
            for i in range(n + 1):
                if basis[i] == 0:
                    continue
                new_basis[i] -= basis[i] * nodes[k]
                if i + 1 <= n:
                    new_basis[i + 1] += basis[i]
            basis = new_basis

    out = []
    for c in poly:
        if c.denominator != 1:
            raise ArithmeticError("characteristic polynomial interpolation left Q")
        out.append(c.numerator)
    result = IntPolynomial(out)
    assert result.degree == n and result.leading() == 1
    return result
