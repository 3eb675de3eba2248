"""Piecewise-affine degree-one liftings of circle maps.

A Lifting stores one fundamental domain: strictly increasing breakpoints in
[0,1) and the map's values there; between consecutive breakpoints (and across
the wrap to first_breakpoint + 1) the map is affine, and evaluation anywhere
uses F(x+1) = F(x) + 1.  All data are exact rationals.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .arith import ceil_frac, floor_frac, rat_str
from .errors import Degenerate, DepthExceeded, OrderConflict


@dataclass(frozen=True)
class Lifting:
    breakpoints: tuple
    values: tuple

    def __post_init__(self):
        bps = tuple(Fraction(b) for b in self.breakpoints)
        vals = tuple(Fraction(v) for v in self.values)
        if len(bps) != len(vals) or not bps:
            raise ValueError("need matching nonempty breakpoints/values")
        if any(not (0 <= b < 1) for b in bps):
            raise ValueError("breakpoints must lie in [0,1)")
        if any(bps[i] >= bps[i + 1] for i in range(len(bps) - 1)):
            raise ValueError("breakpoints must be strictly increasing")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)

    # -- geometry -------------------------------------------------------------

    def segments(self):
        """Affine pieces covering one period: (xL, xR, vL, vR), wrap included."""
        b, v = self.breakpoints, self.values
        out = []
        for i in range(len(b) - 1):
            out.append((b[i], b[i + 1], v[i], v[i + 1]))
        out.append((b[-1], b[0] + 1, v[-1], v[0] + 1))
        return out

    def slopes(self):
        return [
            (vR - vL) / (xR - xL) if xR != xL else Fraction(0)
            for (xL, xR, vL, vR) in self.segments()
        ]

    def is_nondecreasing(self) -> bool:
        return all(s >= 0 for s in self.slopes())

    def eval(self, x) -> Fraction:
        """Exact F(x) for any rational x, via F(x+1) = F(x) + 1."""
        x = Fraction(x)
        b = self.breakpoints
        k = floor_frac(x - b[0])
        t = x - k  # t in [b0, b0 + 1)
        i = bisect_right(b, t) - 1
        if i == len(b) - 1:
            xL, xR, vL, vR = b[-1], b[0] + 1, self.values[-1], self.values[0] + 1
        else:
            xL, xR, vL, vR = b[i], b[i + 1], self.values[i], self.values[i + 1]
        val = vL if t == xL else vL + (vR - vL) * (t - xL) / (xR - xL)
        return val + k

    def iterate(self, x, k: int) -> Fraction:
        x = Fraction(x)
        for _ in range(k):
            x = self.eval(x)
        return x

    def translate(self, k: int) -> "Lifting":
        """F + k, another lifting of the same circle map."""
        return Lifting(self.breakpoints, tuple(v + k for v in self.values))

    def dual(self) -> "Lifting":
        """The lifting G(y) = -F(-y); swaps lower and upper constructions."""
        pts = []
        for b, v in zip(self.breakpoints, self.values):
            if b == 0:
                pts.append((Fraction(0), -v))
            else:
                pts.append((1 - b, 1 - v))
        pts.sort()
        return Lifting(tuple(p for p, _ in pts), tuple(w for _, w in pts))

    def to_json(self) -> dict:
        return {
            "breakpoints": [rat_str(b) for b in self.breakpoints],
            "values": [rat_str(v) for v in self.values],
        }

    @staticmethod
    def from_json(d: dict) -> "Lifting":
        return Lifting(
            tuple(Fraction(s) for s in d["breakpoints"]),
            tuple(Fraction(s) for s in d["values"]),
        )


@dataclass(frozen=True)
class LiftedOrbit:
    """A twist lifted periodic orbit given on one fundamental domain.

    points: the q orbit points in [0,1), strictly increasing; the labelled
    extension is points[j + q*l] = points[j] + l.  The dynamics is the index
    shift j -> j + shift, so the rotation number is shift/q.
    """

    points: tuple
    shift: int

    def __post_init__(self):
        pts = tuple(Fraction(p) for p in self.points)
        if not pts or any(not (0 <= p < 1) for p in pts):
            raise ValueError("orbit points must lie in [0,1)")
        if any(pts[i] >= pts[i + 1] for i in range(len(pts) - 1)):
            raise ValueError("orbit points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    @property
    def period(self) -> int:
        return len(self.points)

    @property
    def rotation(self) -> Fraction:
        return Fraction(self.shift, self.period)

    def point(self, j: int) -> Fraction:
        """Labelled extension x_j for any integer j."""
        q = self.period
        return self.points[j % q] + (j - j % q) // q

    def image_of(self, j: int) -> Fraction:
        return self.point(j + self.shift)


@dataclass(frozen=True)
class RotationInterval:
    c: Fraction
    d: Fraction

    def __post_init__(self):
        c, d = Fraction(self.c), Fraction(self.d)
        if c > d:
            raise ValueError("rotation interval needs c <= d")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @property
    def length(self) -> Fraction:
        return self.d - self.c

    def to_json(self) -> dict:
        return {"c": rat_str(self.c), "d": rat_str(self.d)}


def build_from_orbits(orbits: Sequence[LiftedOrbit]) -> Lifting:
    """The unique degree-one piecewise-affine lifting interpolating the
    prescribed orbit dynamics at the union of the orbit points."""
    pts: list[tuple[Fraction, Fraction]] = []
    for orbit in orbits:
        for j in range(orbit.period):
            pts.append((orbit.point(j), orbit.image_of(j)))
    pts.sort()
    for (p1, v1), (p2, v2) in zip(pts, pts[1:]):
        if p1 == p2:
            if v1 != v2:
                raise OrderConflict(f"point {rat_str(p1)} prescribed two images")
            raise Degenerate(f"orbit point {rat_str(p1)} duplicated")
    return Lifting(tuple(p for p, _ in pts), tuple(v for _, v in pts))


# ---------------------------------------------------------------------------
# Upper and lower maps
# ---------------------------------------------------------------------------


def lower_map(F: Lifting) -> Lifting:
    """F_l(x) = inf{F(y) : y >= x}, computed exactly.

    Right-to-left sweep of the running minimum over one period, with plateau
    endpoints solved as intersections of affine pieces; the resulting envelope
    is capped at (global minimum + 1) coming from the next period.
    """
    segs = F.segments()
    gmin = min(F.values)
    m = F.values[0] + 1  # min over [b0+1, +inf) pulled back one period
    pieces = []  # (xL, xR, vL, vR) of the envelope, right to left
    for (xL, xR, vL, vR) in reversed(segs):
        if vL <= vR:
            if m >= vR:
                pieces.append((xL, xR, vL, vR))
                m = vL
            elif m <= vL:
                pieces.append((xL, xR, m, m))
            else:
                # rising piece crosses the running level m
                xc = xL + (m - vL) * (xR - xL) / (vR - vL)
                pieces.append((xc, xR, m, m))
                pieces.append((xL, xc, vL, m))
                m = vL
        else:
            c = min(vR, m)
            pieces.append((xL, xR, c, c))
            m = c
    pieces.reverse()

    cap = gmin + 1
    capped = []
    for (xL, xR, vL, vR) in pieces:
        if vL >= cap:
            capped.append((xL, xR, cap, cap))
        elif vR <= cap:
            capped.append((xL, xR, vL, vR))
        else:
            xc = xL + (cap - vL) * (xR - xL) / (vR - vL)
            capped.append((xL, xc, vL, cap))
            capped.append((xc, xR, cap, cap))

    bps, vals = [], []
    for (xL, _, vL, _) in capped:
        if xL >= 1:
            xL, vL = xL - 1, vL - 1
        if xL in bps:
            continue
        bps.append(xL)
        vals.append(vL)
    order = sorted(range(len(bps)), key=lambda i: bps[i])
    return _simplify(Lifting(tuple(bps[i] for i in order), tuple(vals[i] for i in order)))


def _simplify(F: Lifting) -> Lifting:
    """Drop breakpoints interior to a single affine piece."""
    if len(F.breakpoints) <= 2:
        return F
    segs = F.segments()
    slopes = [(vR - vL) / (xR - xL) for (xL, xR, vL, vR) in segs]
    keep_b, keep_v = [], []
    n = len(F.breakpoints)
    for i in range(n):
        prev_slope = slopes[(i - 1) % n]
        if prev_slope != slopes[i]:
            keep_b.append(F.breakpoints[i])
            keep_v.append(F.values[i])
    if not keep_b:  # globally affine (rigid translation)
        return Lifting((F.breakpoints[0],), (F.values[0],))
    return Lifting(tuple(keep_b), tuple(keep_v))


def upper_map(F: Lifting) -> Lifting:
    """F_u(x) = sup{F(y) : y <= x} via the duality F_u = dual(lower(dual(F)))."""
    return lower_map(F.dual()).dual()


def upper_lower(F: Lifting) -> tuple[Lifting, Lifting]:
    return lower_map(F), upper_map(F)


# ---------------------------------------------------------------------------
# Rotation numbers of monotone liftings
# ---------------------------------------------------------------------------

DEFAULT_DENOMINATOR_BOUND = 10**6
_PLATEAU_ITER_CAP = 20000


def _displacement_extrema(F: Lifting) -> tuple[Fraction, Fraction]:
    """Exact min/max of F(x) - x over one period (attained at breakpoints of F
    or at the wrap endpoint, since the displacement is affine between them)."""
    disps = [v - b for b, v in zip(F.breakpoints, F.values)]
    return min(disps), max(disps)


def compose(A: Lifting, B: Lifting) -> Lifting:
    """The lifting x -> B(A(x)), exact; both arguments degree one."""
    new_bps = set(A.breakpoints)
    for (xL, xR, vL, vR) in A.segments():
        lo, hi = min(vL, vR), max(vL, vR)
        if vL == vR:
            continue
        for c in B.breakpoints:
            k_min = -floor_frac(c - lo)  # smallest k with c + k >= lo
            k = k_min
            while c + k <= hi:
                y = c + k
                if lo < y < hi:
                    x = xL + (y - vL) * (xR - xL) / (vR - vL)
                    if 0 <= x < 1:
                        new_bps.add(x)
                    else:
                        new_bps.add(x - floor_frac(x))
                k += 1
    bps = sorted(new_bps)
    vals = [B.eval(A.eval(x)) for x in bps]
    return Lifting(tuple(bps), tuple(vals))


def _power(F: Lifting, q: int) -> Lifting:
    H = F
    for _ in range(q - 1):
        H = compose(H, F)
    return H


def _rotation_via_plateau_orbit(F: Lifting, cap: int) -> Fraction | None:
    """Iterate a plateau value exactly; a repeat mod 1 exhibits a periodic
    orbit whose rotation number is the rotation number of the monotone map."""
    plateau_value = None
    for (xL, xR, vL, vR) in F.segments():
        if vL == vR:
            plateau_value = vL
            break
    if plateau_value is None:
        return None
    z = plateau_value
    seen: dict[Fraction, tuple[int, Fraction]] = {}
    for k in range(cap):
        r = z - floor_frac(z)
        if r in seen:
            j, zj = seen[r]
            L = k - j
            t = z - zj
            assert t.denominator == 1
            return Fraction(t.numerator, L)
        seen[r] = (k, z)
        z = F.eval(z)
    return None


def rotation_number_monotone(
    F: Lifting, denominator_bound: int = DEFAULT_DENOMINATOR_BOUND
) -> Fraction:
    """Exact rotation number of a nondecreasing lifting.

    Fast path: the exactly-periodic orbit of a plateau value.  General path:
    Stern-Brocot bisection where each mediant p/q is tested on the exact
    piecewise-affine composition F^q (a sign change of F^q(x) - x - p confirms
    equality; otherwise the strict side is certified by the displacement
    extrema of the full composition).  DepthExceeded signals denominators past
    the bound, i.e. a plausibly irrational rotation number.
    """
    if not F.is_nondecreasing():
        raise ValueError("rotation_number_monotone needs a nondecreasing lifting")

    rho = _rotation_via_plateau_orbit(F, _PLATEAU_ITER_CAP)
    if rho is not None:
        return rho

    # rho lies in [min displacement, max displacement]; an integer p in that
    # range certifies a fixed point of F - p, hence rho = p exactly.
    lo_d, hi_d = _displacement_extrema(F)
    for p in range(floor_frac(lo_d), ceil_frac(hi_d) + 1):
        if lo_d <= p <= hi_d:
            return Fraction(p)
    k = floor_frac(lo_d)  # both extrema in (k, k+1), so rho is too

    pl, ql = k, 1
    pr, qr = k + 1, 1
    while True:
        p, q = pl + pr, ql + qr
        if q > denominator_bound:
            raise DepthExceeded(f"denominator bound {denominator_bound} passed")
        H = _power(F, q)
        dlo, dhi = _displacement_extrema(H)
        if dlo <= p <= dhi:
            return Fraction(p, q)
        if dlo > p:
            pl, ql = p, q  # rho > p/q
        else:
            pr, qr = p, q  # rho < p/q


def rotation_interval(
    F: Lifting, denominator_bound: int = DEFAULT_DENOMINATOR_BOUND
) -> RotationInterval:
    """Rot(F) = [rho(F_l), rho(F_u)], both computed exactly."""
    Fl, Fu = upper_lower(F)
    c = rotation_number_monotone(Fl, denominator_bound)
    d = rotation_number_monotone(Fu, denominator_bound)
    return RotationInterval(c, d)
