"""The three example families of degree-one circle maps and their verifiers.

Each constructor lays the two prescribed twist orbits at equally spaced
rationals j/N in the intertwining order the construction fixes; periods,
rotation intervals, Markov graphs, transition polynomials and transitivity
certificates depend only on that order, so equal spacing loses nothing and
keeps every computation exact.

Closed-form data carried by an instance (expected rotation interval, period
set, transition-polynomial and its unit-circle cofactor, cofiniteness values)
are the quantities the verifier checks against the constructed system.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .arith import CertifiedRoot, IntPolynomial, largest_root_above, rat_str
from .cofiniteness import CofinitenessReport, report as cofin_report
from .errors import BadParameter, NoRootAbove
from .lifting import Lifting, LiftedOrbit, RotationInterval, build_from_orbits, rotation_interval
from .markov import (
    MarkovSystem,
    build_markov_system,
    entropy as markov_entropy,
    markov_char_poly,
    transitivity_certificate,
)
from .oracle import periods_up_to
from .periods import PeriodSet, per_from_rotation

DEFAULT_POLY_TOL = Fraction(1, 10**12)


def poly_from_terms(terms: dict[int, int]) -> IntPolynomial:
    deg = max(terms)
    coeffs = [0] * (deg + 1)
    for e, c in terms.items():
        coeffs[e] += c
    return IntPolynomial(coeffs)


# ---------------------------------------------------------------------------
# Closed-form transition polynomials
# ---------------------------------------------------------------------------


def dream_poly(n: int) -> IntPolynomial:
    """(x^(4n-2) - 1)(x - 1) - 2 x^n (x^(2n-1) - 1)."""
    return poly_from_terms({4 * n - 1: 1, 4 * n - 2: -1, 3 * n - 1: -2, n: 2, 1: -1, 0: 1})


def _persistent_exponents(n: int) -> tuple[int, int, int]:
    """Middle-term exponents of the persistent family polynomial.

    The chain-entry offsets differ between n = 4k-1 (entries at I_d, I_2d,
    I_3d with d = (n-1)/2, giving exponents 3d+2, 2d+2, d+2) and n = 4k+1
    (entries at I_(2n-ld) with d = (n+1)/2, giving 3d, 2d, d).
    """
    if n % 4 == 3:
        d = (n - 1) // 2
        return (d + 2, 2 * d + 2, 3 * d + 2)
    d = (n + 1) // 2
    return (d, 2 * d, 3 * d)


def persistent_poly(n: int, m: int = 0) -> IntPolynomial:
    """x^2n (x^2 - 1) - 2x^e3 - 2x^e2 - 2x^e1 - c x^2 - c, with c = 1 for the
    circle family and c = m for the graph extension."""
    c = m if m else 1
    e1, e2, e3 = _persistent_exponents(n)
    terms = {2 * n + 2: 1, 2 * n: -1}
    for e in (e1, e2, e3):
        terms[e] = terms.get(e, 0) - 2
    terms[2] = terms.get(2, 0) - c
    terms[0] = terms.get(0, 0) - c
    return poly_from_terms(terms)


def montevideo_poly(n: int) -> IntPolynomial:
    q = 2 * n * n
    k2 = poly_from_terms(
        {4 * n: 1, 3 * n: -2, 2 * n + 1: -1, 2 * n: -2, 2 * n - 1: -3, n: -2, 0: 1}
    )
    k1 = poly_from_terms({2 * n: 4, n + 1: 2, n: 4, n - 1: 2, 0: 4})
    k0 = poly_from_terms({4 * n: 1, 2 * n - 1: -2, 0: 1})
    x2q_plus_1 = poly_from_terms({2 * q: 1, 0: 1})
    return k2 * x2q_plus_1 + k1.shift(q + n) - 2 * k0


def dream_ext_poly(n: int, m: int) -> IntPolynomial:
    """(x^(4n-2) - m)(x-1) - x^(2n-1)(2x^n - x - 1) - m x^n (x^(n-1)(x+1) - 2)."""
    return poly_from_terms(
        {
            4 * n - 1: 1,
            4 * n - 2: -1,
            3 * n - 1: -2,
            2 * n: 1 - m,
            2 * n - 1: 1 - m,
            n: 2 * m,
            1: -m,
            0: m,
        }
    )


def persistent_ext_poly(n: int, m: int) -> IntPolynomial:
    return persistent_poly(n, m=m)


def montevideo_ext_poly(n: int, m: int) -> IntPolynomial:
    q = 2 * n * n
    k2 = poly_from_terms(
        {
            4 * n: 1,
            3 * n: -(m + 1),
            2 * n + 1: -1,
            2 * n: -(m + 1),
            2 * n - 1: -(m + 2),
            n: -(m + 1),
            0: 1,
        }
    )
    k1 = poly_from_terms(
        {
            4 * n: m - 1,
            3 * n: 2 * (m + 1),
            2 * n + 1: 2,
            2 * n: 2 * (m + 1),
            2 * n - 1: 2,
            n: 2 * (m + 1),
            0: m - 1,
        }
    )
    k0 = poly_from_terms({4 * n: 1, 2 * n - 1: -2, 0: 1})
    x2q_plus_1 = poly_from_terms({2 * q: 1, 0: 1})
    return k2 * x2q_plus_1 + k1.shift(q) - (m + 1) * k0


# ---------------------------------------------------------------------------
# Closed-form period sets and cofiniteness expectations
# ---------------------------------------------------------------------------


def persistent_k(n: int) -> int:
    """k with n = 4k+1 or n = 4k-1."""
    return (n + 1) // 4 if n % 4 == 3 else (n - 1) // 4


def dream_per(n: int) -> PeriodSet:
    return PeriodSet.successors(n)


def persistent_per(n: int) -> PeriodSet:
    k = persistent_k(n)
    odds = set(range(2 * k + 1, n - 1, 2))
    return PeriodSet.from_elements({2} | odds, tail_from=n)


def montevideo_nu(n: int) -> int:
    return n if n % 2 == 0 else n - 1


def montevideo_per(n: int) -> PeriodSet:
    nu = montevideo_nu(n)
    mid = set()
    for t in range(2, nu):
        lo = -(t // 2) + (1 if t % 2 == 0 else 0)
        for k in range(lo, t // 2 + 1):
            mid.add(t * n + k)
    tail = n * nu + 1 - nu // 2
    return PeriodSet.from_elements({n} | mid, tail_from=tail)


# ---------------------------------------------------------------------------
# Instances
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtensionSpec:
    """Designated classes for the graph extension: the detour class (its
    interval is replaced by the L's), the excised class (replaced by the U's)
    and the return class every U covers."""

    detour: int
    excised: int
    ret: int
    ext_poly: Callable[[int], IntPolynomial]
    cofactor: IntPolynomial
    min_n: int


@dataclass(frozen=True)
class FamilyInstance:
    name: str
    n: int
    lifting: Lifting
    markov: MarkovSystem
    expected_rot: RotationInterval
    expected_per: PeriodSet
    expected_poly: IntPolynomial
    poly_cofactor: IntPolynomial  # char * cofactor == expected_poly, exactly
    expected_classes: int
    cofin_expectations: dict
    x_positions: tuple
    y_positions: tuple
    extension: Optional[ExtensionSpec]

    def class_index(self, a: Fraction, b: Fraction) -> int:
        for i, (ca, cb) in enumerate(self.markov.classes):
            if ca == a and cb == b:
                return i
        raise KeyError(f"no class [{rat_str(a)},{rat_str(b)}]")


def _positions(order: list) -> dict:
    N = len(order)
    return {lab: Fraction(j, N) for j, lab in enumerate(order)}


def _instance(
    name,
    n,
    order,
    x_count,
    y_count,
    x_shift,
    y_shift,
    expected_rot,
    expected_per,
    expected_poly,
    poly_cofactor,
    cofin,
    ext_builder,
) -> FamilyInstance:
    pos = _positions(order)
    xs = tuple(pos[("x", i)] for i in range(x_count))
    ys = tuple(pos[("y", i)] for i in range(y_count))
    assert all(xs[i] < xs[i + 1] for i in range(x_count - 1))
    assert all(ys[i] < ys[i + 1] for i in range(y_count - 1))
    F = build_from_orbits(
        [LiftedOrbit(points=xs, shift=x_shift), LiftedOrbit(points=ys, shift=y_shift)]
    )
    M = build_markov_system(F)
    assert len(M.partition) == len(order), "orbit union was not forward closed"
    inst = FamilyInstance(
        name=name,
        n=n,
        lifting=F,
        markov=M,
        expected_rot=expected_rot,
        expected_per=expected_per,
        expected_poly=expected_poly,
        poly_cofactor=poly_cofactor,
        expected_classes=len(order),
        cofin_expectations=cofin,
        x_positions=xs,
        y_positions=ys,
        extension=None,
    )
    ext = ext_builder(inst) if ext_builder else None
    if ext is not None:
        object.__setattr__(inst, "extension", ext)
    return inst


def dream(n: int) -> FamilyInstance:
    """Two twist orbits of period 2n-1 with rotation numbers 1/(2n-1) and
    2/(2n-1), intertwined x_0..x_(n-1), y_0, then x_(n+j) < y_(2j+1) < y_(2j+2)."""
    if n < 3:
        raise BadParameter("dream family needs n >= 3")
    p = 2 * n - 1
    order = [("x", i) for i in range(n)] + [("y", 0)]
    for j in range(n - 1):
        order += [("x", n + j), ("y", 2 * j + 1), ("y", 2 * j + 2)]

    def ext_builder(inst: FamilyInstance):
        if n < 5:
            return None
        y = inst.y_positions
        return ExtensionSpec(
            detour=inst.class_index(y[3], y[4]),
            excised=inst.class_index(y[5], y[6]),
            ret=inst.class_index(y[7], y[8]),
            ext_poly=lambda m: dream_ext_poly(n, m),
            cofactor=IntPolynomial([-1, 1]),
            min_n=5,
        )

    return _instance(
        "dream",
        n,
        order,
        p,
        p,
        1,
        2,
        RotationInterval(Fraction(1, p), Fraction(2, p)),
        dream_per(n),
        dream_poly(n),
        IntPolynomial([-1, 1]),  # char * (x - 1) == T_n
        {"sbc": n, "bc": n},
        ext_builder,
    )


def persistent(n: int) -> FamilyInstance:
    """Orbit of period 2 (rotation 1/2) intertwined with an orbit of period 2n
    (rotation (n+2)/2n): x_0 < y_0..y_(n-3) < x_1 < y_(n-2)..y_(2n-1)."""
    if n < 3 or n % 2 == 0:
        raise BadParameter("persistent family needs odd n >= 3")
    order = [("x", 0)] + [("y", i) for i in range(n - 2)]
    order += [("x", 1)] + [("y", i) for i in range(n - 2, 2 * n)]
    k = persistent_k(n)

    def ext_builder(inst: FamilyInstance):
        if n < 7:
            return None
        # chain classes I_1, I_2, I_3 with I_i = [y_(n+1+i(n+2) mod 2n), +1]
        idx = []
        for i in (1, 2, 3):
            a = (n + 1 + i * (n + 2)) % (2 * n)
            idx.append(inst.class_index(inst.y_positions[a], inst.y_positions[a + 1]))
        return ExtensionSpec(
            detour=idx[0],
            excised=idx[1],
            ret=idx[2],
            ext_poly=lambda m: persistent_ext_poly(n, m),
            cofactor=IntPolynomial([1]),
            min_n=7,
        )

    return _instance(
        "persistent",
        n,
        order,
        2,
        2 * n,
        1,
        n + 2,
        RotationInterval(Fraction(1, 2), Fraction(n + 2, 2 * n)),
        persistent_per(n),
        persistent_poly(n),
        IntPolynomial([1]),  # char == T_n exactly
        {
            "sbc": n if n >= 5 else 2,
            "bc_lo": 2 * k + 1,
            "bc_hi": n,
            "bc_exists": n >= 5,
        },
        ext_builder,
    )


def montevideo(n: int) -> FamilyInstance:
    """Both orbits of period q = 2n^2, rotations (2n-1)/q and (2n+1)/q,
    intertwined in p-blocks of Q_n against r-blocks of P_n."""
    if n < 3:
        raise BadParameter("montevideo family needs n >= 3")
    p, r, q = 2 * n - 1, 2 * n + 1, 2 * n * n
    order = [("x", i) for i in range(p + n)]
    order += [("y", j) for j in range(n + 1)]
    for blk in range(1, n):
        order += [("x", blk * p + n + t) for t in range(p)]
        order += [("y", (blk - 1) * r + n + 1 + t) for t in range(r)]
    assert len(order) == 2 * q
    nu = montevideo_nu(n)

    def ext_builder(inst: FamilyInstance):
        if n < 4:
            return None
        y, x = inst.y_positions, inst.x_positions
        detour = inst.class_index(y[(n - 3) * r + n], x[(n - 2) * p + n])
        excised = inst.class_index(y[(n - 2) * r + n], x[(n - 1) * p + n])
        ret = inst.class_index(y[q - 1], x[0] + 1)  # the wrap class [y_(q-1), x_q]
        cof = poly_from_terms({2 * n - 1: 1, 0: -1}) * poly_from_terms({2 * n + 1: 1, 0: -1})
        return ExtensionSpec(
            detour=detour,
            excised=excised,
            ret=ret,
            ext_poly=lambda m: montevideo_ext_poly(n, m),
            cofactor=cof,
            min_n=4,
        )

    cof = poly_from_terms({2 * n - 1: 1, 0: -1}) * poly_from_terms({2 * n + 1: 1, 0: -1})
    return _instance(
        "montevideo",
        n,
        order,
        q,
        q,
        p,
        r,
        RotationInterval(Fraction(p, q), Fraction(r, q)),
        montevideo_per(n),
        montevideo_poly(n),
        cof,  # char * (x^(2n-1)-1)(x^(2n+1)-1) == T_n
        {
            "sbc": n * nu + 1 - nu // 2,
            "bc_lo": n,
            "bc_hi": n * nu - 1 - nu // 2,
            "bc_upper_bound_expected": n >= 6,
        },
        ext_builder,
    )


FAMILIES = {"dream": dream, "persistent": persistent, "montevideo": montevideo}


def make(name: str, n: int) -> FamilyInstance:
    if name not in FAMILIES:
        raise BadParameter(f"unknown family {name!r}")
    return FAMILIES[name](n)


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


@dataclass
class VerificationReport:
    name: str
    n: int
    rot_ok: bool
    per_ok: bool
    poly_exact: bool
    poly_root_ok: bool
    transitive_ok: bool
    oracle_ok: bool
    classes_ok: bool
    cofin: CofinitenessReport
    entropy: CertifiedRoot
    theorem_bound_flags: dict  # literal holds/fails of the stated bounds
    expected_bound_flags: dict  # what the documented discrepancies predict
    computed_rot: RotationInterval
    computed_per: PeriodSet
    endpoint_types: dict

    @property
    def bounds_as_documented(self) -> bool:
        return self.theorem_bound_flags == self.expected_bound_flags

    @property
    def all_green(self) -> bool:
        """Green means every exact check passed and every theorem bound came
        out exactly as documented (including the known small-n failures)."""
        return (
            self.rot_ok
            and self.per_ok
            and self.poly_exact
            and self.poly_root_ok
            and self.transitive_ok
            and self.oracle_ok
            and self.classes_ok
            and self.bounds_as_documented
        )

    @property
    def strict_green(self) -> bool:
        """Strict reading: every literal theorem bound must hold."""
        return (
            self.all_green
            and all(self.theorem_bound_flags.values())
        )

    def to_json(self) -> dict:
        return {
            "family": self.name,
            "n": self.n,
            "rot_ok": self.rot_ok,
            "per_ok": self.per_ok,
            "poly_exact": self.poly_exact,
            "poly_root_ok": self.poly_root_ok,
            "transitive_ok": self.transitive_ok,
            "oracle_ok": self.oracle_ok,
            "classes_ok": self.classes_ok,
            "cofiniteness": self.cofin.to_json(),
            "entropy_bracket": self.entropy.to_json(),
            "entropy_log": self.entropy.log_float(),
            "theorem_bound_flags": dict(sorted(self.theorem_bound_flags.items())),
            "bounds_as_documented": self.bounds_as_documented,
            "rotation_interval": self.computed_rot.to_json(),
            "periods": self.computed_per.to_json(),
            "endpoint_types": {
                e: {
                    "sho": (t.sho.value if t.sho is not None else None),
                    "bounded_evidence": t.bounded_evidence,
                    "ambiguous_two_infinity": t.ambiguous_two_infinity,
                }
                for e, t in sorted(self.endpoint_types.items())
            },
            "all_green": self.all_green,
            "strict_green": self.strict_green,
        }


def verify(inst: FamilyInstance, tol: Fraction = DEFAULT_POLY_TOL, run_oracle: bool = True) -> VerificationReport:
    """Run every check of the family's stated data against the built system."""
    F, M = inst.lifting, inst.markov
    rot = rotation_interval(F)
    rot_ok = rot.c == inst.expected_rot.c and rot.d == inst.expected_rot.d

    per = per_from_rotation(F, M)
    per_ok = per == inst.expected_per

    char = markov_char_poly(M)
    poly_exact = char * inst.poly_cofactor == inst.expected_poly
    sigma = markov_entropy(M, tol)
    try:
        expected_root = largest_root_above(inst.expected_poly, Fraction(1), tol)
        poly_root_ok = sigma.overlaps(expected_root, slack=tol)
    except NoRootAbove:
        poly_root_ok = False

    cert = transitivity_certificate(M)
    classes_ok = M.size == inst.expected_classes

    creport = cofin_report(per)
    flags = {}
    expected_flags = {}
    exp = inst.cofin_expectations
    if inst.name == "dream":
        flags["sbc_equals_n"] = creport.sbc == exp["sbc"]
        flags["bc_equals_n"] = creport.bc == exp["bc"]
        expected_flags = {"sbc_equals_n": True, "bc_equals_n": True}
    elif inst.name == "persistent":
        flags["sbc_matches"] = creport.sbc == exp["sbc"]
        flags["bc_exists"] = creport.bc is not None
        expected_flags = {"sbc_matches": True, "bc_exists": exp["bc_exists"]}
        if creport.bc is not None:
            flags["bc_in_bounds"] = exp["bc_lo"] <= creport.bc <= exp["bc_hi"]
            expected_flags["bc_in_bounds"] = True
    else:
        flags["sbc_matches"] = creport.sbc == exp["sbc"]
        flags["bc_exists"] = creport.bc is not None
        expected_flags = {"sbc_matches": True, "bc_exists": True}
        if creport.bc is not None:
            flags["bc_lower_bound"] = exp["bc_lo"] <= creport.bc
            # literal value of the theorem's upper bound; fails for n <= 5
            flags["bc_upper_bound"] = creport.bc <= exp["bc_hi"]
            expected_flags["bc_lower_bound"] = True
            expected_flags["bc_upper_bound"] = exp["bc_upper_bound_expected"]

    oracle_ok = True
    endpoint_types = {}
    if run_oracle:
        from .periods import infer_sho_type

        P = creport.sbc + 3
        oracle_result = periods_up_to(F, M, P)
        oracle_ok = oracle_result.periods() == inst.expected_per.up_to(P)
        # bounded-evidence Sharkovskii type of each endpoint: observed k = m/s
        for e in (rot.c, rot.d):
            s = e.denominator
            ks = {
                m // s
                for (m, rho) in oracle_result.period_rotations()
                if rho == e and m % s == 0
            }
            endpoint_types[rat_str(e)] = infer_sho_type(ks, bound=P // s)

    return VerificationReport(
        name=inst.name,
        n=inst.n,
        rot_ok=rot_ok,
        per_ok=per_ok,
        poly_exact=poly_exact,
        poly_root_ok=poly_root_ok,
        transitive_ok=cert["transitive"],
        oracle_ok=oracle_ok,
        classes_ok=classes_ok,
        cofin=creport,
        entropy=sigma,
        theorem_bound_flags=flags,
        expected_bound_flags=expected_flags,
        computed_rot=rot,
        computed_per=per,
        endpoint_types=endpoint_types,
    )


# ---------------------------------------------------------------------------
# Main-theorem desk scan
# ---------------------------------------------------------------------------


@dataclass
class ScanRow:
    n: int
    rot: RotationInterval
    len_rot: Fraction
    entropy: CertifiedRoot
    sbc: int
    bc: Optional[int]
    flags: dict

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "rot_c": rat_str(self.rot.c),
            "rot_d": rat_str(self.rot.d),
            "len_rot": rat_str(self.len_rot),
            "entropy_lo": rat_str(self.entropy.lower),
            "entropy_hi": rat_str(self.entropy.upper),
            "sbc": self.sbc,
            "bc": self.bc,
            "flags": dict(sorted(self.flags.items())),
        }


@dataclass
class ScanResult:
    family: str
    rows: list
    len_strictly_decreasing: bool
    entropy_strictly_decreasing: bool
    bc_nondecreasing: bool
    bc_matches_closed_form: bool

    @property
    def all_green(self) -> bool:
        return (
            self.len_strictly_decreasing
            and self.entropy_strictly_decreasing
            and self.bc_nondecreasing
            and self.bc_matches_closed_form
        )

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "rows": [r.to_json() for r in self.rows],
            "len_strictly_decreasing": self.len_strictly_decreasing,
            "entropy_strictly_decreasing": self.entropy_strictly_decreasing,
            "bc_nondecreasing": self.bc_nondecreasing,
            "bc_matches_closed_form": self.bc_matches_closed_form,
            "all_green": self.all_green,
        }


def scan_values(family: str, n_from: int, n_to: int) -> list[int]:
    if family == "persistent":
        start = n_from if n_from % 2 == 1 else n_from + 1
        return list(range(start, n_to + 1, 2))
    return list(range(n_from, n_to + 1))


def mts1_scan(family: str, n_from: int, n_to: int, tol: Fraction = Fraction(1, 10**9)) -> ScanResult:
    """Desk-scale scan of the Main Theorem quantities: exact rotation-interval
    lengths, certified entropy brackets and literal boundary-of-cofiniteness
    values along the family, with the monotonicity assertions recorded."""
    rows = []
    for n in scan_values(family, n_from, n_to):
        inst = make(family, n)
        rot = rotation_interval(inst.lifting)
        per = per_from_rotation(inst.lifting, inst.markov)
        crep = cofin_report(per)
        sigma = markov_entropy(inst.markov, tol)
        flags = {"per_matches_closed_form": per == inst.expected_per}
        if family == "dream":
            flags["bc_closed_form"] = crep.bc == n
        elif family == "persistent":
            k = persistent_k(n)
            flags["bc_closed_form"] = crep.bc is not None and 2 * k + 1 <= crep.bc <= n
        else:
            nu = montevideo_nu(n)
            flags["bc_closed_form"] = crep.bc is not None and crep.bc >= n
            flags["bc_upper_bound_holds"] = (
                crep.bc is not None and crep.bc <= n * nu - 1 - nu // 2
            )
        rows.append(
            ScanRow(
                n=n,
                rot=rot,
                len_rot=rot.length,
                entropy=sigma,
                sbc=crep.sbc,
                bc=crep.bc,
                flags=flags,
            )
        )
    len_dec = all(rows[i].len_rot > rows[i + 1].len_rot for i in range(len(rows) - 1))
    ent_dec = all(
        rows[i].entropy.lower > rows[i + 1].entropy.upper for i in range(len(rows) - 1)
    )
    bcs = [r.bc for r in rows if r.bc is not None]
    bc_nondec = all(bcs[i] <= bcs[i + 1] for i in range(len(bcs) - 1))
    bc_cf = all(r.flags.get("bc_closed_form", False) for r in rows)
    return ScanResult(
        family=family,
        rows=rows,
        len_strictly_decreasing=len_dec,
        entropy_strictly_decreasing=ent_dec,
        bc_nondecreasing=bc_nondec,
        bc_matches_closed_form=bc_cf,
    )
