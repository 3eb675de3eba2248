from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circledyn.errors import Degenerate, DepthExceeded
from circledyn.families import dream, montevideo, persistent
from circledyn.lifting import (
    LiftedOrbit,
    Lifting,
    build_from_orbits,
    compose,
    lower_map,
    rotation_interval,
    rotation_number_monotone,
    upper_lower,
    upper_map,
)

F2 = Fraction

rationals = st.fractions(min_value=-3, max_value=3, max_denominator=60)


def rigid(rho) -> Lifting:
    return Lifting((F2(0),), (F2(rho),))


def sample_lifting() -> Lifting:
    # a non-monotone degree-one map with two laps
    return Lifting(
        (F2(0), F2(1, 4), F2(1, 2), F2(3, 4)),
        (F2(1, 5), F2(9, 10), F2(2, 5), F2(11, 10)),
    )


class TestEval:
    @given(x=rationals)
    def test_degree_one_identity(self, x):
        F = sample_lifting()
        assert F.eval(x + 1) == F.eval(x) + 1

    def test_rigid_rotation_iterate(self):
        F = rigid(F2(1, 2))
        assert F.iterate(F2(0), 2) == 1

    def test_breakpoint_values(self):
        F = sample_lifting()
        for b, v in zip(F.breakpoints, F.values):
            assert F.eval(b) == v

    def test_translate(self):
        F = sample_lifting()
        assert F.translate(3).eval(F2(1, 7)) == F.eval(F2(1, 7)) + 3


class TestBuildFromOrbits:
    def test_single_fixed_orbit_gives_translation(self):
        F = build_from_orbits([LiftedOrbit((F2(0),), shift=2)])
        assert F.eval(F2(1, 3)) == F2(1, 3) + 2

    def test_duplicate_point_degenerate(self):
        orb = LiftedOrbit((F2(0), F2(1, 2)), shift=1)
        with pytest.raises(Degenerate):
            build_from_orbits([orb, orb])

    def test_conflicting_images(self):
        from circledyn.errors import OrderConflict

        with pytest.raises(OrderConflict):
            build_from_orbits(
                [LiftedOrbit((F2(0),), shift=1), LiftedOrbit((F2(0), F2(1, 2)), shift=1)]
            )

    def test_dream_breakpoint_count(self):
        inst = dream(3)
        assert len(inst.lifting.breakpoints) == 10

    def test_persistent_n7_images(self):
        inst = persistent(7)
        assert len(inst.lifting.breakpoints) == 16
        x, y = inst.x_positions, inst.y_positions
        assert inst.lifting.eval(x[0]) == x[1]
        assert inst.lifting.eval(y[0]) == y[9]  # F(y_0) = y_(n+2)

    @pytest.mark.parametrize("name,n", [("dream", 4), ("persistent", 5), ("montevideo", 3)])
    def test_twist_orbit_advance(self, name, n):
        # iterating any orbit point q times advances it by exactly p
        from circledyn.families import make

        inst = make(name, n)
        for pts, shift in (
            (inst.x_positions, None),
            (inst.y_positions, None),
        ):
            q = len(pts)
            x0 = pts[0]
            gain = inst.lifting.iterate(x0, q) - x0
            assert gain.denominator == 1

    @given(data=st.data())
    def test_random_twist_orbit_advance(self, data):
        # any single twist orbit: iterating an orbit point q times advances
        # it by exactly p = shift
        q = data.draw(st.integers(min_value=1, max_value=7))
        shift = data.draw(st.integers(min_value=-6, max_value=6))
        numerators = data.draw(
            st.lists(st.integers(min_value=0, max_value=95), min_size=q, max_size=q, unique=True)
        )
        pts = tuple(sorted(F2(v, 97) for v in numerators))
        F = build_from_orbits([LiftedOrbit(pts, shift=shift)])
        for x0 in pts:
            assert F.iterate(x0, q) == x0 + shift

    def test_dream_orbit_rotations(self):
        inst = dream(3)
        F = inst.lifting
        for x0 in inst.x_positions:  # rotation 1/5: F^5(x) = x + 1
            assert F.iterate(x0, 5) == x0 + 1
        for y0 in inst.y_positions:  # rotation 2/5: F^5(y) = y + 2
            assert F.iterate(y0, 5) == y0 + 2


class TestUpperLower:
    def test_monotone_map_is_its_own_envelope(self):
        F = rigid(F2(2, 7))
        Fl, Fu = upper_lower(F)
        for x in (F2(0), F2(1, 3), F2(5, 6)):
            assert Fl.eval(x) == F.eval(x) == Fu.eval(x)

    @pytest.mark.parametrize("name,n", [("dream", 3), ("persistent", 5), ("montevideo", 3)])
    def test_envelopes_sandwich(self, name, n):
        from circledyn.families import make

        F = make(name, n).lifting
        Fl, Fu = upper_lower(F)
        assert Fl.is_nondecreasing() and Fu.is_nondecreasing()
        probes = list(F.breakpoints) + [F2(1, 1000), F2(17, 37), F2(9, 11)]
        for x in probes:
            assert Fl.eval(x) <= F.eval(x) <= Fu.eval(x)

    def test_persistent_lower_plateau(self):
        # (F_5)_l has a plateau at height x_1 + 1 on [u_l, 1]
        inst = persistent(5)
        Fl = lower_map(inst.lifting)
        x1 = inst.x_positions[1]
        assert Fl.eval(F2(999, 1000)) == x1 + 1
        slopes = Fl.slopes()
        assert any(s == 0 for s in slopes)

    def test_persistent_upper_plateau(self):
        # (F_5)_u has a plateau at height y_(n+1) near 0
        inst = persistent(5)
        Fu = upper_map(inst.lifting)
        y = inst.y_positions
        yn1 = y[(5 + 1) % 10] + (5 + 1) // 10  # y_6 lifted
        assert Fu.eval(F2(1, 1000)) == yn1

    def test_envelope_of_envelope_is_itself(self):
        F = sample_lifting()
        Fl = lower_map(F)
        assert lower_map(Fl).to_json() == Fl.to_json()


class TestRotationNumbers:
    def test_rigid(self):
        assert rotation_number_monotone(rigid(F2(3, 7))) == F2(3, 7)
        assert rotation_number_monotone(rigid(F2(-2, 5))) == F2(-2, 5)
        assert rotation_number_monotone(rigid(F2(2))) == 2

    def test_translation_invariance(self):
        F = lower_map(sample_lifting())
        base = rotation_number_monotone(F)
        assert rotation_number_monotone(F.translate(3)) == base + 3

    def test_requires_monotone(self):
        with pytest.raises(ValueError):
            rotation_number_monotone(sample_lifting())

    def test_depth_exceeded_signal(self):
        F = rigid(F2(355, 113000))
        with pytest.raises(DepthExceeded):
            rotation_number_monotone(F, denominator_bound=100)

    def test_dream_lower(self):
        inst = dream(3)
        Fl = lower_map(inst.lifting)
        assert rotation_number_monotone(Fl) == F2(1, 5)

    def test_montevideo_upper(self):
        inst = montevideo(3)
        Fu = upper_map(inst.lifting)
        assert rotation_number_monotone(Fu) == F2(7, 18)

    def test_compose_is_exact(self):
        F = lower_map(sample_lifting())
        H = compose(F, F)
        for x in (F2(0), F2(1, 9), F2(3, 5), F2(6, 7)):
            assert H.eval(x) == F.eval(F.eval(x))


class TestRotationInterval:
    def test_rigid_degenerate(self):
        r = rotation_interval(rigid(F2(1, 2)))
        assert r.c == r.d == F2(1, 2)

    @pytest.mark.parametrize(
        "name,n,expect",
        [
            ("persistent", 5, (F2(1, 2), F2(7, 10))),
            ("dream", 4, (F2(1, 7), F2(2, 7))),
            ("montevideo", 3, (F2(5, 18), F2(7, 18))),
        ],
    )
    def test_family_intervals(self, name, n, expect):
        from circledyn.families import make

        r = rotation_interval(make(name, n).lifting)
        assert (r.c, r.d) == expect

    def test_endpoints_ordered(self):
        r = rotation_interval(sample_lifting())
        assert r.c <= r.d


class TestSerialization:
    def test_roundtrip(self):
        F = sample_lifting()
        assert Lifting.from_json(F.to_json()) == F
