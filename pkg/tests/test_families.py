from fractions import Fraction

import pytest

from circledyn.arith import IntPolynomial
from circledyn.errors import BadParameter
from circledyn.families import (
    dream,
    dream_poly,
    make,
    montevideo,
    montevideo_per,
    montevideo_poly,
    mts1_scan,
    persistent,
    persistent_per,
    persistent_poly,
    verify,
)
from circledyn.markov import markov_char_poly

F2 = Fraction


class TestConstructors:
    def test_bad_parameters(self):
        with pytest.raises(BadParameter):
            dream(2)
        with pytest.raises(BadParameter):
            persistent(4)
        with pytest.raises(BadParameter):
            persistent(1)
        with pytest.raises(BadParameter):
            montevideo(2)
        with pytest.raises(BadParameter):
            make("nosuch", 3)

    def test_dream_structure(self):
        inst = dream(3)
        assert inst.markov.size == 10
        # intertwining: x_0..x_2 < y_0 < x_3 < y_1 < y_2 < x_4 < y_3 < y_4
        x, y = inst.x_positions, inst.y_positions
        assert x[2] < y[0] < x[3] < y[1] < y[2] < x[4] < y[3] < y[4]

    def test_persistent_structure(self):
        inst = persistent(7)
        x, y = inst.x_positions, inst.y_positions
        assert x[0] == 0 < y[0] and y[4] < x[1] < y[5] and y[13] < 1

    def test_montevideo_structure(self):
        inst = montevideo(3)
        x, y = inst.x_positions, inst.y_positions
        # x_0..x_7 < y_0..y_3 < x_8..x_12 < y_4..y_10 < x_13..x_17 < y_11..
        assert x[7] < y[0] and y[3] < x[8] and x[12] < y[4] and y[10] < x[13] and x[17] < y[11]

    def test_closed_form_period_sets(self):
        assert persistent_per(5).up_to(8) == {2, 3, 5, 6, 7, 8}
        assert persistent_per(13).up_to(13) == {2, 7, 9, 11, 13}
        assert montevideo_per(4).up_to(15) == {4, 8, 9, 11, 12, 13, 15}


class TestGraphShapeInvariants:
    @pytest.mark.parametrize("n", range(3, 8))
    def test_dream_class_count(self, n):
        assert dream(n).markov.size == 2 * (2 * n - 1)

    @pytest.mark.parametrize("n", (5, 7, 9))
    def test_persistent_branching(self, n):
        # 2n+2 classes; exactly two classes cover more than two others
        # (the chain top covers exactly two)
        M = persistent(n).markov
        assert M.size == 2 * n + 2
        big = [i for i in range(M.size) if M.out_degree(i) > 2]
        two = [i for i in range(M.size) if M.out_degree(i) == 2]
        assert len(big) == 2 and len(two) == 1

    @pytest.mark.parametrize("n", (3, 4))
    def test_montevideo_road_ends(self, n):
        # 2q classes with exactly 5 road-end classes of out-degree > 1
        M = montevideo(n).markov
        assert M.size == 4 * n * n
        branch = [i for i in range(M.size) if M.out_degree(i) > 1]
        assert len(branch) == 5


class TestPolynomials:
    @pytest.mark.parametrize("n", (3, 4, 5, 6))
    def test_dream_char_identity(self, n):
        char = markov_char_poly(dream(n).markov)
        assert char * IntPolynomial([-1, 1]) == dream_poly(n)

    @pytest.mark.parametrize("n", (3, 5, 7, 9, 11))
    def test_persistent_char_identity(self, n):
        assert markov_char_poly(persistent(n).markov) == persistent_poly(n)

    @pytest.mark.parametrize("n", (3, 4))
    def test_montevideo_char_identity(self, n):
        inst = montevideo(n)
        char = markov_char_poly(inst.markov)
        assert char * inst.poly_cofactor == montevideo_poly(n)

    def test_cofactor_roots_on_unit_circle(self):
        # the cofactors are products of x^k - 1: exactly the structural check
        for inst in (dream(4), montevideo(3)):
            residue = inst.poly_cofactor
            for k in range(residue.degree, 0, -1):
                cyc = IntPolynomial([-1] + [0] * (k - 1) + [1])
                while residue.degree >= k and cyc.divides(residue):
                    residue, _ = residue.divmod_exact(cyc)
            assert residue == IntPolynomial([1])


class TestEntropyFloor:
    @pytest.mark.parametrize("name,n", [("dream", 3), ("dream", 8), ("persistent", 7), ("montevideo", 3)])
    def test_log3_over_s_lower_bound(self, name, n):
        # h >= log(3)/s for any p/s in lowest terms inside the rotation
        # interval, i.e. sigma^s >= 3; checked at the smallest admissible s
        from circledyn.lifting import rotation_interval
        from circledyn.markov import entropy as markov_entropy
        from circledyn.periods import m_set

        inst = make(name, n)
        rot = rotation_interval(inst.lifting)
        ms = m_set(rot.c, rot.d)
        m = min(ms.finite) if ms.finite else ms.tail_from
        k = next(k for k in range(1, m + 1) if rot.c < F2(k, m) < rot.d)
        s = F2(k, m).denominator
        sigma = markov_entropy(inst.markov, F2(1, 10**10))
        assert sigma.lower**s >= 3


class TestVerify:
    @pytest.mark.parametrize(
        "name,n",
        [("dream", 3), ("dream", 6), ("persistent", 5), ("persistent", 7), ("montevideo", 3)],
    )
    def test_all_green(self, name, n):
        rep = verify(make(name, n))
        assert rep.all_green, rep.to_json()

    def test_persistent3_bc_absent_is_documented_green(self):
        rep = verify(persistent(3))
        assert rep.theorem_bound_flags["bc_exists"] is False
        assert rep.bounds_as_documented and rep.all_green

    def test_montevideo3_upper_bound_failure_recorded(self):
        rep = verify(montevideo(3))
        assert rep.cofin.bc == 6  # literal value, above the theorem's bound 4
        assert rep.theorem_bound_flags["bc_upper_bound"] is False  # recorded as failing
        assert rep.all_green  # the failure is exactly the documented one
        assert not rep.strict_green

    def test_report_json_shape(self):
        d = verify(dream(3)).to_json()
        for key in ("rot_ok", "per_ok", "poly_exact", "entropy_bracket", "cofiniteness"):
            assert key in d


class TestScan:
    def test_dream_scan(self):
        sc = mts1_scan("dream", 3, 12)
        assert len(sc.rows) == 10
        assert [str(r.len_rot) for r in sc.rows][:3] == ["1/5", "1/7", "1/9"]
        assert all(r.bc == r.n for r in sc.rows)
        assert sc.all_green

    def test_persistent_scan(self):
        sc = mts1_scan("persistent", 5, 13)
        assert [r.n for r in sc.rows] == [5, 7, 9, 11, 13]
        assert sc.all_green
        ents = [r.entropy for r in sc.rows]
        assert all(ents[i].lower > ents[i + 1].upper for i in range(len(ents) - 1))

    def test_montevideo_scan(self):
        sc = mts1_scan("montevideo", 3, 6)
        assert [str(r.len_rot) for r in sc.rows] == ["1/9", "1/16", "1/25", "1/36"]
        assert sc.all_green
        flags = {r.n: r.flags["bc_upper_bound_holds"] for r in sc.rows}
        assert flags == {3: False, 4: False, 5: False, 6: True}
