from fractions import Fraction

import pytest

from circledyn.cofiniteness import bc, dens_low_per, density_condition, report, sbc, sbcset
from circledyn.errors import NotCofinite
from circledyn.families import montevideo_per, persistent_per
from circledyn.periods import PeriodSet

F2 = Fraction
S = PeriodSet.successors
PS = PeriodSet.from_elements


class TestSbc:
    def test_all_of_n(self):
        assert sbc(S(1)) == 1

    def test_persistent7(self):
        assert sbc(PS({2, 5}, tail_from=7)) == 7

    def test_montevideo3(self):
        assert sbc(PS({3}, tail_from=6)) == 6

    def test_not_cofinite(self):
        with pytest.raises(NotCofinite):
            sbc(PS({1, 2, 3}))


class TestSbcset:
    def test_successors_contain_n(self):
        for n in range(3, 15):
            s = sbcset(S(n))
            assert s == {n}
            assert bc(S(n)) == n

    def test_persistent5(self):
        # {2,3} ∪ S(5): 3 excluded because 2 is a period; sbcset = {5}
        assert sbcset(PS({2, 3}, tail_from=5)) == {5}

    def test_persistent7(self):
        assert sbcset(PS({2, 5}, tail_from=7)) == {5, 7}
        assert bc(PS({2, 5}, tail_from=7)) == 7

    def test_montevideo6_literal(self):
        per = montevideo_per(6)
        assert per.up_to(34) == {6, 12, 13, 17, 18, 19, 23, 24, 25, 26, 28, 29, 30, 31, 32, 34}
        assert sbc(per) == 34
        assert sbcset(per) == {6, 12, 17, 23}
        assert bc(per) == 23

    def test_members_satisfy_defining_predicates(self):
        for per in (persistent_per(9), montevideo_per(5), S(8)):
            for L in sbcset(per):
                assert L in per and L > 2
                assert (L - 1) not in per
                count = sum(1 for k in range(1, L - 1) if k in per)
                assert 2**count <= (L - 2) ** 2


class TestBcBounds:
    def test_bc_le_sbc_and_strictness(self):
        for per in (persistent_per(7), persistent_per(9), montevideo_per(4), montevideo_per(6), S(5)):
            b, s = bc(per), sbc(per)
            assert b is not None and b <= s
            assert (b < s) == (s not in sbcset(per))

    def test_bc_absent_persistent3(self):
        per = persistent_per(3)
        assert per == S(2)
        assert bc(per) is None

    def test_density_bound_at_bc(self):
        for per in (persistent_per(9), montevideo_per(6)):
            b = bc(per)
            d = dens_low_per(per, b)
            count = sum(1 for k in range(1, b - 1) if k in per)
            assert d == F2(count, b - 2)
            assert 2**count <= (b - 2) ** 2  # exact squared form of the bound

    def test_density_exact_tie_handling(self):
        # equality 2^count == (L-2)^2 counts as satisfying the bound
        assert density_condition(PS({3, 4}, tail_from=6), 6)  # count=2, (6-2)^2=16
        ps = PS({2, 3}, tail_from=4)
        # L = 4: count({1,2}) = 2, (4-2)^2 = 4 = 2^2: allowed
        assert density_condition(ps, 4)


class TestDreamScan:
    def test_bc_equals_n_up_to_20(self):
        for n in range(3, 21):
            per = S(n)
            r = report(per)
            assert r.bc == r.sbc == n

    def test_no_low_periods_at_bc(self):
        r = report(S(12))
        assert r.dens_at[12] == 0


class TestPersistentDensityRemark:
    def test_quarter_density_values(self):
        # DensLowPer at sbc is (k+1)/(4k-1) for n = 4k+1, k/(4k-3) for n = 4k-1
        for n in (9, 13, 17):  # 4k+1
            k = (n - 1) // 4
            per = persistent_per(n)
            assert dens_low_per(per, sbc(per)) == F2(k + 1, 4 * k - 1)
        for n in (7, 11, 15):  # 4k-1
            k = (n + 1) // 4
            per = persistent_per(n)
            assert dens_low_per(per, sbc(per)) == F2(k, 4 * k - 3)


class TestReport:
    def test_json_roundtrip_shape(self):
        r = report(PS({2, 5}, tail_from=7))
        d = r.to_json()
        assert d["sbc"] == 7 and d["bc"] == 7 and d["sbcset"] == [5, 7]
