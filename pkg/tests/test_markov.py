from fractions import Fraction

import pytest

from circledyn.arith import IntPolynomial, char_poly
from circledyn.errors import InvalidRome, NotShort
from circledyn.families import dream, make, montevideo, persistent, persistent_poly
from circledyn.lifting import Lifting
from circledyn.markov import (
    Rome,
    build_markov_system,
    entropy,
    enumerate_loops,
    find_rome,
    markov_char_poly,
    perron_bracket,
    rome_char_poly,
    transitivity_certificate,
    validate_rome,
)

F2 = Fraction


class FakeSystem:
    """Bare adjacency for the matrix-level operations."""

    def __init__(self, matrix, orientation=None):
        self.matrix = tuple(tuple(r) for r in matrix)
        self.orientation = tuple(orientation or [1] * len(matrix))


def rigid_half_system():
    F = Lifting((F2(0),), (F2(1, 2),))
    return build_markov_system(F, extra_points=[F2(0)])


class TestBuild:
    def test_rigid_rotation_permutation(self):
        M = rigid_half_system()
        assert M.size == 2
        cert = transitivity_certificate(M)
        assert cert["irreducible"] and cert["permutation"] and not cert["transitive"]

    @pytest.mark.parametrize(
        "name,n,count",
        [("persistent", 5, 12), ("montevideo", 3, 36), ("dream", 3, 10), ("dream", 6, 22)],
    )
    def test_class_counts(self, name, n, count):
        assert make(name, n).markov.size == count

    def test_not_short(self):
        # F(0)=0, F(1/2)=2: the first basic interval maps over two full turns
        F = Lifting((F2(0), F2(1, 2)), (F2(0), F2(2)))
        with pytest.raises(NotShort):
            build_markov_system(F)

    def test_forward_closure_adds_points(self):
        # breakpoint orbit of the rigid 1/3-rotation closes after 3 points
        F = Lifting((F2(0),), (F2(1, 3),))
        M = build_markov_system(F)
        assert M.partition == (F2(0), F2(1, 3), F2(2, 3))

    def test_extra_points_refine_partition(self):
        F = Lifting((F2(0),), (F2(1, 2),))
        M = build_markov_system(F, extra_points=[F2(1, 4)])
        assert M.partition == (F2(0), F2(1, 4), F2(1, 2), F2(3, 4))
        cert = transitivity_certificate(M)
        assert cert["permutation"] and cert["irreducible"]

    def test_row_sums_positive(self):
        for name, n in (("dream", 4), ("persistent", 7), ("montevideo", 3)):
            M = make(name, n).markov
            assert all(sum(row) >= 1 for row in M.matrix)

    def test_class_count_equals_partition(self):
        M = make("dream", 5).markov
        assert M.size == len(M.partition)


class TestTransitivity:
    def test_families_transitive(self):
        for name, n in (("dream", 3), ("persistent", 5), ("montevideo", 3)):
            assert transitivity_certificate(make(name, n).markov)["transitive"]

    def test_two_disjoint_cycles_reducible(self):
        m = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
        cert = transitivity_certificate(FakeSystem(m))
        assert not cert["irreducible"]

    def test_irreducible_reachability(self):
        # irreducible iff the reachability closure is all-positive
        for name, n in (("dream", 3), ("persistent", 5)):
            M = make(name, n).markov
            k = M.size
            reach = [[bool(M.matrix[i][j]) for j in range(k)] for i in range(k)]
            for _ in range(k):
                for i in range(k):
                    for j in range(k):
                        reach[i][j] = reach[i][j] or any(
                            M.matrix[i][t] and reach[t][j] for t in range(k)
                        )
            assert all(all(row) for row in reach) == transitivity_certificate(M)["irreducible"]


class TestRome:
    def test_single_self_loop(self):
        sys = FakeSystem([[1]])
        assert rome_char_poly(sys, Rome({0})) == IntPolynomial([-1, 1])

    def test_pure_cycle_single_vertex_rome(self):
        sys = FakeSystem([[0, 1], [1, 0]])
        r = find_rome(sys)
        assert len(r.members) >= 1
        assert rome_char_poly(sys, r) == IntPolynomial([-1, 0, 1])

    def test_invalid_rome_detected(self):
        sys = FakeSystem([[0, 1], [1, 0]])
        with pytest.raises(InvalidRome):
            validate_rome(sys, Rome(frozenset()))

    def test_persistent_two_element_rome_validates(self):
        inst = persistent(7)
        M = inst.markov
        j0 = inst.class_index(F2(0), inst.y_positions[0])
        j3 = inst.class_index(inst.y_positions[13], F2(0) + 1)
        supplied = Rome({j0, j3})
        validate_rome(M, supplied)
        assert rome_char_poly(M, supplied) == markov_char_poly(M) == persistent_poly(7)

    def test_montevideo_five_element_rome_validates(self):
        inst = montevideo(3)
        M = inst.markov
        n, p, r, q = 3, 5, 7, 18
        x, y = inst.x_positions, inst.y_positions
        members = {
            inst.class_index(x[n - 1], x[n]),
            inst.class_index(x[p + n - 1], y[0]),
            inst.class_index(x[n * p + n - 1], y[(n - 2) * r + n + 1]),
            inst.class_index(y[(n - 1) * r], y[(n - 1) * r + 1]),
            inst.class_index(y[q - 1], x[0] + 1),
        }
        assert len(members) == 5
        supplied = Rome(members)
        validate_rome(M, supplied)
        assert rome_char_poly(M, supplied) == markov_char_poly(M)

    def test_rome_equals_bareiss_char_poly(self):
        for name, n in (("dream", 3), ("dream", 4), ("persistent", 5), ("persistent", 7)):
            M = make(name, n).markov
            assert markov_char_poly(M) == char_poly(M.matrix)

    def test_trivial_rome_all_vertices(self):
        M = make("dream", 3).markov
        all_rome = Rome(set(range(M.size)))
        assert rome_char_poly(M, all_rome) == markov_char_poly(M)

    def test_greedy_rome_small_on_families(self):
        assert len(find_rome(persistent(7).markov).members) <= 3
        assert len(find_rome(montevideo(3).markov).members) == 5
        assert len(find_rome(dream(5).markov).members) <= 5


class TestEntropy:
    def test_permutation_entropy_zero(self):
        M = rigid_half_system()
        b = entropy(M)
        assert b.lower == b.upper == 1

    def test_dream3_entropy_matches_polynomial(self):
        from circledyn.arith import largest_root_above
        from circledyn.families import dream_poly

        M = dream(3).markov
        b = entropy(M, F2(1, 10**12))
        expected = largest_root_above(dream_poly(3), F2(1), F2(1, 10**12))
        assert b.overlaps(expected, slack=F2(1, 10**12))

    def test_entropy_decreasing_dream(self):
        prev = None
        for n in range(3, 11):
            b = entropy(dream(n).markov, F2(1, 10**10))
            if prev is not None:
                assert b.upper < prev.lower
            prev = b

    def test_perron_bracket_width(self):
        b = perron_bracket(persistent(5).markov, F2(1, 10**9))
        assert b.width <= F2(1, 10**9)


class TestLoops:
    def test_self_loop(self):
        loops = enumerate_loops(FakeSystem([[1]]), 3)
        assert [(l.length, l.simple, l.sign) for l in loops] == [(1, True, 1), (2, False, 1), (3, False, 1)]

    def test_rigid_two_cycle(self):
        M = rigid_half_system()
        loops = enumerate_loops(M, 4)
        simples = [l for l in loops if l.simple]
        assert len(simples) == 1 and simples[0].length == 2 and simples[0].sign == 1

    def test_persistent_j0_j2_loop_positive(self):
        inst = persistent(5)
        M = inst.markov
        j0 = inst.class_index(F2(0), inst.y_positions[0])
        j2 = inst.class_index(inst.x_positions[1], inst.y_positions[3])
        loops = enumerate_loops(M, 2)
        two = [l for l in loops if l.length == 2 and set(l.vertices) == {j0, j2}]
        assert len(two) == 1 and two[0].sign == 1 and two[0].simple

    def test_persistent_no_simple_length4(self):
        M = persistent(5).markov
        loops = enumerate_loops(M, 4)
        assert not any(l.simple and l.length == 4 for l in loops)
        # the only length-4 loop is the 2-repetition of the 2-loop
        reps = [l for l in loops if l.length == 4]
        assert len(reps) == 1 and not reps[0].simple

    def test_sign_of_concatenation(self):
        # loop sign = product of orientations, so concatenation multiplies
        inst = dream(3)
        M = inst.markov
        loops = enumerate_loops(M, 12)
        for l in loops:
            acc = 1
            for v in l.vertices:
                acc *= M.orientation[v]
            assert acc == l.sign

    def test_budget(self):
        from circledyn.errors import BudgetExceeded

        full = FakeSystem([[1] * 6 for _ in range(6)])
        with pytest.raises(BudgetExceeded):
            enumerate_loops(full, 12, cap=50)


class TestExport:
    def test_adjacency_json(self):
        M = rigid_half_system()
        d = M.to_json()
        assert d["classes"] == ["[0,1/2]", "[1/2,1]"]
        assert sorted(d["arrows"]) == [[0, 1], [1, 0]]
        assert d["orientation"] == [1, 1]
