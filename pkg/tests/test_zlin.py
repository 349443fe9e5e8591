import random
from fractions import Fraction

import pytest

from fltzlab.zlin import (
    FiniteAbelianGroup,
    IntMatrix,
    LatticeQuotient,
    ZlinError,
    character_quotient,
    cokernel,
    kernel_basis,
    smith_normal_form,
)


def snf_is_valid(A, snf):
    assert (snf.U @ A) @ snf.V == snf.D
    assert snf.U.is_unimodular()
    assert snf.V.is_unimodular()
    assert snf.D.is_diagonal()
    diag = [d for d in snf.D.diagonal() if d != 0]
    assert all(d > 0 for d in diag)
    for a, b in zip(diag, diag[1:]):
        assert b % a == 0


class TestSmithNormalForm:
    def test_identity(self):
        A = IntMatrix.identity(2)
        snf = smith_normal_form(A)
        assert snf.D == A
        assert snf.U == A
        assert snf.V == A

    def test_one_by_one(self):
        for n in (-7, 0, 1, 12):
            snf = smith_normal_form(IntMatrix([[n]]))
            assert snf.D == IntMatrix([[abs(n)]])

    def test_worked_example(self):
        # oracle: direct multiplication of the returned transforms
        A = IntMatrix([[2, 4], [6, 8]])
        snf = smith_normal_form(A)
        snf_is_valid(A, snf)
        assert snf.D.diagonal() == (2, 4)

    def test_empty_and_rectangular(self):
        for shape in ((0, 0), (0, 3), (2, 0), (2, 4), (4, 2)):
            A = IntMatrix.zeros(*shape)
            snf_is_valid(A, smith_normal_form(A))
        A = IntMatrix([[3, 1, 4], [1, 5, 9]])
        snf_is_valid(A, smith_normal_form(A))

    def test_random_matrices(self):
        rng = random.Random(7)
        for _ in range(80):
            rows = rng.randint(0, 5)
            cols = rng.randint(0, 5)
            A = IntMatrix([[rng.randint(-9, 9) for _ in range(cols)]
                           for _ in range(rows)])
            snf_is_valid(A, smith_normal_form(A))

    def test_deterministic(self):
        A = IntMatrix([[4, 6, 2], [6, 0, 3], [2, 3, 9]])
        assert smith_normal_form(A) == smith_normal_form(A)


class TestCokernel:
    def test_cyclic(self):
        g = cokernel(IntMatrix([[5]]))
        assert g == FiniteAbelianGroup((5,), 0)
        assert g.order() == 5

    def test_trivial(self):
        assert cokernel(IntMatrix.identity(3)).is_trivial

    def test_free_part(self):
        g = cokernel(IntMatrix([[2, 0], [0, 0]]))
        assert g.invariant_factors == (2,)
        assert g.free_rank == 1
        assert not g.is_finite

    def test_empty_matrix(self):
        assert cokernel(IntMatrix([])).is_trivial
        assert cokernel(IntMatrix.zeros(0, 3)).is_trivial
        g = cokernel(IntMatrix.zeros(2, 0))
        assert g.free_rank == 2

    def test_order_equals_abs_det(self):
        rng = random.Random(11)
        for _ in range(40):
            n = rng.randint(1, 4)
            A = IntMatrix([[rng.randint(-6, 6) for _ in range(n)]
                           for _ in range(n)])
            det = A.det()
            g = cokernel(A)
            if det != 0:
                assert g.is_finite and g.order() == abs(det)
            else:
                assert not g.is_finite


class TestKernel:
    def test_kernel_is_saturated(self):
        A = IntMatrix([[2, 4]])
        basis = kernel_basis(A)
        assert len(basis) == 1
        # kernel is generated by the primitive (2, -1), not (4, -2)
        v = basis[0]
        from math import gcd
        assert abs(gcd(v[0], v[1])) == 1
        assert A @ v == (0,)


class TestCharacterQuotient:
    def test_one_over_n(self):
        for n in (2, 3, 5):
            g, reps = character_quotient([[Fraction(1, n)]], [[1]])
            assert g.invariant_factors == (n,)
            assert sorted(reps) == [(Fraction(i, n),) for i in range(n)]

    def test_trivial(self):
        g, reps = character_quotient([[1]], [[1]])
        assert g.is_trivial
        assert reps == [(Fraction(0),)]

    def test_half_times_third(self):
        sup = [[Fraction(1, 2), 0], [0, Fraction(1, 3)]]
        g, reps = character_quotient(sup, [[1, 0], [0, 1]])
        assert g.invariant_factors == (6,)
        assert len(reps) == 6
        # brute-force coset oracle: every superlattice point in the unit
        # square is congruent to exactly one representative mod Z^2
        points = [(Fraction(a, 2), Fraction(b, 3))
                  for a in range(2) for b in range(3)]
        for p in points:
            matches = [
                r for r in reps
                if all((x - y).denominator == 1 for x, y in zip(p, r))]
            assert len(matches) == 1

    def test_count_equals_determinant_index(self):
        rng = random.Random(3)
        for _ in range(25):
            n = rng.randint(1, 3)
            while True:
                sub = IntMatrix([[rng.randint(-3, 3) for _ in range(n)]
                                 for _ in range(n)])
                if sub.det() != 0:
                    break
            sup = [[Fraction(int(i == j)) for i in range(n)]
                   for j in range(n)]
            g, reps = character_quotient(sup, sub.columns())
            assert len(reps) == abs(sub.det())
            assert len(set(reps)) == len(reps)

    def test_infinite_index_rejected(self):
        with pytest.raises(ZlinError):
            character_quotient([[1, 0], [0, 1]], [[1, 0], [0, 0]])

    def test_not_contained_rejected(self):
        with pytest.raises(ZlinError):
            character_quotient([[2]], [[1]])

    def test_character_of(self):
        q = LatticeQuotient([[Fraction(1, 4)]], [[1]])
        chars = [q.character_of((Fraction(i, 4),)) for i in range(8)]
        assert [c.components for c in chars[:4]] == [(0,), (1,), (2,), (3,)]
        assert chars[4].components == (0,)


class TestCharacters:
    def test_arithmetic(self):
        g = FiniteAbelianGroup((2, 4))
        a = g.character((1, 3))
        b = g.character((1, 2))
        assert (a + b).components == (0, 1)
        assert (a - b).components == (0, 1)
        assert (-a).components == (1, 1)
        assert g.zero_character().is_zero()

    def test_enumeration(self):
        g = FiniteAbelianGroup((2, 4))
        assert len(g.characters()) == 8

    def test_bad_factors(self):
        with pytest.raises(ZlinError):
            FiniteAbelianGroup((3, 2))
        with pytest.raises(ZlinError):
            FiniteAbelianGroup((1,))

    def test_mixed_groups_rejected(self):
        a = FiniteAbelianGroup((2,)).character((1,))
        b = FiniteAbelianGroup((3,)).character((1,))
        with pytest.raises(ZlinError):
            a + b
