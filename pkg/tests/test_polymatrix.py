from fractions import Fraction

import pytest

from atisys import Poly, PolyMatrix, poly_rank, row_hermite, smith_form
from atisys.errors import ZeroMatrix
from conftest import random_poly_matrix, random_unimodular

X = Poly.x()


def worked_deficient_matrix() -> PolyMatrix:
    return PolyMatrix([[X + 1, X, X + 2], [X * X - 1, X * X - X, X * X + X - 2]])


class TestRank:
    def test_full_row_rank_case(self):
        R = PolyMatrix([[1, 0, 0], [0, Poly([1, -1]), 0]])
        assert poly_rank(R) == 2

    def test_deficient_case(self):
        assert poly_rank(worked_deficient_matrix()) == 1

    def test_zero_matrix(self):
        assert poly_rank(PolyMatrix.zeros(2, 3)) == 0

    def test_shifted_rows_are_dependent(self):
        row = [X + 1, 2 * X, Poly([1, 0, 3])]
        R = PolyMatrix([row, [X * e for e in row]])
        assert poly_rank(R) == 1


class TestSmith:
    def test_already_diagonal(self):
        R = PolyMatrix([[X, 0], [0, X * X]])
        dec = smith_form(R)
        assert [str(d) for d in dec.invariant_factors] == ["x", "x^2"]

    def test_rectangular_case(self):
        R = PolyMatrix([[1, 0, 0], [0, Poly([1, -1]), 0]])
        dec = smith_form(R)
        assert dec.invariant_factors[0] == Poly.one()
        assert dec.invariant_factors[1] == Poly([-1, 1])  # monic unit multiple of 1 - x

    def test_zero_matrix_rejected(self):
        with pytest.raises(ZeroMatrix):
            smith_form(PolyMatrix.zeros(2, 2))

    def test_reconstruction_and_divisibility_randomized(self, rng):
        for _ in range(30):
            g = int(rng.integers(1, 4))
            q = int(rng.integers(1, 4))
            R = random_poly_matrix(rng, g, q, max_degree=2)
            if R.is_zero:
                continue
            dec = smith_form(R)
            assert (dec.U @ R @ dec.V) == dec.diagonal()
            assert dec.U.is_unimodular() and dec.V.is_unimodular()
            for d1, d2 in zip(dec.invariant_factors, dec.invariant_factors[1:]):
                assert d1.divides(d2)
            for d in dec.invariant_factors:
                assert d.leading_coefficient == 1
            assert dec.rank == poly_rank(R)


class TestDeterminant:
    def test_known_two_by_two(self):
        R = PolyMatrix([[X, 1], [0, X]])
        assert R.determinant() == Poly([0, 0, 1])

    def test_unimodular_products_have_constant_determinant(self, rng):
        for _ in range(20):
            U = random_unimodular(rng, int(rng.integers(1, 4)))
            d = U.determinant()
            assert d.is_constant and not d.is_zero

    def test_multiplicativity(self, rng):
        for _ in range(10):
            A = random_poly_matrix(rng, 3, 3, max_degree=1)
            B = random_poly_matrix(rng, 3, 3, max_degree=1)
            assert (A @ B).determinant() == A.determinant() * B.determinant()


class TestRowHermite:
    def test_transforms_are_mutual_inverses(self, rng):
        for _ in range(20):
            g = int(rng.integers(1, 4))
            R = random_poly_matrix(rng, g, int(rng.integers(1, 4)))
            red = row_hermite(R)
            assert (red.U @ R) == red.H
            assert (red.U @ red.U_inverse) == PolyMatrix.identity(g)
            assert red.U.is_unimodular()

    def test_canonical_under_unimodular_premultiplication(self, rng):
        for _ in range(20):
            g = int(rng.integers(1, 4))
            R = random_poly_matrix(rng, g, int(rng.integers(2, 4)))
            U = random_unimodular(rng, g)
            a = row_hermite(R)
            b = row_hermite(U @ R)
            assert a.H == b.H
            assert a.pivot_columns == b.pivot_columns

    def test_staircase_with_zero_rows_last(self):
        row = [X + 1, 2 * X, Poly([1, 0, 3])]
        R = PolyMatrix([row, row])
        red = row_hermite(R)
        assert red.rank == 1
        assert all(e.is_zero for e in red.H.rows[1])
