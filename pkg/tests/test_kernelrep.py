from fractions import Fraction

import numpy as np
import pytest

from atisys import (
    AffineKernelRep,
    OffsetSequence,
    Poly,
    PolyMatrix,
    behavior_apply,
    consistent_constant,
    consistent_sequence,
    consistent_sequence_report,
    controllable_kernel,
    equivalent,
    lag_of,
    minimize,
    syzygy_basis,
)
from atisys.errors import InconsistentRepresentation, WindowTooShort
from conftest import random_poly_matrix, random_unimodular

X = Poly.x()


def deficient_matrix() -> PolyMatrix:
    return PolyMatrix([[X + 1, X, X + 2], [X * X - 1, X * X - X, X * X + X - 2]])


def full_rank_matrix() -> PolyMatrix:
    return PolyMatrix([[1, 0, 0], [0, Poly([1, -1]), 0]])


def consistent_offset(R: PolyMatrix, anchor) -> tuple:
    """Offset realized by the constant trajectory ``anchor``: c = R(1) anchor."""
    values = R.evaluate(Fraction(1))
    return tuple(sum(row[j] * Fraction(anchor[j]) for j in range(len(anchor))) for row in values)


class TestSyzygies:
    def test_deficient_generator(self):
        basis = syzygy_basis(deficient_matrix())
        assert len(basis) == 1
        lam = basis[0]
        # the module is spanned by [1-x, 1]: mutual exact division
        unit = lam[1]
        assert unit.is_constant and not unit.is_zero
        assert lam[0] == unit * Poly([1, -1])

    def test_full_row_rank_empty(self):
        assert syzygy_basis(full_rank_matrix()) == []

    def test_duplicated_row(self):
        row = [X + 1, X, X + 2]
        basis = syzygy_basis(PolyMatrix([row, row]))
        assert len(basis) == 1
        lam = basis[0]
        assert (lam[0] + lam[1]).is_zero  # spans [1, -1]

    def test_rows_annihilate_exactly(self, rng):
        for _ in range(20):
            R = random_poly_matrix(rng, int(rng.integers(1, 4)), int(rng.integers(1, 4)))
            if R.is_zero:
                continue
            for lam in syzygy_basis(R):
                product = PolyMatrix([lam]) @ R
                assert product.is_zero


class TestConsistencyConstant:
    def test_worked_false_case(self):
        assert not consistent_constant(AffineKernelRep(deficient_matrix(), (0, 1)))

    def test_full_row_rank_always_consistent(self, rng):
        for _ in range(10):
            c = tuple(int(v) for v in rng.integers(-5, 6, size=2))
            assert consistent_constant(AffineKernelRep(full_rank_matrix(), c))

    def test_zero_offset_always_consistent(self, rng):
        for _ in range(10):
            R = random_poly_matrix(rng, 2, 3)
            assert consistent_constant(AffineKernelRep(R, (0, 0)))

    def test_constructed_consistent_offset(self):
        c = consistent_offset(deficient_matrix(), [1, 2, -1])
        assert consistent_constant(AffineKernelRep(deficient_matrix(), c))


class TestConsistencySequence:
    def test_worked_true_case(self):
        c = OffsetSequence(
            tuple((Fraction((-1) ** t), Fraction(-2 * (-1) ** t)) for t in range(1, 7))
        )
        report = consistent_sequence_report(deficient_matrix(), c)
        assert report.consistent and report.certified
        assert report.syzygy_degree == 1

    def test_worked_false_case(self):
        c = OffsetSequence.constant([0, 1], 6)
        assert not consistent_sequence(deficient_matrix(), c)

    def test_window_too_short(self):
        with pytest.raises(WindowTooShort):
            consistent_sequence(deficient_matrix(), OffsetSequence.constant([0, 0], 2))

    def test_numerical_route_agrees_on_worked_instances(self):
        R = deficient_matrix()
        good = OffsetSequence(
            tuple((Fraction((-1) ** t), Fraction(-2 * (-1) ** t)) for t in range(1, 7))
        )
        bad = OffsetSequence.constant([0, 1], 6)
        assert consistent_sequence(R, good, tol=1e-9)
        assert not consistent_sequence(R, bad, tol=1e-9)

    def test_agreement_with_constant_oracle(self, rng):
        # dual-route check on random instances, half with forced deficiency
        checked = 0
        for k in range(200):
            g = int(rng.integers(1, 4))
            q = int(rng.integers(1, 4))
            if k % 2:
                R = random_poly_matrix(rng, g, q, max_degree=2)
            else:
                base = random_poly_matrix(rng, 1, q, max_degree=1)
                mults = random_poly_matrix(rng, g, 1, max_degree=1)
                R = mults @ base
            if R.is_zero:
                continue
            c = tuple(int(v) for v in rng.integers(-3, 4, size=g))
            rep = AffineKernelRep(R, c)
            delta = max(
                (max(e.degree for e in lam) for lam in syzygy_basis(R)), default=-1
            )
            T = max(R.degree + 1, delta + 1)
            seq = OffsetSequence.constant(c, T)
            assert consistent_constant(rep) == consistent_sequence(R, seq)
            checked += 1
        assert checked >= 190


class TestMinimize:
    def test_worked_reduction(self):
        c = consistent_offset(deficient_matrix(), [1, 2, -1])
        reduced = minimize(AffineKernelRep(deficient_matrix(), c))
        assert reduced.g == 1
        assert reduced.R.shape == (1, 3)

    def test_already_minimal_unchanged_up_to_normalization(self):
        rep = AffineKernelRep(full_rank_matrix(), (3, 4))
        reduced = minimize(rep)
        assert reduced.g == 2
        assert equivalent(rep, reduced)

    def test_zero_row_dropped(self):
        R = PolyMatrix([[X, 1], [0, 0]])
        reduced = minimize(AffineKernelRep(R, (5, 0)))
        assert reduced.g == 1

    def test_inconsistent_detected(self):
        with pytest.raises(InconsistentRepresentation):
            minimize(AffineKernelRep(deficient_matrix(), (0, 1)))


class TestEquivalent:
    def test_unimodular_invariance(self, rng):
        for _ in range(20):
            g = int(rng.integers(1, 3))
            q = int(rng.integers(g, 4))
            R = random_poly_matrix(rng, g, q, max_degree=2)
            anchor = [int(v) for v in rng.integers(-3, 4, size=q)]
            c = consistent_offset(R, anchor)
            U = random_unimodular(rng, g)
            u_at_one = U.evaluate(Fraction(1))
            c2 = tuple(
                sum(u_at_one[i][j] * c[j] for j in range(g)) for i in range(g)
            )
            rep1 = AffineKernelRep(R, c)
            rep2 = AffineKernelRep(U @ R, c2)
            assert equivalent(rep1, rep2)

    def test_offset_change_detected(self):
        R = full_rank_matrix()
        assert not equivalent(AffineKernelRep(R, (1, 2)), AffineKernelRep(R, (1, 3)))

    def test_appended_zero_row(self):
        R = PolyMatrix([[X, 1]])
        padded = PolyMatrix([[X, 1], [0, 0]])
        assert equivalent(AffineKernelRep(R, (2,)), AffineKernelRep(padded, (2, 0)))

    def test_inconsistent_inputs_rejected(self):
        good = AffineKernelRep(full_rank_matrix(), (0, 0))
        bad = AffineKernelRep(deficient_matrix(), (0, 1))
        with pytest.raises(InconsistentRepresentation):
            equivalent(good, bad)

    def test_is_an_equivalence_relation(self, rng):
        for _ in range(10):
            q = 3
            R = random_poly_matrix(rng, 2, q, max_degree=1)
            c = consistent_offset(R, [1, -1, 2])
            rep = AffineKernelRep(R, c)
            us = [random_unimodular(rng, 2) for _ in range(2)]
            reps = [rep]
            for U in us:
                u1 = U.evaluate(Fraction(1))
                c_new = tuple(sum(u1[i][j] * reps[-1].c[j] for j in range(2)) for i in range(2))
                reps.append(AffineKernelRep(U @ reps[-1].R, c_new))
            assert equivalent(reps[0], reps[0])
            assert equivalent(reps[0], reps[1]) and equivalent(reps[1], reps[0])
            if equivalent(reps[0], reps[1]) and equivalent(reps[1], reps[2]):
                assert equivalent(reps[0], reps[2])


class TestBehaviorApply:
    def test_increment_law_zero_residual(self):
        rep = AffineKernelRep(PolyMatrix([[Poly([-1, 1])]]), (1,))
        assert behavior_apply(rep, np.array([3.0, 4.0, 5.0])).ravel().tolist() == [0.0, 0.0]

    def test_increment_law_violation(self):
        rep = AffineKernelRep(PolyMatrix([[Poly([-1, 1])]]), (1,))
        assert behavior_apply(rep, np.array([3.0, 4.0, 6.0])).ravel().tolist() == [0.0, 1.0]

    def test_window_too_short(self):
        rep = AffineKernelRep(PolyMatrix([[Poly([-1, 0, 1])]]), (0,))
        with pytest.raises(WindowTooShort):
            behavior_apply(rep, np.array([1.0, 2.0]))

    def test_zero_residual_survives_minimization(self):
        # dependent rows carry no extra information: a window satisfying the
        # padded representation satisfies its minimized form exactly
        R = PolyMatrix([[Poly([-1, 1]), 0], [Poly([-2, 2]), 0]])
        rep = AffineKernelRep(R, (1, 2))
        w = np.array([[3.0, 9.0], [4.0, 7.0], [5.0, 5.0]])
        assert np.allclose(behavior_apply(rep, w), 0.0)
        reduced = minimize(rep)
        assert np.allclose(behavior_apply(reduced, w), 0.0)

    def test_residual_preserved_by_unimodular_maps(self, rng):
        # windows satisfying (R, c) satisfy (U R, U(1) c) for any polynomial U
        R = PolyMatrix([[Poly([-1, 1]), 0], [0, Poly([-2, 1])]])
        c = (1, 0)
        rep = AffineKernelRep(R, c)
        w = np.array([[3.0, 1.0], [4.0, 2.0], [5.0, 4.0], [6.0, 8.0]])
        assert np.allclose(behavior_apply(rep, w), 0.0)
        for _ in range(5):
            U = random_unimodular(rng, 2)
            u1 = U.evaluate(Fraction(1))
            c2 = tuple(sum(u1[i][j] * Fraction(c[j]) for j in range(2)) for i in range(2))
            mapped = AffineKernelRep(U @ R, c2)
            if w.shape[0] >= mapped.degree + 1:
                assert np.allclose(behavior_apply(mapped, w), 0.0, atol=1e-9)


class TestControllableKernel:
    def test_increment_law_not_controllable(self):
        rep = AffineKernelRep(PolyMatrix([[Poly([-1, 1])]]), (1,))
        assert not controllable_kernel(rep)

    def test_coprime_row_controllable(self):
        rep = AffineKernelRep(PolyMatrix([[1, X]]), (0,))
        assert controllable_kernel(rep)

    def test_common_root_not_controllable(self):
        rep = AffineKernelRep(PolyMatrix([[X, 0], [0, X]]), (0, 0))
        assert not controllable_kernel(rep)


class TestLag:
    def test_increment_law(self):
        assert lag_of(AffineKernelRep(PolyMatrix([[Poly([-1, 1])]]), (1,))) == 1

    def test_unimodular_matrix_pins_single_trajectory(self):
        # det = 1: the representation solves uniquely, so the lag is 0
        R = PolyMatrix([[1, X], [X, X * X + 1]])
        rep = AffineKernelRep(R, consistent_offset(R, [2, 3]))
        assert lag_of(rep) == 0

    def test_dependent_row_dropped_before_reading_the_degree(self):
        # second row = x * first row: the minimized single row has degree 1
        R = PolyMatrix([[1, X], [X, X * X]])
        rep = AffineKernelRep(R, (2, 2))
        reduced = minimize(rep)
        assert reduced.g == 1
        assert lag_of(rep) == 1

    def test_row_combination_hides_lower_degree(self):
        # rows (x^2, x^2 + x) reduce to degrees (2, 1) in row-proper form
        R = PolyMatrix([[X * X, 0], [X * X, X]])
        rep = AffineKernelRep(R, (0, 0))
        assert lag_of(rep) == 2
        R2 = PolyMatrix([[X * X, X], [X * X, 0]])
        assert lag_of(AffineKernelRep(R2, (0, 0))) == 2
