"""Shared generators for randomized suites.

All randomness flows through explicitly seeded numpy generators so every
suite is reproducible run to run.
"""

from __future__ import annotations

import numpy as np
import pytest

from atisys import (
    AffineStateSpace,
    Poly,
    PolyMatrix,
    Trajectory,
    controllable,
    numerical_rank,
    pe_order_affine,
    simulate,
)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_system(rng, n, m, p, spectral_radius=0.9) -> AffineStateSpace:
    A = rng.normal(size=(n, n))
    if n:
        top = np.max(np.abs(np.linalg.eigvals(A)))
        if top > 0:
            A *= spectral_radius / top
    return AffineStateSpace(
        A,
        rng.normal(size=(n, m)),
        rng.normal(size=(p, n)),
        rng.normal(size=(p, m)),
        rng.normal(size=n),
        rng.normal(size=p),
    )


def random_controllable_system(rng, n_max=4, m_max=2, p_max=2) -> AffineStateSpace:
    while True:
        n = int(rng.integers(1, n_max + 1))
        m = int(rng.integers(1, m_max + 1))
        p = int(rng.integers(1, p_max + 1))
        sys = random_system(rng, n, m, p)
        if controllable(sys):
            return sys


def observable(sys: AffineStateSpace) -> bool:
    if sys.n == 0:
        return True
    O = np.vstack([sys.C @ np.linalg.matrix_power(sys.A, k) for k in range(sys.n)])
    return numerical_rank(O).rank == sys.n


def random_minimal_integer_system(rng, n_max=3, m_max=2, p_max=2) -> AffineStateSpace:
    """Minimal (controllable and observable) model with small integer entries.

    Integer data keeps float simulation exact, so rational null-space
    computations downstream see the mathematically exact data matrix.
    """
    while True:
        n = int(rng.integers(1, n_max + 1))
        m = int(rng.integers(1, m_max + 1))
        p = int(rng.integers(1, p_max + 1))
        sys = AffineStateSpace(
            rng.integers(-1, 2, size=(n, n)).astype(float),
            rng.integers(-2, 3, size=(n, m)).astype(float),
            rng.integers(-2, 3, size=(p, n)).astype(float),
            rng.integers(-2, 3, size=(p, m)).astype(float),
            rng.integers(-2, 3, size=n).astype(float),
            rng.integers(-2, 3, size=p).astype(float),
        )
        if controllable(sys) and observable(sys):
            return sys


def pe_affine_input(rng, m, order, length, integer=False, max_tries=50) -> Trajectory:
    """Input sequence that is persistently exciting of ``order`` for class A."""
    for _ in range(max_tries):
        if integer:
            data = rng.integers(-3, 4, size=(length, m)).astype(float)
        else:
            data = rng.normal(size=(length, m))
        u = Trajectory.inputs(data)
        if pe_order_affine(u, order):
            return u
    raise AssertionError(f"no exciting input of order {order} found in {max_tries} tries")


def experiment(sys: AffineStateSpace, rng, u: Trajectory, x0=None):
    """Simulate and return (io trajectory, states, result)."""
    if x0 is None:
        x0 = rng.normal(size=sys.n)
    result = simulate(sys, x0, u)
    return result.io(u), result


def random_poly(rng, max_degree=2, zero_ok=True) -> Poly:
    degree = int(rng.integers(0, max_degree + 1))
    coeffs = [int(rng.integers(-3, 4)) for _ in range(degree + 1)]
    if not zero_ok and all(c == 0 for c in coeffs):
        coeffs[-1] = 1
    return Poly(coeffs)


def random_poly_matrix(rng, g, q, max_degree=2) -> PolyMatrix:
    return PolyMatrix([[random_poly(rng, max_degree) for _ in range(q)] for _ in range(g)])


def random_unimodular(rng, size, ops=4, factor_degree=1) -> PolyMatrix:
    """Product of elementary row operations: swaps and polynomial shears."""
    U = PolyMatrix.identity(size)
    for _ in range(ops):
        kind = rng.integers(0, 2) if size > 1 else 1
        rows = [list(r) for r in U.rows]
        if kind == 0:
            i, j = rng.choice(size, size=2, replace=False)
            rows[i], rows[j] = rows[j], rows[i]
        else:
            i = int(rng.integers(0, size))
            j = int(rng.integers(0, size))
            if i == j:
                scale = int(rng.choice([-2, -1, 2, 1]))
                rows[i] = [e.scale(scale) for e in rows[i]]
            else:
                f = random_poly(rng, factor_degree)
                rows[j] = [a + f * b for a, b in zip(rows[j], rows[i])]
        U = PolyMatrix(rows)
    return U
