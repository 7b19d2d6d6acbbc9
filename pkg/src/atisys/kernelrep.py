"""Kernel representations with offsets, and their decision procedures.

A pair (R(x), c) represents the trajectory set {w : R(sigma) w = c}, where
sigma is the time shift.  Unlike the offset-free case, such a set can be
empty: every polynomial row dependency (syzygy) of R imposes a constraint on
c, and consistency holds exactly when all of them are met.  Everything here
runs in exact rational arithmetic; floating point enters only when a
representation is applied to measured data windows.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from . import exactla
from .errors import (
    DimensionMismatch,
    InconsistentRepresentation,
    WindowTooShort,
)
from .poly import Poly
from .polymatrix import PolyMatrix, clear_denominators, row_hermite, smith_form

OffsetVector = tuple[Fraction, ...]


def _as_offset(values) -> OffsetVector:
    return tuple(Fraction(v) for v in values)


@dataclass(frozen=True)
class AffineKernelRep:
    """Polynomial matrix R (g x q) with a constant offset vector c (length g)."""

    R: PolyMatrix
    c: OffsetVector

    def __post_init__(self):
        object.__setattr__(self, "c", _as_offset(self.c))
        if len(self.c) != self.R.shape[0]:
            raise DimensionMismatch(
                f"offset length {len(self.c)} != row count {self.R.shape[0]}"
            )

    @property
    def g(self) -> int:
        return self.R.shape[0]

    @property
    def q(self) -> int:
        return self.R.shape[1]

    @property
    def degree(self) -> int:
        return self.R.degree

    def offset_floats(self) -> np.ndarray:
        return np.array([float(v) for v in self.c])


@dataclass(frozen=True)
class OffsetSequence:
    """A general offset given on the window [1, T]: row t-1 holds c(t)."""

    values: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(v) for v in row) for row in self.values)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise DimensionMismatch("offset samples have differing lengths")
        object.__setattr__(self, "values", rows)

    @classmethod
    def constant(cls, c: Sequence, length: int) -> "OffsetSequence":
        row = tuple(Fraction(v) for v in c)
        return cls(tuple(row for _ in range(length)))

    @property
    def length(self) -> int:
        return len(self.values)

    @property
    def g(self) -> int:
        return len(self.values[0]) if self.values else 0


def syzygy_basis(R: PolyMatrix) -> list[tuple[Poly, ...]]:
    """Generators of the left syzygy module {lambda : lambda R = 0}.

    Taken from the bottom rows of the Smith transform U, scaled to integer
    coefficients with content one.  Full-row-rank matrices return the empty
    list; the zero matrix returns the coordinate rows.
    """
    g = R.shape[0]
    if R.is_zero:
        return [tuple(PolyMatrix.identity(g).rows[i]) for i in range(g)]
    dec = smith_form(R)
    rows = []
    for i in range(dec.rank, g):
        rows.append(tuple(clear_denominators(dec.U.rows[i])))
    return rows


class ConsistencyReport(NamedTuple):
    consistent: bool
    certified: bool
    syzygy_degree: int
    window_length: int


def consistent_constant(rep: AffineKernelRep) -> bool:
    """Whether a constant offset is attainable: lambda(1) c = 0 for all syzygies.

    A constant sequence is fixed by the shift, so each syzygy constraint
    lambda(sigma) c = 0 collapses to the scalar test at 1.
    """
    if rep.R.is_zero:
        return all(v == 0 for v in rep.c)
    dec = smith_form(rep.R)
    residuals = []
    for i in range(dec.rank, rep.g):
        row_at_one = [e(Fraction(1)) for e in dec.U.rows[i]]
        residuals.append(sum(a * b for a, b in zip(row_at_one, rep.c)))
    ok = all(v == 0 for v in residuals)
    # same decision read off the scaled syzygy generators; they differ from
    # the U rows only by nonzero constants, so the two must always agree
    gens = [tuple(clear_denominators(dec.U.rows[i])) for i in range(dec.rank, rep.g)]
    ok_gens = all(
        sum(e(Fraction(1)) * v for e, v in zip(gen, rep.c)) == 0 for gen in gens
    )
    assert ok == ok_gens
    return ok


def block_toeplitz(R: PolyMatrix, window: int) -> list[list[Fraction]]:
    """Constant matrix acting on w(1..window+d) that stacks R(sigma) w over
    t = 1..window, with d = deg R."""
    g, q = R.shape
    d = R.degree
    blocks = R.coefficient_blocks()
    rows = g * window
    cols = q * (window + d)
    M = [[Fraction(0)] * cols for _ in range(rows)]
    for t in range(window):
        for k, block in enumerate(blocks):
            for i in range(g):
                for j in range(q):
                    M[t * g + i][(t + k) * q + j] = block[i][j]
    return M


def consistent_sequence(
    R: PolyMatrix, c: OffsetSequence, tol: float | None = None
) -> bool:
    return consistent_sequence_report(R, c, tol).consistent


def consistent_sequence_report(
    R: PolyMatrix, c: OffsetSequence, tol: float | None = None
) -> ConsistencyReport:
    """Finite-window consistency test for a general offset sequence.

    Solvability of the stacked window system is decided by comparing the
    rank of the block-Toeplitz truncation with that of its augmentation by
    the offset window.  A solution on [1, T] restricts to every sub-window,
    so all shorter shifts inside the window are covered.  The verdict is
    certified (decides membership of any extension of c built from windows of
    this length at every shift) when T is at least one more than the maximal
    syzygy degree; a finitely specified offset cannot certify more.

    Ranks are exact by default, which treats the offsets as the exact
    rationals they encode.  Pass ``tol`` to rank numerically instead, the
    right reading for measured offsets known only to float accuracy.
    """
    if R.shape[0] != c.g:
        raise DimensionMismatch(f"offset width {c.g} != row count {R.shape[0]}")
    d = R.degree
    T = c.length
    if T < d + 1:
        raise WindowTooShort(f"window {T} shorter than degree bound {d + 1}")
    M = block_toeplitz(R, T)
    rhs = [c.values[t][i] for t in range(T) for i in range(R.shape[0])]
    augmented = [row + [val] for row, val in zip(M, rhs)]
    if tol is None:
        base_rank = exactla.rank(M)
        aug_rank = exactla.rank(augmented)
    else:
        from .trajectories import numerical_rank

        base_rank = numerical_rank(np.array(M, dtype=float), tol).rank
        aug_rank = numerical_rank(np.array(augmented, dtype=float), tol).rank
    syz = syzygy_basis(R)
    delta = max((max(e.degree for e in gen) for gen in syz), default=-1)
    return ConsistencyReport(
        consistent=base_rank == aug_rank,
        certified=T >= delta + 1,
        syzygy_degree=delta,
        window_length=T,
    )


def minimize(rep: AffineKernelRep) -> AffineKernelRep:
    """Equivalent representation with full-row-rank R in canonical form.

    The unimodular reduction U R = [R1; 0] sends the offset to U(1) c; the
    entries against the zero rows must vanish, or the representation was
    inconsistent to begin with.
    """
    reduction = row_hermite(rep.R)
    r = reduction.rank
    u_at_one = reduction.U.evaluate(Fraction(1))
    transformed = [
        sum(u_at_one[i][j] * rep.c[j] for j in range(rep.g)) for i in range(rep.g)
    ]
    if any(v != 0 for v in transformed[r:]):
        raise InconsistentRepresentation(
            "zero rows of the reduced matrix carry nonzero offsets"
        )
    return AffineKernelRep(reduction.H.take_rows(range(r)), tuple(transformed[:r]))


def equivalent(rep1: AffineKernelRep, rep2: AffineKernelRep) -> bool:
    """Whether two consistent representations define the same trajectory set.

    Both are reduced to the canonical minimal form; the canonical matrices
    are equal exactly when the offset-free row modules agree, and then the
    connecting unimodular transform is the identity, so the offsets must
    match entrywise.
    """
    if not consistent_constant(rep1) or not consistent_constant(rep2):
        raise InconsistentRepresentation("equivalence is defined for consistent representations")
    if rep1.q != rep2.q:
        return False
    min1 = minimize(rep1)
    min2 = minimize(rep2)
    return min1.R == min2.R and min1.c == min2.c


def behavior_apply(rep: AffineKernelRep, window) -> np.ndarray:
    """Residuals of a data window against the representation, in floats.

    For a window w(1..L) with L >= deg R + 1, returns the (L - deg R) x g
    array with row t holding sum_k R_k w(t+k) - c.
    """
    w = np.asarray(getattr(window, "data", window), dtype=float)
    if w.ndim == 1:
        if rep.q != 1 and w.size % rep.q == 0:
            w = w.reshape(-1, rep.q)
        else:
            w = w.reshape(-1, 1)
    if w.shape[1] != rep.q:
        raise DimensionMismatch(f"window has {w.shape[1]} variables, expected {rep.q}")
    d = rep.degree
    L = w.shape[0]
    if L < d + 1:
        raise WindowTooShort(f"window {L} shorter than degree bound {d + 1}")
    blocks = [
        np.array([[float(v) for v in row] for row in block], dtype=float).reshape(
            rep.g, rep.q
        )
        for block in rep.R.coefficient_blocks()
    ]
    c = rep.offset_floats()
    out = np.empty((L - d, rep.g))
    for t in range(L - d):
        acc = -c.copy()
        for k, block in enumerate(blocks):
            acc += block @ w[t + k]
        out[t] = acc
    return out


def controllable_kernel(rep: AffineKernelRep) -> bool:
    """Constant-rank test: R(lambda) keeps full rank at every complex point.

    Decided exactly through the invariant factors of the minimized matrix;
    a non-constant factor vanishes somewhere, dropping the rank there.
    """
    reduced = minimize(rep)
    if reduced.g == 0:
        return True
    dec = smith_form(reduced.R)
    return all(f.is_constant for f in dec.invariant_factors)


def lag_of(rep: AffineKernelRep) -> int:
    """Minimal degree over all representations of the same trajectory set.

    Minimizes, then makes the rows proper: while the leading row-coefficient
    matrix is rank deficient, a combination of rows cancels some leading
    term, strictly lowering that row's degree.  The maximal row degree of
    the row-proper form is the lag.
    """
    reduced = minimize(rep)
    if reduced.g == 0:
        return 0
    rows = [list(r) for r in reduced.R.rows]
    while True:
        degrees = [max(e.degree for e in row) for row in rows]
        leading = [
            [e.coefficient(deg) for e in row] for row, deg in zip(rows, degrees)
        ]
        null = exactla.left_null_space(leading)
        if not null:
            return max(degrees)
        alpha = null[0]
        support = [i for i, a in enumerate(alpha) if a != 0]
        j = max(support, key=lambda i: degrees[i])
        scale = 1 / alpha[j]
        new_row = list(rows[j])
        for i in support:
            if i == j:
                continue
            shift = degrees[j] - degrees[i]
            factor = Poly([alpha[i] * scale]).shift(shift)
            new_row = [a + factor * b for a, b in zip(new_row, rows[i])]
        rows[j] = new_row
