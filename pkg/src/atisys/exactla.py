"""Exact linear algebra over the rationals.

Small dense routines on lists of :class:`fractions.Fraction`, used wherever a
rank or null-space decision must be discontinuity-free: consistency tests of
kernel representations, exact kernel recovery from rational data, and the
eigenvalue-at-one certificate of lifted systems.  Matrices are lists of row
lists; all inputs are converted with :func:`fractions.Fraction`, which is
exact for ints, strings like ``"3/4"`` and binary floats.
"""

from __future__ import annotations

from fractions import Fraction

Matrix = list[list[Fraction]]


def to_fraction_matrix(rows) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def rref(matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot column indices."""
    M = to_fraction_matrix(matrix)
    if not M:
        return M, []
    nrows, ncols = len(M), len(M[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if M[i][c] != 0), None)
        if pivot is None:
            continue
        M[r], M[pivot] = M[pivot], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(nrows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return M, pivots


def rank(matrix) -> int:
    return len(rref(matrix)[1])


def null_space(matrix, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of the right null space, one vector per free column.

    The basis is the canonical one read off the RREF: vector k has a 1 in
    the k-th free column and the negated pivot-row entries elsewhere.
    """
    M = to_fraction_matrix(matrix)
    if ncols is None:
        if not M:
            raise ValueError("column count required for an empty matrix")
        ncols = len(M[0])
    R, pivots = rref(M)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for c in free:
        v = [Fraction(0)] * ncols
        v[c] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -R[r][c]
        basis.append(v)
    return basis


def left_null_space(matrix, nrows: int | None = None) -> list[list[Fraction]]:
    """Basis of the left null space (row vectors v with v @ M = 0)."""
    M = to_fraction_matrix(matrix)
    if nrows is None:
        nrows = len(M)
    transposed = [[M[i][j] for i in range(len(M))] for j in range(len(M[0]))] if M else []
    return null_space(transposed, ncols=nrows)


def det(matrix) -> Fraction:
    """Determinant by fraction-free-style Gaussian elimination."""
    M = to_fraction_matrix(matrix)
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("determinant requires a square matrix")
    sign = 1
    result = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if M[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            M[c], M[pivot] = M[pivot], M[c]
            sign = -sign
        result *= M[c][c]
        inv = 1 / M[c][c]
        for i in range(c + 1, n):
            if M[i][c] != 0:
                f = M[i][c] * inv
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return sign * result


def solve(matrix, rhs) -> list[Fraction] | None:
    """Solve M x = b exactly; ``None`` when the system is inconsistent.

    For underdetermined systems the free variables are set to zero.
    """
    M = to_fraction_matrix(matrix)
    b = [Fraction(x) for x in rhs]
    if len(M) != len(b):
        raise ValueError("row count of matrix and rhs differ")
    ncols = len(M[0]) if M else 0
    augmented = [row + [val] for row, val in zip(M, b)]
    R, pivots = rref(augmented)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = R[r][ncols]
    return x
