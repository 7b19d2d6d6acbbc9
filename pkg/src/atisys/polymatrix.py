"""Matrices over the univariate rational polynomials.

Provides the exact machinery behind the kernel-representation decision
procedures: rank over the rational-function field, Smith decomposition with
unimodular transforms, and canonical row-Hermite reduction.  Pivoting always
selects a minimum-degree nonzero entry, which keeps intermediate degrees
small at the scale these matrices have.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import DimensionMismatch, ZeroMatrix
from .poly import Poly


def _entry(value) -> Poly:
    if isinstance(value, Poly):
        return value
    return Poly.constant(value)


class PolyMatrix:
    """Immutable rectangular grid of :class:`Poly` entries."""

    __slots__ = ("rows", "_ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int = 0):
        grid = tuple(tuple(_entry(e) for e in row) for row in rows)
        if grid and any(len(row) != len(grid[0]) for row in grid):
            raise DimensionMismatch("rows have differing lengths")
        object.__setattr__(self, "rows", grid)
        object.__setattr__(self, "_ncols", len(grid[0]) if grid else ncols)

    def __setattr__(self, name, value):
        raise AttributeError("PolyMatrix is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zeros(cls, g: int, q: int) -> "PolyMatrix":
        return cls([[Poly.zero()] * q for _ in range(g)], ncols=q)

    @classmethod
    def identity(cls, n: int) -> "PolyMatrix":
        return cls([[Poly.one() if i == j else Poly.zero() for j in range(n)] for i in range(n)])

    @classmethod
    def from_coefficient_blocks(cls, blocks: Sequence[Sequence[Sequence]]) -> "PolyMatrix":
        """Build R(x) = sum_k blocks[k] * x**k from same-shaped coefficient grids."""
        if not blocks:
            raise ZeroMatrix("at least one coefficient block is required")
        g = len(blocks[0])
        q = len(blocks[0][0]) if g else 0
        rows = []
        for i in range(g):
            row = []
            for j in range(q):
                row.append(Poly([Fraction(block[i][j]) for block in blocks]))
            rows.append(row)
        return cls(rows)

    # -- structure ----------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self._ncols)

    @property
    def degree(self) -> int:
        """Largest entry degree; 0 for a matrix with no nonzero entry."""
        return max(max((e.degree for row in self.rows for e in row), default=0), 0)

    @property
    def is_zero(self) -> bool:
        return all(e.is_zero for row in self.rows for e in row)

    def entry(self, i: int, j: int) -> Poly:
        return self.rows[i][j]

    def coefficient_block(self, k: int) -> list[list[Fraction]]:
        return [[e.coefficient(k) for e in row] for row in self.rows]

    def coefficient_blocks(self) -> list[list[list[Fraction]]]:
        return [self.coefficient_block(k) for k in range(self.degree + 1)]

    def evaluate(self, value) -> list[list]:
        """Entrywise evaluation; exact for Fraction/int arguments."""
        return [[e(value) for e in row] for row in self.rows]

    def transpose(self) -> "PolyMatrix":
        g, q = self.shape
        return PolyMatrix([[self.rows[i][j] for i in range(g)] for j in range(q)], ncols=g)

    # -- algebra ------------------------------------------------------

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add shapes {self.shape} and {other.shape}")
        return PolyMatrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)]
        )

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot subtract shapes {self.shape} and {other.shape}")
        return PolyMatrix(
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)]
        )

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        g, k = self.shape
        k2, q = other.shape
        if k != k2:
            raise DimensionMismatch(f"cannot multiply shapes {self.shape} and {other.shape}")
        out = []
        for i in range(g):
            row = []
            for j in range(q):
                acc = Poly.zero()
                for t in range(k):
                    if not self.rows[i][t].is_zero and not other.rows[t][j].is_zero:
                        acc = acc + self.rows[i][t] * other.rows[t][j]
                row.append(acc)
            out.append(row)
        return PolyMatrix(out)

    def scale(self, value) -> "PolyMatrix":
        return PolyMatrix([[e * _entry(value) for e in row] for row in self.rows])

    def vstack(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.shape[1] != other.shape[1] and self.rows and other.rows:
            raise DimensionMismatch("column counts differ")
        return PolyMatrix(list(self.rows) + list(other.rows))

    def take_rows(self, indices: Iterable[int]) -> "PolyMatrix":
        return PolyMatrix([self.rows[i] for i in indices], ncols=self._ncols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        body = "; ".join("[" + ", ".join(str(e) for e in row) + "]" for row in self.rows)
        return f"PolyMatrix([{body}])"

    # -- exact decisions ----------------------------------------------

    def rank(self) -> int:
        """Rank over the rational-function field by fraction-free elimination."""
        g, q = self.shape
        M = [list(row) for row in self.rows]
        r = 0
        for col in range(q):
            best = None
            for i in range(r, g):
                if not M[i][col].is_zero and (
                    best is None or M[i][col].degree < M[best][col].degree
                ):
                    best = i
            if best is None:
                continue
            M[r], M[best] = M[best], M[r]
            pivot = M[r][col]
            for i in range(r + 1, g):
                if not M[i][col].is_zero:
                    factor = M[i][col]
                    M[i] = [pivot * a - factor * b for a, b in zip(M[i], M[r])]
            r += 1
            if r == g:
                break
        return r

    def determinant(self) -> Poly:
        g, q = self.shape
        if g != q:
            raise DimensionMismatch("determinant requires a square matrix")
        if g == 0:
            return Poly.one()
        if g == 1:
            return self.rows[0][0]
        # cofactor expansion along the first column; fine at kernel-rep sizes
        total = Poly.zero()
        for i in range(g):
            if self.rows[i][0].is_zero:
                continue
            minor = PolyMatrix(
                [
                    [self.rows[a][b] for b in range(1, q)]
                    for a in range(g)
                    if a != i
                ]
            )
            term = self.rows[i][0] * minor.determinant()
            total = total + term if i % 2 == 0 else total - term
        return total

    def is_unimodular(self) -> bool:
        g, q = self.shape
        if g != q:
            return False
        d = self.determinant()
        return d.is_constant and not d.is_zero


def poly_rank(matrix: PolyMatrix) -> int:
    return matrix.rank()


class _Transform:
    """Square matrix under elementary row ops, with its inverse maintained."""

    def __init__(self, n: int):
        self.fwd = [[Poly.one() if i == j else Poly.zero() for j in range(n)] for i in range(n)]
        self.inv = [[Poly.one() if i == j else Poly.zero() for j in range(n)] for i in range(n)]

    def swap(self, i: int, j: int):
        self.fwd[i], self.fwd[j] = self.fwd[j], self.fwd[i]
        for row in self.inv:
            row[i], row[j] = row[j], row[i]

    def add(self, src: int, dst: int, factor: Poly):
        """Row dst += factor * row src (and the inverse column update)."""
        self.fwd[dst] = [a + factor * b for a, b in zip(self.fwd[dst], self.fwd[src])]
        for row in self.inv:
            row[src] = row[src] - factor * row[dst]

    def scale(self, i: int, c: Fraction):
        self.fwd[i] = [e.scale(c) for e in self.fwd[i]]
        inv_c = 1 / c
        for row in self.inv:
            row[i] = row[i].scale(inv_c)

    def matrices(self) -> tuple[PolyMatrix, PolyMatrix]:
        return PolyMatrix(self.fwd), PolyMatrix(self.inv)


@dataclass(frozen=True)
class SmithDecomposition:
    """Unimodular U, V and monic invariant factors with U R V = diag(D)."""

    U: PolyMatrix
    V: PolyMatrix
    invariant_factors: tuple[Poly, ...]
    shape: tuple[int, int]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    def diagonal(self) -> PolyMatrix:
        g, q = self.shape
        rows = [[Poly.zero()] * q for _ in range(g)]
        for k, d in enumerate(self.invariant_factors):
            rows[k][k] = d
        return PolyMatrix(rows)


def smith_form(matrix: PolyMatrix) -> SmithDecomposition:
    """Exact Smith decomposition with the divisibility chain d_i | d_{i+1}.

    Raises :class:`ZeroMatrix` for the all-zero matrix, whose decomposition
    carries no invariant factors.
    """
    if matrix.is_zero:
        raise ZeroMatrix("the zero matrix has no Smith pivots")
    g, q = matrix.shape
    M = [list(row) for row in matrix.rows]
    row_t = _Transform(g)
    col_t = _Transform(q)

    def row_swap(i, j):
        if i != j:
            M[i], M[j] = M[j], M[i]
            row_t.swap(i, j)

    def col_swap(i, j):
        if i != j:
            for row in M:
                row[i], row[j] = row[j], row[i]
            col_t.swap(i, j)

    def row_sub(i, k, quo):
        M[i] = [a - quo * b for a, b in zip(M[i], M[k])]
        row_t.add(k, i, -quo)

    def col_sub(j, k, quo):
        for row in M:
            row[j] = row[j] - quo * row[k]
        col_t.add(k, j, -quo)

    rank = 0
    for k in range(min(g, q)):
        best = None
        for i in range(k, g):
            for j in range(k, q):
                e = M[i][j]
                if not e.is_zero and (best is None or e.degree < M[best[0]][best[1]].degree):
                    best = (i, j)
        if best is None:
            break
        row_swap(k, best[0])
        col_swap(k, best[1])
        while True:
            restart = False
            for i in range(g):
                if i != k and not M[i][k].is_zero:
                    quo, rem = divmod(M[i][k], M[k][k])
                    row_sub(i, k, quo)
                    if not rem.is_zero:
                        row_swap(i, k)
                        restart = True
                        break
            if restart:
                continue
            for j in range(q):
                if j != k and not M[k][j].is_zero:
                    quo, rem = divmod(M[k][j], M[k][k])
                    col_sub(j, k, quo)
                    if not rem.is_zero:
                        col_swap(j, k)
                        restart = True
                        break
            if restart:
                continue
            offender = None
            for a in range(k + 1, g):
                for b in range(k + 1, q):
                    if not M[k][k].divides(M[a][b]):
                        offender = a
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            # pull a non-divisible entry into the pivot row and keep reducing
            M[k] = [a + b for a, b in zip(M[k], M[offender])]
            row_t.add(offender, k, Poly.one())
        rank += 1

    factors = []
    for k in range(rank):
        lead = M[k][k].leading_coefficient
        if lead != 1:
            M[k][k] = M[k][k].monic()
            row_t.scale(k, 1 / lead)
        factors.append(M[k][k])
    U, _ = row_t.matrices()
    # column ops were recorded as row ops on the transpose, so transpose back
    col_ops, _ = col_t.matrices()
    V = col_ops.transpose()
    return SmithDecomposition(U, V, tuple(factors), matrix.shape)


@dataclass(frozen=True)
class RowHermite:
    """Canonical staircase form H = U R with tracked unimodular transforms."""

    H: PolyMatrix
    U: PolyMatrix
    U_inverse: PolyMatrix
    pivot_columns: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivot_columns)


def row_hermite(matrix: PolyMatrix) -> RowHermite:
    """Reduce to the canonical row-Hermite form using unimodular row ops.

    Pivots are monic, entries above a pivot have degree strictly below the
    pivot's, nonzero rows come first in staircase order.  Full-row-rank
    matrices with equal row modules reduce to the identical canonical form.
    """
    g, q = matrix.shape
    M = [list(row) for row in matrix.rows]
    t = _Transform(g)

    def swap(i, j):
        if i != j:
            M[i], M[j] = M[j], M[i]
            t.swap(i, j)

    def add(src, dst, factor):
        M[dst] = [a + factor * b for a, b in zip(M[dst], M[src])]
        t.add(src, dst, factor)

    pr = 0
    pivots = []
    for col in range(q):
        while True:
            candidates = [i for i in range(pr, g) if not M[i][col].is_zero]
            if not candidates:
                break
            best = min(candidates, key=lambda i: M[i][col].degree)
            swap(best, pr)
            clean = True
            for i in range(pr + 1, g):
                if not M[i][col].is_zero:
                    quo, rem = divmod(M[i][col], M[pr][col])
                    add(pr, i, -quo)
                    if not rem.is_zero:
                        clean = False
            if clean:
                break
        if pr < g and not M[pr][col].is_zero:
            pivots.append(col)
            pr += 1
            if pr == g:
                break
    # canonical normalization: monic pivots, reduced entries above
    for r, col in enumerate(pivots):
        lead = M[r][col].leading_coefficient
        if lead != 1:
            M[r] = [e.scale(1 / lead) for e in M[r]]
            t.scale(r, 1 / lead)
        for i in range(r):
            if not M[i][col].is_zero and M[i][col].degree >= M[r][col].degree:
                quo = M[i][col] // M[r][col]
                add(r, i, -quo)
    U, U_inv = t.matrices()
    return RowHermite(PolyMatrix(M), U, U_inv, tuple(pivots))


def clear_denominators(polys: Sequence[Poly]) -> list[Poly]:
    """Scale a row of polynomials to integer coefficients with content 1."""
    denoms = [c.denominator for p in polys for c in p.coefficients]
    factor = Fraction(lcm(*denoms)) if denoms else Fraction(1)
    scaled = [p.scale(factor) for p in polys]
    numers = [abs(c.numerator) for p in scaled for c in p.coefficients if c != 0]
    if numers:
        g = 0
        for v in numers:
            g = gcd(g, v)
        if g > 1:
            scaled = [p.scale(Fraction(1, g)) for p in scaled]
    return scaled
