"""Vector-valued time series and block-Hankel machinery.

A :class:`Trajectory` is a finite sequence of samples ``w(1), ..., w(T)`` in
R^q together with an input/output partition: the first ``m`` components of
each sample are inputs, the remaining ``p = q - m`` are outputs.  Time is
1-based everywhere in this package, so ``w.sample(1)`` is the first sample.

All objects are immutable after construction and all operations are pure
functions, so everything here is safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    DepthExceedsLength,
    DimensionMismatch,
    EmptyTrajectory,
    NonFiniteEntry,
    OutOfRange,
    ShiftTooLarge,
)


def _as_time_major(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise DimensionMismatch(f"trajectory data must be T x q, got shape {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class Trajectory:
    """A T x q time series with input cardinality ``m``.

    Parameters
    ----------
    data : array_like
        Samples, one row per time step (row ``t-1`` holds ``w(t)``).
        A 1-D array is treated as a scalar signal (q = 1).
    m : int
        Number of input components (``0 <= m <= q``); the remaining
        ``p = q - m`` components are outputs.
    labels : sequence of str, optional
        Variable names, one per component.
    """

    data: np.ndarray
    m: int = 0
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        arr = _as_time_major(self.data).copy()
        if arr.shape[0] == 0:
            raise EmptyTrajectory("trajectory must contain at least one sample")
        if arr.shape[1] == 0:
            raise DimensionMismatch("trajectory must have at least one variable")
        if not np.all(np.isfinite(arr)):
            raise NonFiniteEntry("trajectory contains non-finite entries")
        if not 0 <= self.m <= arr.shape[1]:
            raise DimensionMismatch(
                f"input cardinality m={self.m} outside [0, q={arr.shape[1]}]"
            )
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != arr.shape[1]:
                raise DimensionMismatch("labels must name every variable")
            object.__setattr__(self, "labels", labels)
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @classmethod
    def inputs(cls, data, labels=None) -> "Trajectory":
        """Build a trajectory in which every variable is an input (m = q)."""
        arr = _as_time_major(data)
        return cls(arr, m=arr.shape[1], labels=labels)

    @property
    def length(self) -> int:
        """Number of samples T."""
        return self.data.shape[0]

    @property
    def q(self) -> int:
        """Number of variables per sample."""
        return self.data.shape[1]

    @property
    def p(self) -> int:
        """Output cardinality q - m."""
        return self.q - self.m

    def sample(self, t: int) -> np.ndarray:
        """Return w(t) for 1 <= t <= T."""
        if not 1 <= t <= self.length:
            raise OutOfRange(f"time {t} outside [1, {self.length}]")
        return self.data[t - 1]

    def restrict(self, t0: int, t1: int) -> "Trajectory":
        return restrict(self, t0, t1)

    def shift(self, k: int) -> "Trajectory":
        return shift(self, k)

    def split_io(self) -> tuple[np.ndarray, np.ndarray]:
        """Return the (input columns, output columns) of the data array."""
        return self.data[:, : self.m], self.data[:, self.m :]


def stack_io(u: Trajectory, y: Trajectory) -> Trajectory:
    """Combine an input trajectory and an output trajectory into w = (u, y)."""
    if u.length != y.length:
        raise DimensionMismatch(
            f"input length {u.length} != output length {y.length}"
        )
    return Trajectory(np.hstack([u.data, y.data]), m=u.q)


@dataclass(frozen=True, eq=False)
class HankelMatrix:
    """Block-Hankel matrix of depth L built from a trajectory.

    Column j (1-based) is the stacked window ``w(j), ..., w(j+L-1)``, so the
    matrix has ``q*L`` rows and ``T-L+1`` columns and block (i, j) equals
    block (i-1, j+1) wherever both exist.
    """

    entries: np.ndarray
    depth: int
    block_rows: int = field(default=1)

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=float).copy()
        if arr.ndim != 2:
            raise DimensionMismatch("Hankel entries must form a matrix")
        if arr.shape[0] != self.depth * self.block_rows:
            raise DimensionMismatch(
                f"{arr.shape[0]} rows inconsistent with depth {self.depth} "
                f"and block size {self.block_rows}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def columns(self) -> int:
        return self.entries.shape[1]

    def column(self, j: int) -> np.ndarray:
        """Stacked window starting at time j (1-based)."""
        if not 1 <= j <= self.columns:
            raise OutOfRange(f"column {j} outside [1, {self.columns}]")
        return self.entries[:, j - 1]

    def window(self, j: int) -> np.ndarray:
        """Window starting at time j as an (L, q) array."""
        return self.column(j).reshape(self.depth, self.block_rows)


def hankel(w: Trajectory, depth: int) -> HankelMatrix:
    """Build the depth-L block-Hankel matrix of a trajectory.

    Raises
    ------
    DepthExceedsLength
        If ``depth > w.length``.
    """
    if depth < 1:
        raise DepthExceedsLength(f"depth must be >= 1, got {depth}")
    T, q = w.length, w.q
    if T == 0:
        raise EmptyTrajectory("cannot build a Hankel matrix from no samples")
    if depth > T:
        raise DepthExceedsLength(f"depth {depth} exceeds trajectory length {T}")
    cols = T - depth + 1
    H = np.empty((q * depth, cols))
    for j in range(cols):
        H[:, j] = w.data[j : j + depth].ravel()
    return HankelMatrix(H, depth=depth, block_rows=q)


def restrict(w: Trajectory, t0: int, t1: int) -> Trajectory:
    """Samples t0..t1 inclusive, keeping q, m and labels."""
    if not (1 <= t0 <= t1 <= w.length):
        raise OutOfRange(
            f"window [{t0}, {t1}] leaves the time axis [1, {w.length}]"
        )
    return Trajectory(w.data[t0 - 1 : t1], m=w.m, labels=w.labels)


def shift(w: Trajectory, k: int) -> Trajectory:
    """Apply the shift operator k times: result(t) = w(t + k), length T - k."""
    if k < 0:
        raise OutOfRange(f"shift must be nonnegative, got {k}")
    if k >= w.length:
        raise ShiftTooLarge(f"shift {k} >= length {w.length}")
    return Trajectory(w.data[k:], m=w.m, labels=w.labels)


class RankResult(NamedTuple):
    rank: int
    singular_values: np.ndarray


def default_rank_tolerance(shape: Sequence[int]) -> float:
    """max(rows, cols) * machine epsilon, relative to the top singular value."""
    return max(shape) * np.finfo(float).eps


def numerical_rank(matrix, tol: float | None = None) -> RankResult:
    """Numerical rank via SVD with a relative singular-value cutoff.

    The rank is the number of singular values exceeding ``tol * sigma_max``;
    ``tol`` defaults to ``max(rows, cols) * eps``.  The full singular-value
    list is returned for diagnostics.
    """
    M = np.asarray(matrix, dtype=float)
    if M.ndim != 2 or M.size == 0:
        raise DimensionMismatch(f"expected a nonempty matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NonFiniteEntry("matrix contains non-finite entries")
    if tol is None:
        tol = default_rank_tolerance(M.shape)
    elif tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    svals = np.linalg.svd(M, compute_uv=False)
    rank = int(np.count_nonzero(svals > tol * svals[0])) if svals[0] > 0 else 0
    return RankResult(rank, svals)
