"""Persistence-of-excitation tests and data-requirement accounting.

Two rank conditions on the depth-L Hankel matrix of an input sequence are
implemented: the classical one for the linear model class (full row rank,
``rank H_L(u) = m L``) and the affine one, which appends a row of ones below
the Hankel block and asks for ``m L + 1``.  The generalized affine condition
for measured io data asks for ``m L + n + 1`` and certifies the data-driven
trajectory parameterization.
"""

from __future__ import annotations

from typing import Literal, NamedTuple

import numpy as np

from .errors import DimensionMismatch
from .trajectories import Trajectory, hankel, numerical_rank

ModelClass = Literal["linear", "affine"]

_CLASSES = ("linear", "affine")


class ExcitationReport(NamedTuple):
    ok: bool
    rank: int
    target: int
    singular_values: np.ndarray


def _require_all_inputs(u: Trajectory):
    if u.m != u.q:
        raise DimensionMismatch(
            f"excitation tests expect an input sequence (m = q), got m={u.m}, q={u.q}"
        )


def ones_augmented(H: np.ndarray) -> np.ndarray:
    """Append the all-ones row below a data matrix."""
    return np.vstack([H, np.ones((1, H.shape[1]))])


def pe_order_linear_report(u: Trajectory, order: int, tol: float | None = None) -> ExcitationReport:
    _require_all_inputs(u)
    H = hankel(u, order).entries
    target = u.q * order
    rank, svals = numerical_rank(H, tol)
    return ExcitationReport(rank == target, rank, target, svals)


def pe_order_linear(u: Trajectory, order: int, tol: float | None = None) -> bool:
    """True iff u is persistently exciting of the given order for class L."""
    return pe_order_linear_report(u, order, tol).ok


def pe_order_affine_report(u: Trajectory, order: int, tol: float | None = None) -> ExcitationReport:
    _require_all_inputs(u)
    H = ones_augmented(hankel(u, order).entries)
    target = u.q * order + 1
    rank, svals = numerical_rank(H, tol)
    return ExcitationReport(rank == target, rank, target, svals)


def pe_order_affine(u: Trajectory, order: int, tol: float | None = None) -> bool:
    """True iff u is persistently exciting of the given order for class A."""
    return pe_order_affine_report(u, order, tol).ok


def _pe_test(model_class: ModelClass):
    if model_class not in _CLASSES:
        raise ValueError(f"model class must be one of {_CLASSES}, got {model_class!r}")
    return pe_order_linear if model_class == "linear" else pe_order_affine


def pe_profile(u: Trajectory, model_class: ModelClass, tol: float | None = None) -> list[bool]:
    """Pass/fail of the excitation test for every order L = 1..T.

    Monotonicity of the condition in L is not assumed; the full vector is
    reported so non-monotone cases surface in diagnostics.
    """
    test = _pe_test(model_class)
    return [test(u, L, tol) for L in range(1, u.length + 1)]


def max_pe_order(u: Trajectory, model_class: ModelClass, tol: float | None = None) -> int:
    """Largest order L such that all orders up to L pass; 0 if the first fails."""
    profile = pe_profile(u, model_class, tol)
    for i, ok in enumerate(profile):
        if not ok:
            return i
    return len(profile)


def gape_report(
    w: Trajectory,
    order: int,
    n: int | None = None,
    tol: float | None = None,
    *,
    d_L: int | None = None,
) -> ExcitationReport:
    """Generalized affine persistency of excitation on measured io data.

    The target rank is ``m*order + n + 1`` (valid whenever the depth is at
    least the behavior's lag).  Passing ``d_L`` switches to the general form
    ``d_L + 1``, where ``d_L`` is the affine dimension of the restricted
    behavior at depth L.
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    if d_L is None:
        if n is None or n < 0:
            raise ValueError("a nonnegative order n is required unless d_L is given")
        target = w.m * order + n + 1
    else:
        target = d_L + 1
    H = ones_augmented(hankel(w, order).entries)
    rank, svals = numerical_rank(H, tol)
    return ExcitationReport(rank == target, rank, target, svals)


def gape_check(
    w: Trajectory,
    order: int,
    n: int | None = None,
    tol: float | None = None,
    *,
    d_L: int | None = None,
) -> bool:
    return gape_report(w, order, n, tol, d_L=d_L).ok


def min_data_length(m: int, order: int, model_class: ModelClass = "linear") -> int:
    """Minimal sequence length T_L = (m+1)L - 1 for excitation of order L.

    The accounting formula is the same for both model classes; the saving of
    the affine route comes from the lower order it needs, not from a shorter
    per-order length (see :func:`sampling_gap`).
    """
    if model_class not in _CLASSES:
        raise ValueError(f"model class must be one of {_CLASSES}, got {model_class!r}")
    if m < 1 or order < 1:
        raise ValueError("m and order must be positive")
    return (m + 1) * order - 1


def sampling_gap(m: int) -> int:
    """Sample-count reduction T_{n+L+1}(linear) - T_{n+L}(affine) = m + 1."""
    if m < 1:
        raise ValueError("m must be positive")
    return m + 1
