"""File formats: trajectory CSV, system/plant JSON, polynomial-matrix JSON.

Trajectory CSV has the header ``t,w1,...,wq`` and one row per time step with
``t`` running 1..T.  The input/output split is not part of the CSV; it comes
from a sidecar JSON descriptor ``{"m": ..., "labels": [...]}`` next to the
file (same stem, ``.json`` suffix) or from an explicit argument, which wins.

Polynomial matrices serialize as ``{"rows", "cols", "entries"}`` where
``entries[i][j]`` lists the exact coefficients of entry (i, j) ascending by
degree as ``"num/den"`` strings.  A kernel representation adds ``"c"``: a
flat list for a constant offset, or a list of per-time rows for an offset
sequence on a window.
"""

from __future__ import annotations

import csv
import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .affine_ss import AffineStateSpace
from .errors import AtisysError, DimensionMismatch
from .kernelrep import AffineKernelRep, OffsetSequence
from .plants import NonlinearPlant, expr_from_json
from .poly import Poly
from .polymatrix import PolyMatrix
from .trajectories import Trajectory


class FormatError(AtisysError):
    """A file does not match its documented schema."""


# -- trajectories ------------------------------------------------------


def sidecar_path(csv_path) -> Path:
    return Path(csv_path).with_suffix(".json")


def read_trajectory_csv(
    path, m: int | None = None, all_inputs: bool = False
) -> Trajectory:
    """Load a trajectory; the split ``m`` falls back to the sidecar, then 0.

    ``all_inputs=True`` treats every variable as an input, which is what the
    excitation tests expect.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError(f"{path}: empty file") from None
        if not header or header[0].strip() != "t":
            raise FormatError(f"{path}: header must start with 't'")
        q = len(header) - 1
        if q < 1:
            raise FormatError(f"{path}: no variable columns")
        rows = []
        for t_expected, row in enumerate(reader, start=1):
            if not row:
                continue
            if len(row) != q + 1:
                raise FormatError(f"{path}: row {t_expected} has {len(row)} fields")
            try:
                t_val = int(float(row[0]))
                values = [float(v) for v in row[1:]]
            except ValueError as exc:
                raise FormatError(f"{path}: row {t_expected}: {exc}") from None
            if t_val != t_expected:
                raise FormatError(
                    f"{path}: time column must run 1..T, found {t_val} at row {t_expected}"
                )
            rows.append(values)
    if not rows:
        raise FormatError(f"{path}: no samples")
    labels = None
    if m is None and not all_inputs:
        side = sidecar_path(path)
        if side.exists():
            meta = json.loads(side.read_text())
            m = meta.get("m")
            labels = meta.get("labels")
    data = np.array(rows)
    if all_inputs:
        return Trajectory.inputs(data, labels=labels)
    return Trajectory(data, m=0 if m is None else int(m), labels=labels)


def write_trajectory_csv(path, w: Trajectory, write_sidecar: bool = True):
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t"] + [f"w{i + 1}" for i in range(w.q)])
        for t in range(w.length):
            writer.writerow([t + 1] + [repr(float(v)) for v in w.data[t]])
    if write_sidecar:
        meta = {"m": w.m}
        if w.labels:
            meta["labels"] = list(w.labels)
        sidecar_path(path).write_text(json.dumps(meta) + "\n")


# -- state-space and plant JSON ---------------------------------------


def system_to_json(sys: AffineStateSpace) -> dict:
    return {
        "A": sys.A.tolist(),
        "B": sys.B.tolist(),
        "C": sys.C.tolist(),
        "D": sys.D.tolist(),
        "E": sys.E.tolist(),
        "F": sys.F.tolist(),
    }


def system_from_json(doc: dict) -> AffineStateSpace:
    try:
        return AffineStateSpace(
            doc["A"], doc["B"], doc["C"], doc["D"], doc["E"], doc["F"]
        )
    except KeyError as exc:
        raise FormatError(f"system JSON missing field {exc}") from None
    except DimensionMismatch as exc:
        raise FormatError(f"system JSON invalid: {exc}") from None


def read_system_json(path) -> AffineStateSpace:
    return system_from_json(json.loads(Path(path).read_text()))


def write_system_json(path, sys: AffineStateSpace):
    Path(path).write_text(json.dumps(system_to_json(sys), indent=2) + "\n")


def plant_from_json(doc: dict) -> NonlinearPlant:
    try:
        f = tuple(expr_from_json(e) for e in doc["f"])
        h = tuple(expr_from_json(e) for e in doc["h"])
        return NonlinearPlant(f=f, h=h, n=int(doc["n"]), m=int(doc["m"]))
    except KeyError as exc:
        raise FormatError(f"plant JSON missing field {exc}") from None
    except (ValueError, DimensionMismatch) as exc:
        raise FormatError(f"plant JSON invalid: {exc}") from None


def read_plant_json(path) -> NonlinearPlant:
    return plant_from_json(json.loads(Path(path).read_text()))


# -- polynomial matrices and kernel representations --------------------


def poly_to_strings(p: Poly) -> list[str]:
    return [str(c) for c in p.coefficients]


def poly_matrix_to_json(R: PolyMatrix) -> dict:
    g, q = R.shape
    return {
        "rows": g,
        "cols": q,
        "entries": [[poly_to_strings(R.entry(i, j)) for j in range(q)] for i in range(g)],
    }


def poly_matrix_from_json(doc: dict) -> PolyMatrix:
    try:
        g, q = int(doc["rows"]), int(doc["cols"])
        entries = doc["entries"]
    except KeyError as exc:
        raise FormatError(f"matrix JSON missing field {exc}") from None
    if len(entries) != g or any(len(row) != q for row in entries):
        raise FormatError("matrix JSON entries do not match the declared shape")
    try:
        rows = [[Poly(Fraction(c) for c in cell) for cell in row] for row in entries]
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational coefficient: {exc}") from None
    return PolyMatrix(rows, ncols=q)


def kernel_rep_to_json(rep: AffineKernelRep) -> dict:
    doc = poly_matrix_to_json(rep.R)
    doc["c"] = [str(v) for v in rep.c]
    return doc


def kernel_rep_from_json(doc: dict) -> tuple[PolyMatrix, object]:
    """Parse a kernel representation; the offset may be constant or a window.

    Returns ``(R, c)`` where ``c`` is an :class:`AffineKernelRep`-ready tuple
    for a flat ``"c"`` list, or an :class:`OffsetSequence` when ``"c"`` is a
    list of per-time rows.
    """
    R = poly_matrix_from_json(doc)
    if "c" not in doc:
        raise FormatError("kernel JSON missing offset field 'c'")
    raw = doc["c"]
    try:
        if raw and isinstance(raw[0], list):
            return R, OffsetSequence(tuple(tuple(Fraction(v) for v in row) for row in raw))
        return R, tuple(Fraction(v) for v in raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational offset: {exc}") from None


def read_kernel_json(path):
    return kernel_rep_from_json(json.loads(Path(path).read_text()))


def write_kernel_json(path, rep: AffineKernelRep):
    Path(path).write_text(json.dumps(kernel_rep_to_json(rep), indent=2) + "\n")
