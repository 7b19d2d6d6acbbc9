"""Command-line front end.

Every subcommand prints a machine-readable JSON document on stdout (floats
rendered with 12 significant digits, exact rationals as ``num/den`` strings);
``--table`` switches condition-style commands to a fixed-column summary.
Exit codes: 0 when the command succeeds and any checked condition holds,
2 when a checked condition fails, 1 on usage or data errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import io_formats
from .affine_ss import char_poly_at_one, lift, simulate
from .datadriven import (
    DataDrivenRep,
    complete,
    invariants_from_data,
    rank_condition_affine_report,
    recover_kernel,
)
from .errors import AtisysError
from .excitation import gape_report, pe_order_affine_report, pe_order_linear_report
from .kernelrep import (
    AffineKernelRep,
    OffsetSequence,
    consistent_constant,
    consistent_sequence_report,
    equivalent,
    syzygy_basis,
)
from .plants import linearize
from .polymatrix import poly_rank, smith_form
from .scenario import run_reference_experiments
from .trajectories import Trajectory, hankel


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _fmt(value: float) -> float | str:
    if not math.isfinite(value):
        return "inf" if value > 0 else ("-inf" if value < 0 else "nan")
    return float(f"{value:.12g}")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _fmt(float(obj))
    return obj


def _emit(doc):
    print(json.dumps(_jsonable(doc), indent=2))


def _num(value) -> str:
    if isinstance(value, float):
        formatted = _fmt(value)
        return formatted if isinstance(formatted, str) else f"{formatted:.12g}"
    return str(value)


def format_table(headers: list[str], rows: list[list]) -> str:
    cells = [[_num(v) for v in row] for row in rows]
    widths = [
        max(len(h), *(len(r[i]) for r in cells)) if cells else len(h)
        for i, h in enumerate(headers)
    ]
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(headers, widths)),
        "  ".join("-" * w for w in widths),
    ]
    lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)) for row in cells]
    return "\n".join(lines)


def _read_traj(args, attr="trajectory", all_inputs=False) -> Trajectory:
    path = getattr(args, attr)
    m = getattr(args, "m", None)
    return io_formats.read_trajectory_csv(path, m=m, all_inputs=all_inputs and m is None)


def _report_payload(report, extra: dict) -> dict:
    doc = dict(extra)
    doc.update(
        rank=report.rank,
        target=report.target,
        ok=bool(report.ok),
        singular_values=[_fmt(float(s)) for s in report.singular_values],
    )
    return doc


# -- subcommand handlers -----------------------------------------------


def _cmd_hankel(args) -> int:
    w = _read_traj(args)
    H = hankel(w, args.depth)
    _emit(
        {
            "depth": H.depth,
            "block_rows": H.block_rows,
            "columns": H.columns,
            "entries": H.entries,
        }
    )
    return 0


def _cmd_pe(args) -> int:
    u = _read_traj(args, all_inputs=True)
    report_fn = (
        pe_order_linear_report if args.model_class == "linear" else pe_order_affine_report
    )
    report = report_fn(u, args.order, args.tol)
    payload = _report_payload(
        report, {"condition": "persistence-of-excitation", "model_class": args.model_class, "order": args.order}
    )
    if args.table:
        print(
            format_table(
                ["class", "order", "rank", "target", "verdict"],
                [[args.model_class, args.order, report.rank, report.target, "PASS" if report.ok else "FAIL"]],
            )
        )
    else:
        _emit(payload)
    return 0 if report.ok else 2


def _cmd_gape(args) -> int:
    w = _read_traj(args)
    report = gape_report(w, args.order, args.n, args.tol, d_L=args.d_l)
    payload = _report_payload(
        report,
        {"condition": "generalized-affine-excitation", "order": args.order, "n": args.n, "m": w.m},
    )
    if args.table:
        print(
            format_table(
                ["order", "n", "rank", "target", "verdict"],
                [[args.order, args.n, report.rank, report.target, "PASS" if report.ok else "FAIL"]],
            )
        )
    else:
        _emit(payload)
    return 0 if report.ok else 2


def _cmd_rank_check(args) -> int:
    u = _read_traj(args, attr="inputs", all_inputs=True)
    x = io_formats.read_trajectory_csv(args.states)
    if args.n is not None and args.n != x.q:
        raise AtisysError(
            f"--n {args.n} contradicts the state file with {x.q} components"
        )
    report = rank_condition_affine_report(x, u, args.depth, args.tol)
    payload = _report_payload(
        report,
        {"condition": "data-driven-rank", "depth": args.depth, "n": x.q, "m": u.q},
    )
    if args.table:
        print(
            format_table(
                ["L", "n", "rank", "target", "verdict"],
                [[args.depth, x.q, report.rank, report.target, "PASS" if report.ok else "FAIL"]],
            )
        )
    else:
        _emit(payload)
    return 0 if report.ok else 2


def _cmd_complete(args) -> int:
    data = _read_traj(args, attr="data")
    prefix = None
    if args.tini > 0:
        prefix = io_formats.read_trajectory_csv(args.prefix, m=data.m)
        if prefix.length != args.tini:
            raise AtisysError(
                f"--tini {args.tini} does not match prefix length {prefix.length}"
            )
    u_f = io_formats.read_trajectory_csv(args.future_inputs, all_inputs=True)
    rep = DataDrivenRep(data, args.depth)
    result = complete(rep, prefix, u_f, args.tol if args.tol else 1e-8)
    _emit(
        {
            "y_f": result.y_f.data,
            "residual": float(result.residual),
            "combination_sum": float(result.g.sum()),
        }
    )
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        io_formats.write_trajectory_csv(outdir / "y_f.csv", result.y_f)
    return 0


def _cmd_ident_kernel(args) -> int:
    data = _read_traj(args, attr="data")
    rep = DataDrivenRep(data, args.depth)
    kernel = recover_kernel(rep, tol=args.tol, n=args.n, method=args.method)
    doc = io_formats.kernel_rep_to_json(kernel)
    _emit(doc)
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        io_formats.write_kernel_json(outdir / "kernel.json", kernel)
    return 0


def _cmd_invariants(args) -> int:
    data = _read_traj(args, attr="data")
    inv = invariants_from_data(data, args.tmax, args.tol)
    _emit(
        {
            "m": inv.m,
            "n": inv.n,
            "ell": inv.ell,
            "d_sequence": list(inv.d_sequence),
            "rho_sequence": list(inv.rho_sequence),
            "diagnostics": {"n_verbatim": inv.n_verbatim, "ell_verbatim": inv.ell_verbatim},
        }
    )
    return 0


def _cmd_simulate(args) -> int:
    sys_model = io_formats.read_system_json(args.system)
    x0 = np.zeros(sys_model.n) if args.x0 is None else np.array([float(v) for v in args.x0.split(",") if v != ""])
    if sys_model.m > 0:
        u = io_formats.read_trajectory_csv(args.inputs, all_inputs=True)
        result = simulate(sys_model, x0, u)
    else:
        result = simulate(sys_model, x0, horizon=args.horizon)
    doc = {
        "x": result.x.data if result.x is not None else [],
        "y": result.y.data if result.y is not None else [],
        "final_state": result.final_state,
    }
    _emit(doc)
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        if result.x is not None:
            io_formats.write_trajectory_csv(outdir / "states.csv", result.x)
        if result.y is not None:
            io_formats.write_trajectory_csv(outdir / "outputs.csv", result.y)
    return 0


def _cmd_lift(args) -> int:
    sys_model = io_formats.read_system_json(args.system)
    lifted = lift(sys_model)
    _emit(
        {
            "A": lifted.A,
            "B": lifted.B,
            "C": lifted.C,
            "D": lifted.D,
            "char_poly_at_one": str(char_poly_at_one(lifted)),
        }
    )
    return 0


def _cmd_linearize(args) -> int:
    plant = io_formats.read_plant_json(args.plant)
    groups = args.at.split(";")
    if len(groups) != 3:
        raise AtisysError("--at expects 'x1,..;u1,..;y1,..' (empty groups allowed)")

    def parse(group):
        return [float(v) for v in group.split(",") if v.strip() != ""]

    xbar, ubar, ybar = (parse(g) for g in groups)
    if args.mode == "analytic":
        sys_model = linearize(plant, xbar, ubar, ybar, mode="analytic")
    elif args.mode.startswith("fd:"):
        sys_model = linearize(plant, xbar, ubar, ybar, mode="fd", step=float(args.mode[3:]))
    else:
        raise AtisysError(f"--mode must be 'analytic' or 'fd:<step>', got {args.mode!r}")
    _emit(io_formats.system_to_json(sys_model))
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        io_formats.write_system_json(outdir / "system.json", sys_model)
    return 0


def _cmd_consistency(args) -> int:
    R, offset = io_formats.read_kernel_json(args.kernel)
    if isinstance(offset, OffsetSequence):
        report = consistent_sequence_report(R, offset, args.tol)
        _emit(
            {
                "offset_kind": "sequence",
                "consistent": report.consistent,
                "certified": report.certified,
                "syzygy_degree": report.syzygy_degree,
                "window_length": report.window_length,
            }
        )
        return 0 if report.consistent else 2
    ok = consistent_constant(AffineKernelRep(R, offset))
    _emit({"offset_kind": "constant", "consistent": bool(ok)})
    return 0 if ok else 2


def _cmd_equiv(args) -> int:
    R1, c1 = io_formats.read_kernel_json(args.kernel1)
    R2, c2 = io_formats.read_kernel_json(args.kernel2)
    if isinstance(c1, OffsetSequence) or isinstance(c2, OffsetSequence):
        raise AtisysError("equivalence is defined for constant-offset representations")
    verdict = equivalent(AffineKernelRep(R1, c1), AffineKernelRep(R2, c2))
    _emit({"equivalent": bool(verdict)})
    return 0 if verdict else 2


def _cmd_syzygy(args) -> int:
    doc = json.loads(Path(args.matrix).read_text())
    R = io_formats.poly_matrix_from_json(doc)
    basis = syzygy_basis(R)
    _emit(
        {
            "rank": poly_rank(R),
            "generators": [[io_formats.poly_to_strings(p) for p in row] for row in basis],
        }
    )
    return 0


def _cmd_smith(args) -> int:
    doc = json.loads(Path(args.matrix).read_text())
    R = io_formats.poly_matrix_from_json(doc)
    dec = smith_form(R)
    _emit(
        {
            "rank": dec.rank,
            "invariant_factors": [io_formats.poly_to_strings(d) for d in dec.invariant_factors],
            "U": io_formats.poly_matrix_to_json(dec.U),
            "V": io_formats.poly_matrix_to_json(dec.V),
        }
    )
    return 0


def _cmd_example_sec7(args) -> int:
    results = run_reference_experiments(args.tol)
    if args.table:
        rows = [
            [r.name, r.length, r.window, r.rank, r.target, r.gap_ratio, "PASS" if r.ok else "FAIL"]
            for r in results
        ]
        print(format_table(["experiment", "T", "L", "rank", "target", "gap", "verdict"], rows))
    else:
        _emit(
            [
                {
                    "experiment": r.name,
                    "T": r.length,
                    "L": r.window,
                    "rank": r.rank,
                    "target": r.target,
                    "gap_ratio": r.gap_ratio,
                    "ok": r.ok,
                    "singular_values": list(r.singular_values),
                }
                for r in results
            ]
        )
    return 0 if all(r.ok for r in results) else 2


# -- parser --------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="atisys", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        p.add_argument("--tol", type=float, default=None, help="rank/residual tolerance")
        p.add_argument("--seed", type=int, default=None,
                       help="random seed (bundled commands are deterministic; accepted for scripting)")
        p.add_argument("--out", default=None, help="directory for file artifacts")
        p.add_argument("--json", action="store_true", help="JSON output (the default)")
        p.add_argument("--table", action="store_true", help="human-readable table output")
        return p

    p = add("hankel", _cmd_hankel, "build the depth-L Hankel matrix of a trajectory")
    p.add_argument("--depth", "--L", dest="depth", type=int, required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("trajectory")

    p = add("pe", _cmd_pe, "persistence-of-excitation test (all columns are inputs)")
    p.add_argument("--class", dest="model_class", choices=["linear", "affine"], required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("trajectory")

    p = add("gape", _cmd_gape, "generalized affine excitation test on io data")
    p.add_argument("--order", "--L", dest="order", type=int, required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--d-l", dest="d_l", type=int, default=None,
                   help="use the general form with this restricted dimension")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("trajectory")

    p = add("rank-check", _cmd_rank_check, "data-driven rank condition from inputs and states")
    p.add_argument("--L", dest="depth", type=int, required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("inputs")
    p.add_argument("states")

    p = add("complete", _cmd_complete, "continue a prefix through the data-driven representation")
    p.add_argument("--tini", type=int, required=True)
    p.add_argument("--L", dest="depth", type=int, required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("data")
    p.add_argument("prefix")
    p.add_argument("future_inputs")

    p = add("ident-kernel", _cmd_ident_kernel, "recover a kernel representation from data")
    p.add_argument("--L", dest="depth", type=int, required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--method", choices=["svd", "exact"], default="svd")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("data")

    p = add("invariants", _cmd_invariants, "integer invariants from a rich experiment")
    p.add_argument("--tmax", type=int, required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("data")

    p = add("simulate", _cmd_simulate, "simulate a state-space model")
    p.add_argument("--system", required=True)
    p.add_argument("--x0", default=None, help="comma-separated initial state (default zeros)")
    p.add_argument("--horizon", type=int, default=None, help="steps when the model has no inputs")
    p.add_argument("inputs", nargs="?", default=None)

    p = add("lift", _cmd_lift, "lift an affine model to its linear form")
    p.add_argument("--system", required=True)

    p = add("linearize", _cmd_linearize, "linearize a plant around an operating point")
    p.add_argument("--plant", required=True)
    p.add_argument("--at", required=True, help="operating point 'x1,..;u1,..;y1,..'")
    p.add_argument("--mode", default="analytic", help="'analytic' or 'fd:<step>'")

    p = add("consistency", _cmd_consistency, "decide consistency of a kernel representation")
    p.add_argument("kernel")

    p = add("equiv", _cmd_equiv, "decide equivalence of two kernel representations")
    p.add_argument("kernel1")
    p.add_argument("kernel2")

    p = add("syzygy", _cmd_syzygy, "generators of the left syzygy module")
    p.add_argument("matrix")

    p = add("smith", _cmd_smith, "Smith decomposition of a polynomial matrix")
    p.add_argument("matrix")

    add("example-sec7", _cmd_example_sec7, "run the bundled three-experiment reference scenario")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.handler(args)
    except io_formats.FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except AtisysError as exc:
        print(f"error: {exc.__class__.__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
