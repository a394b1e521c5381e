"""Command-line interface: ``scatkernels {eval,grid,converge,exact-hg}``.

Data goes to stdout as CSV, diagnostics to stderr. Exit codes: 0 success,
1 numerical failure, 2 bad arguments or domain violation, 3 file I/O error.
"""

import argparse
import contextlib
import sys
import time

import numpy as np

from .exceptions import DomainError, NearSingularError, PhaseSpecError, ToleranceError
from .hgclosed import h0_closed, h_closed
from .kernelgrid import convergence_study, eval_grid, grid_nodes, write_csv, write_heatmap
from .phasefn import HenyeyGreenstein, load_phase_spec
from .quadrature import scattering_kernel

EXIT_NUMERIC = 1
EXIT_USAGE = 2
EXIT_IO = 3


class _IOFailure(Exception):
    pass


def _fmt(v):
    return repr(float(v))


def _g_value(text):
    try:
        g = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not abs(g) < 1.0:
        raise argparse.ArgumentTypeError(f"asymmetry factor must satisfy |g| < 1, got {g}")
    return g


def _unit_value(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not -1.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [-1, 1], got {v}")
    return v


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0.0:
        raise argparse.ArgumentTypeError(f"must be positive, got {v}")
    return v


def _count(minimum):
    def parse(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
        if v < minimum:
            raise argparse.ArgumentTypeError(f"must be >= {minimum}, got {v}")
        return v
    return parse


def _n_list(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values or min(values) < 4:
        raise argparse.ArgumentTypeError("node counts must be integers >= 4")
    return values


def _add_phase(parser):
    src = parser.add_mutually_exclusive_group(required=True)
    src.add_argument("--hg", type=_g_value, metavar="G", help="Henyey-Greenstein phase function")
    src.add_argument("--phase", metavar="FILE", help="phase-spec file")
    parser.add_argument("--m", type=_count(0), default=0, help="azimuthal order (default 0)")
    parser.add_argument("--bound-M", type=_positive_float, default=1.0, dest="bound_M",
                        help="bound constant M in the error estimate (default 1)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="scatkernels",
        description="Azimuthal scattering kernels by the periodic trapezoidal rule.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="kernel value at one (x, y)")
    _add_phase(p)
    p.add_argument("--x", type=_unit_value, required=True)
    p.add_argument("--y", type=_unit_value, required=True)
    how = p.add_mutually_exclusive_group(required=True)
    how.add_argument("--tol", type=_positive_float, help="target error; picks N from the bound")
    how.add_argument("--n", type=_count(4), help="fixed node count")

    p = sub.add_parser("grid", help="kernel on an nx-by-ny grid over [-1, 1]^2")
    _add_phase(p)
    p.add_argument("--nx", type=_count(2), required=True)
    p.add_argument("--ny", type=_count(2), required=True)
    how = p.add_mutually_exclusive_group(required=True)
    how.add_argument("--tol", type=_positive_float)
    how.add_argument("--uniform-n", type=_count(4), dest="uniform_n")
    p.add_argument("--midpoints", action="store_true", help="use cell midpoints instead of endpoints")
    p.add_argument("--out", metavar="CSV", help="write the grid as CSV")
    p.add_argument("--heatmap", metavar="PGM", help="write a 16-bit plain PGM image")
    p.add_argument("--log", action="store_true", help="log10 scaling for the heatmap")

    p = sub.add_parser("converge", help="error versus node count along a row y = y0")
    _add_phase(p)
    p.add_argument("--y0", type=_unit_value, required=True)
    p.add_argument("--n", type=_n_list, required=True, metavar="N1,N2,...")
    p.add_argument("--nx", type=_count(2), default=201)
    p.add_argument("--reference", choices=("auto", "closed", "self"), default="auto")
    p.add_argument("--out", metavar="CSV", help="output file (default stdout)")

    p = sub.add_parser("exact-hg", help="closed-form HG kernels H and H0")
    p.add_argument("--g", type=_g_value, required=True)
    p.add_argument("--x", type=_unit_value, required=True)
    p.add_argument("--y", type=_unit_value, required=True)
    return parser


def _phase(args):
    if args.hg is not None:
        return HenyeyGreenstein(args.hg)
    try:
        return load_phase_spec(args.phase)
    except OSError as exc:
        raise _IOFailure(f"cannot read phase spec: {exc}") from exc


def run_eval(args, out):
    p = _phase(args)
    pt = scattering_kernel(p, args.x, args.y, args.m, tol=args.tol, n_nodes=args.n,
                           bound_M=args.bound_M)
    out.write(",".join([_fmt(pt.value), str(pt.n_nodes), _fmt(pt.alpha), _fmt(pt.predicted_error)]) + "\n")


def run_grid(args, out):
    p = _phase(args)
    start = time.perf_counter()
    grid = eval_grid(p, args.m, args.nx, args.ny, tol=args.tol, n_uniform=args.uniform_n,
                     bound_M=args.bound_M, endpoints=not args.midpoints)
    wall = time.perf_counter() - start
    try:
        if args.out:
            write_csv(grid, args.out)
        if args.heatmap:
            write_heatmap(grid, args.heatmap, log_scale=args.log)
    except OSError as exc:
        raise _IOFailure(str(exc)) from exc
    out.write(",".join([str(args.nx), str(args.ny), _fmt(grid.values.min()), _fmt(grid.values.max()),
                        _fmt(grid.max_predicted_error), f"{wall:.3f}"]) + "\n")


def run_converge(args, out):
    p = _phase(args)
    reference = args.reference
    if reference == "auto":
        reference = "closed" if isinstance(p, HenyeyGreenstein) and args.m == 0 else "self"
    xs = grid_nodes(args.nx)
    study = convergence_study(p, args.y0, args.m, args.n, xs, reference=reference,
                              bound_M=args.bound_M)
    header = ["x"] + [f"error_N{n}" for n in study.n_list] + [f"bound_N{n}" for n in study.n_list]
    lines = [",".join(header)]
    for j, x in enumerate(xs):
        row = [x] + list(study.errors[:, j]) + list(study.bounds[:, j])
        lines.append(",".join(_fmt(v) for v in row))
    text = "\n".join(lines) + "\n"
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise _IOFailure(str(exc)) from exc
    else:
        out.write(text)


def run_exact_hg(args, out):
    h = h_closed(args.x, args.y, args.g)
    h0 = h0_closed(args.x, args.y, args.g)
    out.write(f"{_fmt(h)},{_fmt(h0)}\n")


_COMMANDS = {
    "eval": run_eval,
    "grid": run_grid,
    "converge": run_converge,
    "exact-hg": run_exact_hg,
}


def main(argv=None, out=None, err=None):
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        with contextlib.redirect_stderr(err), contextlib.redirect_stdout(out):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        _COMMANDS[args.command](args, out)
    except _IOFailure as exc:
        err.write(f"scatkernels: {exc}\n")
        return EXIT_IO
    except (ToleranceError, NearSingularError) as exc:
        err.write(f"scatkernels: {exc}\n")
        return EXIT_NUMERIC
    except (PhaseSpecError, DomainError, ValueError) as exc:
        err.write(f"scatkernels: {exc}\n")
        return EXIT_USAGE
    except FloatingPointError as exc:
        err.write(f"scatkernels: {exc}\n")
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
