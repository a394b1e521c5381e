"""Kernel grids over [-1, 1]^2, convergence studies and grid file output."""

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import DomainError, ToleranceError
from .hgclosed import h_closed
from .phasefn import HenyeyGreenstein
from .quadrature import (
    N_MAX, N_MIN, analytic_bound, exact_node_count, focal_geometry, kernel_values,
    nodes_for_tolerance, strip_half_width,
)

logger = logging.getLogger(__name__)

PGM_MAXVAL = 65535
SELF_REFERENCE_FACTOR = 8


@dataclass
class KernelGrid:
    """P_m on ``ys x xs``; ``values[i, j]`` is the kernel at (xs[j], ys[i])."""

    m: int
    xs: np.ndarray
    ys: np.ndarray
    values: np.ndarray
    n_nodes_used: np.ndarray
    predicted_error: np.ndarray

    @property
    def max_predicted_error(self):
        return float(np.max(self.predicted_error))


@dataclass
class ConvergenceStudy:
    p: object
    y0: float
    m: int
    n_list: tuple
    xs: np.ndarray
    errors: np.ndarray
    bounds: np.ndarray
    reference: np.ndarray


def grid_nodes(n, endpoints=True):
    """n equispaced points covering [-1, 1], or the n cell midpoints."""
    if n < 2:
        raise ValueError("a grid axis needs at least 2 points")
    if endpoints:
        return np.linspace(-1.0, 1.0, n)
    return -1.0 + (2.0 * np.arange(n) + 1.0) / n


def _plan_points(p, a, b, m, tol, n_uniform, bound_M, n_max):
    """Node counts, strip widths and predicted errors for flattened (A, B)."""
    inner = b > 0.0
    alpha = np.full(a.shape, np.inf)
    if inner.any():
        alpha[inner] = strip_half_width(p.singularities(), a[inner], b[inner])
    n = np.full(a.shape, max(N_MIN, m + 1), dtype=np.int64)
    n_exact = exact_node_count(p.singularities(), m, n_max) if n_uniform is None else None
    if n_uniform is not None:
        n[:] = n_uniform
    elif n_exact is not None:
        n[inner] = n_exact
        return n, alpha, np.zeros(a.shape)
    elif inner.any():
        try:
            n[inner] = nodes_for_tolerance(alpha[inner], m, tol, bound_M, n_max)
        except ToleranceError as exc:
            worst = int(np.argmin(np.where(inner, alpha, np.inf)))
            raise ToleranceError(
                f"{exc} (worst point A={a[worst]:.6g}, B={b[worst]:.6g}, alpha={alpha[worst]:.3g})",
                achievable=exc.achievable) from None
    err = np.zeros(a.shape)
    if inner.any():
        err[inner] = analytic_bound(alpha[inner], n[inner], m, bound_M)
    return n, alpha, err


def eval_grid(p, m, nx, ny, tol=None, n_uniform=None, bound_M=1.0,
              endpoints=True, n_max=N_MAX):
    """Evaluate P_m on an ``ny x nx`` grid.

    Give ``tol`` for per-point node counts chosen from the error bound, or
    ``n_uniform`` for one fixed count everywhere. Square grids are computed
    on one triangle and mirrored, which makes them exactly symmetric.
    """
    if (tol is None) == (n_uniform is None):
        raise ValueError("give exactly one of tol and n_uniform")
    if n_uniform is not None and n_uniform < max(4, m + 1):
        raise DomainError(f"uniform node count must be at least max(4, m + 1) = {max(4, m + 1)}")
    xs = grid_nodes(nx, endpoints)
    ys = grid_nodes(ny, endpoints)
    square = nx == ny
    if square:
        iy, ix = np.triu_indices(ny)
    else:
        iy, ix = np.indices((ny, nx)).reshape(2, -1)
    a, b = focal_geometry(xs[ix], ys[iy])
    n, _, err = _plan_points(p, a, b, m, tol, n_uniform, bound_M, n_max)
    vals = kernel_values(p, xs[ix], ys[iy], m, n)

    values = np.empty((ny, nx))
    n_used = np.empty((ny, nx), dtype=np.int64)
    pred = np.empty((ny, nx))
    for target, source in ((values, vals), (n_used, n), (pred, err)):
        target[iy, ix] = source
        if square:
            target[ix, iy] = source
    return KernelGrid(m, xs, ys, values, n_used, pred)


def convergence_study(p, y0, m, n_list, xs, reference="closed", bound_M=1.0):
    """Tabulate |I_N - reference| and the a-priori bound for each N and x.

    ``reference`` is ``"closed"`` (HG phase functions, m = 0 only) or
    ``"self"``: the same rule at ``8 * max(n_list)`` nodes.
    """
    xs = np.asarray(xs, dtype=float)
    n_list = tuple(int(n) for n in n_list)
    if not n_list:
        raise ValueError("n_list is empty")
    if reference == "closed":
        if not isinstance(p, HenyeyGreenstein) or m != 0:
            raise ValueError("a closed-form reference exists only for HG phase functions at m = 0")
        ref = h_closed(xs, y0, p.g)
    elif reference == "self":
        ref = kernel_values(p, xs, y0, m, SELF_REFERENCE_FACTOR * max(n_list))
    else:
        raise ValueError(f"unknown reference {reference!r}")
    a, b = focal_geometry(xs, y0)
    inner = b > 0.0
    alpha = np.full(xs.shape, np.inf)
    if inner.any():
        alpha[inner] = strip_half_width(p.singularities(), a[inner], b[inner])
    errors = np.empty((len(n_list), xs.size))
    bounds = np.zeros((len(n_list), xs.size))
    for i, n in enumerate(n_list):
        errors[i] = np.abs(kernel_values(p, xs, y0, m, n) - ref)
        bounds[i, inner] = analytic_bound(alpha[inner], n, m, bound_M)
    return ConvergenceStudy(p, float(y0), m, n_list, xs, errors, bounds, ref)


# -- output ----------------------------------------------------------------

def _fmt(v):
    return repr(float(v))


def write_csv(grid, destination):
    """CSV with header ``x\\y,<xs>`` and one ``<y>,<values>`` row per y.

    ``destination`` is a path or a text stream. Numbers use the shortest
    round-trip representation.
    """
    lines = ["x\\y," + ",".join(_fmt(x) for x in grid.xs)]
    for y, row in zip(grid.ys, grid.values):
        lines.append(_fmt(y) + "," + ",".join(_fmt(v) for v in row))
    text = "\n".join(lines) + "\n"
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        Path(destination).write_text(text, encoding="utf-8")


def read_csv(source):
    """Inverse of ``write_csv``: returns ``(xs, ys, values)``."""
    text = Path(source).read_text(encoding="utf-8")
    rows = [line.split(",") for line in text.splitlines() if line]
    if not rows or rows[0][0] != "x\\y":
        raise ValueError("not a kernel grid CSV (missing x\\y header)")
    xs = np.array([float(v) for v in rows[0][1:]])
    ys = np.array([float(r[0]) for r in rows[1:]])
    values = np.array([[float(v) for v in r[1:]] for r in rows[1:]])
    return xs, ys, values


def heatmap_levels(grid, log_scale=False):
    """Map grid values onto integers 0..65535, rows ordered with y descending."""
    values = np.asarray(grid.values, dtype=float)
    if log_scale:
        bad = np.argwhere(~(values > 0.0))
        if bad.size:
            i, j = bad[0]
            raise DomainError(
                f"log heatmap needs positive values; cell (row {i}, col {j}) at "
                f"x={grid.xs[j]!r}, y={grid.ys[i]!r} is {values[i, j]!r}")
        values = np.log10(values)
    lo, hi = float(values.min()), float(values.max())
    if hi > lo:
        levels = np.rint((values - lo) / (hi - lo) * PGM_MAXVAL).astype(np.int64)
    else:
        levels = np.zeros(values.shape, dtype=np.int64)
    order = np.argsort(grid.ys)[::-1]
    return levels[order]


def write_heatmap(grid, destination, log_scale=False):
    """Plain-text 16-bit PGM (``P2``) of the grid; image top is the largest y."""
    levels = heatmap_levels(grid, log_scale)
    height, width = levels.shape
    lines = ["P2", f"{width} {height}", str(PGM_MAXVAL)]
    lines += [" ".join(str(v) for v in row) for row in levels]
    Path(destination).write_text("\n".join(lines) + "\n", encoding="ascii")


def read_pgm(source):
    tokens = Path(source).read_text(encoding="ascii").split()
    if tokens[0] != "P2":
        raise ValueError("not a plain PGM file")
    width, height, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    data = np.array([int(t) for t in tokens[4:]], dtype=np.int64)
    return data.reshape(height, width), maxval
