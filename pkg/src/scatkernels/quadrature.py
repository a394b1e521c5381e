"""Trapezoidal-rule scattering kernels with a-priori error bounds.

The azimuthal kernel of order m at (x, y) is

    P_m(x, y) = c_m * integral_0^{2 pi} p(A + B cos s) cos(m s) ds,
    A = x y,  B = sqrt(1 - x**2) sqrt(1 - y**2),

with c_0 = 1/(2 pi) and c_m = 1/pi for m > 0, so that
sum_m P_m(x, y) cos(m phi) reproduces p(A + B cos phi).

The integrand is 2 pi-periodic. When it is analytic in the strip
|Im s| < alpha and bounded there by M, the N-node rule with nodes 2 pi k/N
has error at most 4 pi M / (exp(alpha N) - 1). The strip maps onto the
confocal ellipse with foci A +- B, so alpha follows from the singularities of
p alone. The cos(m s) factor costs m nodes, which is why bounds here use
N - m in the exponent.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .exceptions import DomainError, ToleranceError
from .phasefn import Entire, PoleLadder, RealRay, VerticalCut, eval_phase

ALPHA_CAP = 5.0
N_MIN = 8
N_MAX = 1 << 20
UNIT_ROUNDOFF = 2.0**-53


@dataclass(frozen=True)
class IntegrandGeometry:
    A: float
    B: float
    m: int = 0

    @classmethod
    def from_xy(cls, x, y, m=0):
        if abs(x) > 1.0 or abs(y) > 1.0:
            raise DomainError("x and y must lie in [-1, 1]")
        if m < 0:
            raise DomainError("harmonic order m must be >= 0")
        a, b = focal_geometry(x, y)
        return cls(float(a), float(b), int(m))


@dataclass(frozen=True)
class ErrorBound:
    analytic_bound: float
    smooth_bound_scale: float


@dataclass(frozen=True)
class TrapezoidPlan:
    geometry: IntegrandGeometry
    alpha: float
    bound_M: float
    n_nodes: int
    predicted_error: float
    exact: bool = False


@dataclass(frozen=True)
class KernelPoint:
    value: float
    n_nodes: int
    alpha: float
    predicted_error: float


def focal_geometry(x, y):
    """A = xy and B = sqrt(1 - x^2) sqrt(1 - y^2); symmetric in (x, y) bit for bit."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    a = x * y
    b = np.sqrt((1.0 - x) * (1.0 + x)) * np.sqrt((1.0 - y) * (1.0 + y))
    return a, b


def trapezoid_periodic(f, n_nodes):
    """Integral of a 2 pi-periodic ``f`` over one period with nodes 2 pi k/N, k = 1..N.

    ``f`` must accept an array of nodes. The sum is exactly rounded.
    """
    if n_nodes < 1:
        raise ValueError("need at least one node")
    s = 2.0 * np.pi * np.arange(1, n_nodes + 1) / n_nodes
    return 2.0 * math.pi / n_nodes * math.fsum(np.asarray(f(s), dtype=float))


def integrand_h_m(p, geom, s):
    """p(A + B cos s) cos(m s), with roundoff excursions past +-1 clamped."""
    s = np.asarray(s, dtype=float)
    t = geom.A + geom.B * np.cos(s)
    over = np.abs(t) - 1.0
    if np.any(over > 4.0 * UNIT_ROUNDOFF):
        raise AssertionError("integrand argument left [-1, 1] by more than roundoff")
    t = np.clip(t, -1.0, 1.0)
    value = np.asarray(eval_phase(p, t)) * np.cos(geom.m * s)
    return float(value) if value.ndim == 0 else value


def _phase_arrays(p):
    return p.compiled


def kernel_values(p, x, y, m, n_nodes):
    """Trapezoid kernel at arrays of (x, y) with per-point or scalar node counts.

    This is the single evaluation path shared by point and grid evaluation,
    so a value never depends on which other points are evaluated with it.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x, y = np.broadcast_arrays(x, y)
    if np.any(np.abs(x) > 1.0) or np.any(np.abs(y) > 1.0):
        raise DomainError("x and y must lie in [-1, 1]")
    if m < 0:
        raise DomainError("harmonic order m must be >= 0")
    n = np.broadcast_to(np.asarray(n_nodes, dtype=np.int64), x.shape)
    if np.any(n < max(4, m + 1)):
        raise DomainError(f"need at least max(4, m + 1) = {max(4, m + 1)} nodes")
    a, b = focal_geometry(x, y)
    table, coeffs = _phase_arrays(p)
    out = kernels.trapezoid_points(
        table, coeffs,
        np.ascontiguousarray(a.ravel()), np.ascontiguousarray(b.ravel()),
        int(m), np.ascontiguousarray(n.ravel()))
    return out.reshape(x.shape)


def trapezoid_kernel(p, x, y, m, n_nodes):
    """P_m(x, y) from the N-node trapezoidal rule.

    Where B = 0 (|x| = 1 or |y| = 1) the integrand is p(A) cos(m s) and the
    exact value, p(A) for m = 0 and 0 otherwise, is returned directly.
    """
    return float(kernel_values(p, x, y, m, n_nodes))


def _ellipse_alpha_vertical(a, b, x0, height):
    # ellipse through x0 + i*height: (A - x0)^2/(S^2 + 1) + height^2/S^2 = B^2, S = sinh(alpha)
    b2 = b * b
    lin = b2 - (a - x0) ** 2 - height * height
    disc = np.sqrt(lin * lin + 4.0 * b2 * height * height)
    # stable root of b2 u^2 + lin u - height^2 = 0
    with np.errstate(divide="ignore", invalid="ignore"):
        u = np.where(lin > 0.0, 2.0 * height * height / (lin + disc), (disc - lin) / (2.0 * b2))
    return np.arcsinh(np.sqrt(u))


def strip_half_width(sing, geom_or_a, b=None):
    """Half-width alpha of the analyticity strip of s -> p(A + B cos s).

    Takes a ``SingularitySet`` and either an ``IntegrandGeometry`` or arrays
    ``A, B`` (vectorized). Requires B > 0; the B = 0 case is exact and never
    needs a strip. Entire phase functions get ``ALPHA_CAP``.
    """
    if b is None:
        a, b = geom_or_a.A, geom_or_a.B
    else:
        a = geom_or_a
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(b <= 0.0):
        raise DomainError("strip width needs B > 0; B = 0 is the exact case")
    alpha = np.full(np.broadcast(a, b).shape, ALPHA_CAP)
    for item in sing:
        if isinstance(item, RealRay):
            ratio = np.abs(item.x_s - a) / b
            if np.any(ratio <= 1.0):
                raise DomainError(f"singular ray at {item.x_s} reaches the focal segment")
            cand = np.arccosh(ratio)
        elif isinstance(item, VerticalCut):
            cand = _ellipse_alpha_vertical(a, b, item.x0, item.delta)
        elif isinstance(item, PoleLadder):
            cand = _ellipse_alpha_vertical(a, b, item.x0, item.first_height)
        elif isinstance(item, Entire):
            continue
        else:
            raise TypeError(f"unknown singularity item {item!r}")
        alpha = np.minimum(alpha, cand)
    return float(alpha) if alpha.ndim == 0 else alpha


def analytic_bound(alpha, n_nodes, m=0, bound_M=1.0):
    """4 pi M / (exp(alpha (N - m)) - 1); +inf once N <= m. Vectorized."""
    alpha = np.asarray(alpha, dtype=float)
    eff = np.asarray(n_nodes, dtype=float) - m
    with np.errstate(divide="ignore", over="ignore"):
        bound = np.where(eff > 0.0, 4.0 * np.pi * bound_M / np.expm1(alpha * np.maximum(eff, 0.0)), np.inf)
    return float(bound) if bound.ndim == 0 else bound


def error_bound(plan):
    """Exponential (analytic) bound and the smooth-case scale 2 pi^3 / (3 N^2).

    The smooth-case value still has to be multiplied by max |f''|.
    """
    m = plan.geometry.m
    return ErrorBound(
        analytic_bound=analytic_bound(plan.alpha, plan.n_nodes, m, plan.bound_M),
        smooth_bound_scale=2.0 * math.pi**3 / (3.0 * plan.n_nodes**2),
    )


def nodes_for_tolerance(alpha, m, tol, bound_M=1.0, n_max=N_MAX):
    """Smallest node count with analytic bound <= tol, clamped to [8, n_max].

    Vectorized over ``alpha``. Raises ``ToleranceError`` if any point needs
    more than ``n_max`` nodes.
    """
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    alpha = np.asarray(alpha, dtype=float)
    need = m + np.ceil(np.log1p(4.0 * np.pi * bound_M / tol) / alpha)
    # guard the ceil against rounding of the log: step up while the bound misses
    need = np.maximum(need, m + 1)
    too_big = need > n_max
    if np.any(too_big):
        worst = float(np.max(np.where(too_big, analytic_bound(alpha, n_max, m, bound_M), 0.0)))
        raise ToleranceError(
            f"tolerance {tol:g} needs more than {n_max} nodes; best bound at the cap is {worst:.3g}",
            achievable=worst)
    n = need.astype(np.int64)
    miss = analytic_bound(alpha, n, m, bound_M) > tol
    n = np.where(miss, n + 1, n)
    n = np.clip(n, max(N_MIN, m + 1), n_max)
    return int(n) if n.ndim == 0 else n


def polynomial_degree(sing):
    """Degree of p when every item is a polynomial of known degree, else None."""
    degrees = [item.degree if isinstance(item, Entire) else None for item in sing]
    if not degrees or any(d is None for d in degrees):
        return None
    return max(degrees)


def exact_node_count(sing, m, n_max=N_MAX):
    """Node count that integrates a polynomial p exactly, or None.

    p(A + B cos s) cos(m s) is then a trigonometric polynomial of degree
    L + m, which the N-node rule integrates exactly once N > L + m.
    """
    degree = polynomial_degree(sing)
    if degree is None or degree + m + 1 > n_max:
        return None
    return max(N_MIN, degree + m + 1)


def choose_n(sing, geom, tol, bound_M=1.0, n_max=N_MAX):
    """Plan the cheapest rule meeting ``tol`` at one point.

    The plan is flagged exact where B = 0 or p is a polynomial.
    """
    if geom.B == 0.0:
        return TrapezoidPlan(geom, math.inf, bound_M, max(N_MIN, geom.m + 1), 0.0, exact=True)
    alpha = strip_half_width(sing, geom)
    n_exact = exact_node_count(sing, geom.m, n_max)
    if n_exact is not None:
        return TrapezoidPlan(geom, alpha, bound_M, n_exact, 0.0, exact=True)
    n = nodes_for_tolerance(alpha, geom.m, tol, bound_M, n_max)
    return TrapezoidPlan(geom, alpha, bound_M, n, analytic_bound(alpha, n, geom.m, bound_M))


def plan_fixed(sing, geom, n_nodes, bound_M=1.0):
    """Plan for a caller-chosen node count; records the bound it attains."""
    if geom.B == 0.0:
        return TrapezoidPlan(geom, math.inf, bound_M, n_nodes, 0.0, exact=True)
    alpha = strip_half_width(sing, geom)
    return TrapezoidPlan(geom, alpha, bound_M, n_nodes,
                         analytic_bound(alpha, n_nodes, geom.m, bound_M))


def scattering_kernel(p, x, y, m=0, tol=None, n_nodes=None, bound_M=1.0):
    """Evaluate P_m(x, y) with either an error target or a fixed node count.

    Exactly one of ``tol`` and ``n_nodes`` must be given. Returns a
    ``KernelPoint`` carrying the nodes used, alpha and the predicted error.
    """
    if (tol is None) == (n_nodes is None):
        raise ValueError("give exactly one of tol and n_nodes")
    geom = IntegrandGeometry.from_xy(x, y, m)
    sing = p.singularities()
    if tol is not None:
        plan = choose_n(sing, geom, tol, bound_M)
    else:
        plan = plan_fixed(sing, geom, int(n_nodes), bound_M)
    value = trapezoid_kernel(p, x, y, m, plan.n_nodes)
    return KernelPoint(value, plan.n_nodes, plan.alpha, plan.predicted_error)
