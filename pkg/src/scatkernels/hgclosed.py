"""Closed-form Henyey-Greenstein kernels via complete elliptic integrals.

With ``B = sqrt(1 - x**2) sqrt(1 - y**2)`` and

    w_+- = 1 + g**2 - 2 g (x y -+ B),

the generating-function kernel and the m = 0 HG scattering kernel are

    H0(x, y; g) = 2 / (pi sqrt(w_+)) * K0(4 g B / w_+)
    H(x, y; g)  = (1 - g**2) / (pi w_- sqrt(w_+)) * E0(4 g B / w_+).

Everything is arranged so that no difference of nearly equal numbers is
formed: ``w_-`` goes through ``(x - y)**2``, and the elliptic modulus is
handed over together with its complement ``w_- / w_+``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .elliptic import e0, k0
from .exceptions import DomainError, NearSingularError

G_SINGULAR_MARGIN = 1e-14


@dataclass(frozen=True)
class UPair:
    """``u_plus``/``u_minus`` (the w_+- above). For g >= 0, u_plus >= u_minus."""

    u_plus: float
    u_minus: float


def _check(x, y, g):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(np.abs(x) > 1.0) or np.any(np.abs(y) > 1.0):
        raise DomainError("x and y must lie in [-1, 1]")
    if not abs(g) < 1.0:
        raise DomainError(f"asymmetry factor must satisfy |g| < 1, got {g!r}")
    if abs(g) > 1.0 - G_SINGULAR_MARGIN:
        raise NearSingularError(f"|g| = {abs(g)!r} is within {G_SINGULAR_MARGIN} of 1")
    return np.broadcast_arrays(x, y)


def _geometry(x, y):
    """B, 1 - xy - B and 1 + xy - B, the last two without cancellation."""
    b = np.sqrt((1.0 - x) * (1.0 + x)) * np.sqrt((1.0 - y) * (1.0 + y))
    xy = x * y
    # (1 - xy)**2 - (1 - x**2)(1 - y**2) = (x - y)**2, likewise with x + y
    den_minus = 1.0 - xy + b
    den_plus = 1.0 + xy + b
    with np.errstate(invalid="ignore", divide="ignore"):
        d_minus = np.where(den_minus > 0.0, (x - y) ** 2 / den_minus, 0.0)
        d_plus = np.where(den_plus > 0.0, (x + y) ** 2 / den_plus, 0.0)
    return b, xy, d_minus, d_plus


def _w_pair(x, y, g):
    b, xy, d_minus, d_plus = _geometry(x, y)
    if g >= 0.0:
        base = (1.0 - g) ** 2
        w_plus = base + 2.0 * g * (1.0 - xy + b)
        # equal when B = 0; the two formulas may round apart there
        w_minus = np.minimum(base + 2.0 * g * d_minus, w_plus)
    else:
        base = (1.0 + g) ** 2
        w_minus = base - 2.0 * g * (1.0 + xy + b)
        w_plus = np.minimum(base - 2.0 * g * d_plus, w_minus)
    return b, w_plus, w_minus


def _out(value, x):
    return float(value) if np.ndim(value) == 0 and np.ndim(x) == 0 else value


def u_pair(x, y, g):
    """The pair w_+ and w_- for scalar or array (x, y)."""
    xa, ya = _check(x, y, g)
    _, w_plus, w_minus = _w_pair(xa, ya, float(g))
    return UPair(_out(w_plus, x), _out(w_minus, x))


def h0_closed(x, y, g):
    """sum_l g**l L_l(x) L_l(y) in closed form (first-kind integral)."""
    xa, ya = _check(x, y, g)
    g = float(g)
    b, w_plus, w_minus = _w_pair(xa, ya, g)
    value = 2.0 / (math.pi * np.sqrt(w_plus)) * k0(4.0 * g * b / w_plus, w_minus / w_plus)
    return _out(value, x)


def h0_prudnikov(x, y, g):
    """Same kernel through the Landen-type form with parameter k = K0(k**2)."""
    xa, ya = _check(x, y, g)
    g = float(g)
    b, w_plus, w_minus = _w_pair(xa, ya, g)
    rp, rm = np.sqrt(w_plus), np.sqrt(w_minus)
    s = rp + rm
    # rp - rm = (w_plus - w_minus) / s = 4 g B / s
    k = 4.0 * g * b / (s * s)
    value = 4.0 / (math.pi * s) * k0(k * k, 4.0 * rp * rm / (s * s))
    return _out(value, x)


def h_closed(x, y, g):
    """Henyey-Greenstein m = 0 scattering kernel in closed form.

    Accurate for g very close to +-1: at g = 1 - eps the relative error is
    roughly unit roundoff / eps.
    """
    xa, ya = _check(x, y, g)
    g = float(g)
    b, w_plus, w_minus = _w_pair(xa, ya, g)
    one_minus_g2 = (1.0 - g) * (1.0 + g)
    value = (one_minus_g2 / (math.pi * w_minus * np.sqrt(w_plus))
             * e0(4.0 * g * b / w_plus, w_minus / w_plus))
    return _out(value, x)
