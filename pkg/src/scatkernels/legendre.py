"""Legendre polynomials and truncated Legendre-series kernels.

The series path is the classical baseline for the m = 0 kernel,

    P_0(x, y) = sum_n alpha_n L_n(x) L_n(y),

given the Legendre coefficients alpha_n of the phase function. It is kept
transparent on purpose: truncation is by term count only.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import DomainError


@dataclass(frozen=True)
class LegendreSeries:
    """Coefficients alpha_0 ... alpha_{N-1} of sum_n alpha_n L_n(t)."""

    coefficients: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coefficients, dtype=float)
        if coeffs.ndim != 1 or coeffs.size == 0:
            raise ValueError("a Legendre series needs a non-empty 1-D coefficient list")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coefficients", coeffs)

    def __len__(self):
        return self.coefficients.size


def _check_unit(name, value):
    if np.any(np.abs(value) > 1.0) or np.any(np.isnan(value)):
        raise DomainError(f"{name} must lie in [-1, 1]")


def legendre_eval(x, n_max):
    """Return ``[L_0(x), ..., L_{n_max}(x)]`` by the three-term recurrence.

    ``x`` may be a scalar or array; the result has a leading axis of length
    ``n_max + 1``.
    """
    x = np.asarray(x, dtype=float)
    _check_unit("x", x)
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = x
    for n in range(1, n_max):
        out[n + 1] = ((2 * n + 1) * x * out[n] - n * out[n - 1]) / (n + 1)
    return out


def hg_legendre_coeffs(g, n_terms):
    """Legendre coefficients (2l + 1)/2 * g**l of the Henyey-Greenstein density."""
    if not abs(g) < 1.0:
        raise DomainError(f"asymmetry factor must satisfy |g| < 1, got {g!r}")
    ell = np.arange(n_terms)
    return LegendreSeries(0.5 * (2 * ell + 1) * float(g) ** ell)


def p0_series(series, x, y):
    """Truncated series sum_n alpha_n L_n(x) L_n(y), vectorized over x and y."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    _check_unit("x", x)
    _check_unit("y", y)
    coeffs = series.coefficients
    total = np.full(x.shape, coeffs[0])
    if coeffs.size == 1:
        return total if total.ndim else float(total)
    px_prev, px = np.ones_like(x), x.copy()
    py_prev, py = np.ones_like(y), y.copy()
    total = total + coeffs[1] * px * py
    for n in range(1, coeffs.size - 1):
        px_prev, px = px, ((2 * n + 1) * x * px - n * px_prev) / (n + 1)
        py_prev, py = py, ((2 * n + 1) * y * py - n * py_prev) / (n + 1)
        total += coeffs[n + 1] * px * py
    return total if total.ndim else float(total)


def hg_series(x, y, g, n_terms):
    """Henyey-Greenstein m = 0 kernel from its first ``n_terms`` Legendre terms."""
    return p0_series(hg_legendre_coeffs(g, n_terms), x, y)


def read_coefficients(path):
    """Read a Legendre coefficient file: one value per line, '#' comments.

    The index is implicit, starting at 0.
    """
    values = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise ValueError(f"{path}:{lineno}: not a number: {line!r}") from None
    if not values:
        raise ValueError(f"{path}: no coefficients found")
    return LegendreSeries(values)
