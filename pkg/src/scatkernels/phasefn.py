"""Phase functions: normalized densities on [-1, 1] with singularity metadata.

Each phase function knows where it stops being analytic in the complex
plane. That catalog is what the quadrature module turns into a strip width
and hence a node count.

Phase-spec text format, one component per line::

    hg g=<real> w=<real>
    f1 x0=<real> delta=<real> gamma=<real> w=<real>
    f2 x0=<real> delta=<real> w=<real>
    legendre file=<path> w=<real>

``#`` starts a comment, keys may come in any order and ``w`` defaults to 1
for single-component documents.
"""

import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy import integrate

from . import _tables
from ._backend import kernels
from .exceptions import DomainError, PhaseSpecError
from .legendre import LegendreSeries, read_coefficients

NORMALIZATION_ABS_TOL = 1e-12


# -- singularity catalog ---------------------------------------------------

@dataclass(frozen=True)
class RealRay:
    """Non-analytic on the real ray from ``x_s`` out to ``direction * inf``."""

    x_s: float
    direction: int

    def __post_init__(self):
        if not abs(self.x_s) > 1.0:
            raise DomainError(f"a real-ray singularity must lie outside [-1, 1], got {self.x_s}")


@dataclass(frozen=True)
class VerticalCut:
    """Branch cuts from ``x0 +- i delta`` to ``x0 +- i inf``."""

    x0: float
    delta: float

    def __post_init__(self):
        if not self.delta > 0.0:
            raise DomainError("delta must be positive")


@dataclass(frozen=True)
class PoleLadder:
    """Poles at ``x0 +- i delta (pi/2 + n pi)``, n = 0, 1, ..."""

    x0: float
    delta: float
    first_height: float = None

    def __post_init__(self):
        if not self.delta > 0.0:
            raise DomainError("delta must be positive")
        if self.first_height is None:
            object.__setattr__(self, "first_height", 0.5 * math.pi * self.delta)


@dataclass(frozen=True)
class Entire:
    """No finite singularity. ``degree`` is set when p is a polynomial of that degree."""

    degree: int | None = None


@dataclass(frozen=True)
class SingularitySet:
    items: tuple = ()

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)


# -- phase functions -------------------------------------------------------

class PhaseFunction:
    """Base class. Subclasses provide ``_rows`` and ``singularities``."""

    def __call__(self, t):
        return eval_phase(self, t)

    def _rows(self, weight, offset):
        """Return (table rows, Legendre coefficient chunks) for this component."""
        raise NotImplementedError

    def singularities(self):
        raise NotImplementedError

    @cached_property
    def compiled(self):
        """Flat ``(table, coeffs)`` encoding consumed by the kernels."""
        rows, chunks = self._rows(1.0, 0)
        table = np.array(rows, dtype=float).reshape(-1, _tables.TABLE_WIDTH)
        coeffs = np.concatenate(chunks) if chunks else np.zeros(0)
        return np.ascontiguousarray(table), np.ascontiguousarray(coeffs, dtype=float)


@dataclass(frozen=True, eq=False)
class HenyeyGreenstein(PhaseFunction):
    g: float

    def __post_init__(self):
        if not abs(self.g) < 1.0:
            raise DomainError(f"asymmetry factor must satisfy |g| < 1, got {self.g!r}")

    def _rows(self, weight, offset):
        g = float(self.g)
        return [[_tables.HG, weight, g, 0.5 * (1.0 - g) * (1.0 + g), 0.0, 0.0]], []

    def singularities(self):
        if self.g == 0.0:
            return SingularitySet((Entire(0),))
        x_s = (1.0 + self.g * self.g) / (2.0 * self.g)
        return SingularitySet((RealRay(x_s, 1 if self.g > 0 else -1),))


def _rational_shape(t, x0, delta, gamma):
    return (1.0 + ((t - x0) / delta) ** 2) ** (-gamma)


def _sech_shape(t, x0, delta):
    e = np.exp(-np.abs((t - x0) / delta))
    return 2.0 * e / (1.0 + e * e)


def normalization_constant(kind, **params):
    """Constant C making C * shape integrate to 1 over [-1, 1].

    ``kind`` is ``"hg"`` (already normalized, returns 1), ``"f1"`` with
    ``x0, delta, gamma`` or ``"f2"`` with ``x0, delta``. The integral is
    done by adaptive quadrature to an absolute tolerance of 1e-12.
    """
    if kind == "hg":
        return 1.0
    x0, delta = float(params["x0"]), float(params["delta"])
    if not delta > 0.0:
        raise DomainError("delta must be positive")
    if kind == "f1":
        gamma = float(params["gamma"])
        if not gamma > 0.0:
            raise DomainError("gamma must be positive")
        shape = lambda t: _rational_shape(t, x0, delta, gamma)  # noqa: E731
    elif kind == "f2":
        shape = lambda t: float(_sech_shape(t, x0, delta))  # noqa: E731
    else:
        raise ValueError(f"unknown phase function kind {kind!r}")
    # split at the peak and at a few widths either side so QUADPACK sees it
    breaks = [-1.0, 1.0]
    for offset in (-10.0, -1.0, 0.0, 1.0, 10.0):
        b = x0 + offset * delta
        if -1.0 < b < 1.0:
            breaks.append(b)
    breaks = sorted(set(breaks))
    total = 0.0
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        result = integrate.quad(
            shape, lo, hi, epsabs=NORMALIZATION_ABS_TOL / len(breaks), epsrel=1e-14,
            limit=200, full_output=1)
        value, err = result[:2]
        # a fourth element is QUADPACK's failure message
        if len(result) > 3 and err > NORMALIZATION_ABS_TOL:
            raise RuntimeError(f"normalization quadrature did not converge for {kind} {params}")
        total += value
    if not total > 0.0:
        raise RuntimeError(f"normalization integral vanished for {kind} {params}")
    return 1.0 / total


@dataclass(frozen=True, eq=False)
class RationalPeak(PhaseFunction):
    """C (1 + ((t - x0)/delta)**2)**(-gamma), a peak of width ~delta at x0."""

    x0: float
    delta: float
    gamma: float
    norm: float = None

    def __post_init__(self):
        if not self.delta > 0.0 or not self.gamma > 0.0:
            raise DomainError("RationalPeak needs delta > 0 and gamma > 0")
        if self.norm is None:
            object.__setattr__(self, "norm", normalization_constant(
                "f1", x0=self.x0, delta=self.delta, gamma=self.gamma))

    def _rows(self, weight, offset):
        return [[_tables.RATIONAL, weight, self.x0, self.delta, self.gamma, self.norm]], []

    def singularities(self):
        return SingularitySet((VerticalCut(self.x0, self.delta),))


@dataclass(frozen=True, eq=False)
class SechPeak(PhaseFunction):
    """C sech((t - x0)/delta)."""

    x0: float
    delta: float
    norm: float = None

    def __post_init__(self):
        if not self.delta > 0.0:
            raise DomainError("SechPeak needs delta > 0")
        if self.norm is None:
            object.__setattr__(self, "norm", normalization_constant(
                "f2", x0=self.x0, delta=self.delta))

    def _rows(self, weight, offset):
        return [[_tables.SECH, weight, self.x0, self.delta, self.norm, 0.0]], []

    def singularities(self):
        return SingularitySet((PoleLadder(self.x0, self.delta),))


@dataclass(frozen=True, eq=False)
class LegendreTabulated(PhaseFunction):
    """Phase function given by a finite Legendre series (a polynomial)."""

    series: LegendreSeries

    def __post_init__(self):
        if not isinstance(self.series, LegendreSeries):
            object.__setattr__(self, "series", LegendreSeries(self.series))
        if abs(2.0 * self.series.coefficients[0] - 1.0) > 1e-9:
            raise DomainError("a normalized Legendre phase function needs alpha_0 = 1/2")

    def _rows(self, weight, offset):
        n = len(self.series)
        return ([[_tables.LEGENDRE, weight, offset, n, 0.0, 0.0]],
                [self.series.coefficients])

    def singularities(self):
        return SingularitySet((Entire(self.series.coefficients.size - 1),))


@dataclass(frozen=True, eq=False)
class Mixture(PhaseFunction):
    """Convex combination ``sum w_i p_i``; weights positive and summing to 1."""

    components: tuple = field(default=())

    def __post_init__(self):
        comps = tuple((float(w), p) for w, p in self.components)
        if not comps:
            raise ValueError("a mixture needs at least one component")
        if any(not w > 0.0 for w, _ in comps):
            raise DomainError("mixture weights must be positive")
        if abs(math.fsum(w for w, _ in comps) - 1.0) > 1e-12:
            raise DomainError("mixture weights must sum to 1")
        object.__setattr__(self, "components", comps)

    def _rows(self, weight, offset):
        rows, chunks = [], []
        for w, p in self.components:
            sub_rows, sub_chunks = p._rows(weight * w, offset)
            rows += sub_rows
            chunks += sub_chunks
            offset += sum(c.size for c in sub_chunks)
        return rows, chunks

    def singularities(self):
        items = []
        for _, p in self.components:
            items.extend(p.singularities())
        return SingularitySet(tuple(items))


def eval_phase(p, t):
    """Evaluate phase function ``p`` at ``t`` (scalar or array, |t| <= 1)."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(np.abs(t_arr) > 1.0):
        raise DomainError("phase functions are evaluated on [-1, 1]")
    table, coeffs = p.compiled
    out = kernels.phase_eval(table, coeffs, np.ascontiguousarray(t_arr.ravel()))
    return float(out[0]) if t_arr.ndim == 0 else out.reshape(t_arr.shape)


def singularity_set(p):
    return p.singularities()


def multimodal_example():
    """Four-component test density: two HG lobes plus a rational and a sech peak."""
    return Mixture((
        (0.8, HenyeyGreenstein(0.9)),
        (0.1, HenyeyGreenstein(-0.6)),
        (0.04, RationalPeak(0.2, 0.01, 3.0)),
        (0.06, SechPeak(0.6, 0.02)),
    ))


# -- phase-spec parsing ----------------------------------------------------

_KEYS = {
    "hg": ("g",),
    "f1": ("x0", "delta", "gamma"),
    "f2": ("x0", "delta"),
    "legendre": ("file",),
}


def _parse_line(line, lineno):
    kind, *pairs = line.split()
    kind = kind.lower()
    if kind not in _KEYS:
        raise PhaseSpecError(f"unknown phase function kind {kind!r}", lineno)
    values = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not value:
            raise PhaseSpecError(f"expected key=value, got {pair!r}", lineno)
        if key in values:
            raise PhaseSpecError(f"duplicate key {key!r}", lineno)
        values[key] = value
    allowed = set(_KEYS[kind]) | {"w"}
    unknown = set(values) - allowed
    if unknown:
        raise PhaseSpecError(f"unknown key(s) for {kind}: {', '.join(sorted(unknown))}", lineno)
    missing = [k for k in _KEYS[kind] if k not in values]
    if missing:
        raise PhaseSpecError(f"{kind} is missing {', '.join(missing)}", lineno)
    parsed = {}
    for key, value in values.items():
        if key == "file":
            parsed[key] = value
            continue
        try:
            parsed[key] = float(value)
        except ValueError:
            raise PhaseSpecError(f"{key}={value!r} is not a number", lineno) from None
    return kind, parsed


def _build(kind, params, base_dir, lineno):
    try:
        if kind == "hg":
            return HenyeyGreenstein(params["g"])
        if kind == "f1":
            return RationalPeak(params["x0"], params["delta"], params["gamma"])
        if kind == "f2":
            return SechPeak(params["x0"], params["delta"])
        path = Path(params["file"])
        if not path.is_absolute() and base_dir is not None:
            path = Path(base_dir) / path
        return LegendreTabulated(read_coefficients(path))
    except (DomainError, ValueError) as exc:
        raise PhaseSpecError(str(exc), lineno) from exc
    except OSError as exc:
        raise PhaseSpecError(f"cannot read coefficient file: {exc}", lineno) from exc


def parse_phase_spec(text, base_dir=None):
    """Parse a phase-spec document into a normalized phase function.

    Relative ``legendre file=`` paths resolve against ``base_dir``. Weights
    within 1e-9 of summing to 1 are rescaled to sum to 1 exactly; anything
    further off is rejected.
    """
    entries = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            kind, params = _parse_line(line, lineno)
            entries.append((lineno, kind, params))
    if not entries:
        raise PhaseSpecError("no phase function components found")

    if len(entries) == 1:
        lineno, kind, params = entries[0]
        w = params.get("w", 1.0)
        if abs(w - 1.0) > 1e-9:
            raise PhaseSpecError(f"single component must have weight 1, got {w}", lineno)
        return _build(kind, params, base_dir, lineno)

    comps = []
    for lineno, kind, params in entries:
        if "w" not in params:
            raise PhaseSpecError("w is required when there are several components", lineno)
        if not params["w"] > 0.0:
            raise PhaseSpecError("weights must be positive", lineno)
        comps.append((params["w"], _build(kind, params, base_dir, lineno)))
    total = math.fsum(w for w, _ in comps)
    if abs(total - 1.0) > 1e-9:
        raise PhaseSpecError(f"weights sum to {total!r}, not 1")
    comps = [(w / total, p) for w, p in comps]
    # make the sum exactly 1 by absorbing the residue in the largest weight
    residue = 1.0 - math.fsum(w for w, _ in comps)
    if residue:
        i = max(range(len(comps)), key=lambda j: comps[j][0])
        comps[i] = (comps[i][0] + residue, comps[i][1])
    return Mixture(tuple(comps))


def load_phase_spec(path):
    path = Path(path)
    return parse_phase_spec(path.read_text(encoding="utf-8"), base_dir=path.parent)
