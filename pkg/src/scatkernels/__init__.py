"""Azimuthal scattering kernels for radiative-transfer phase functions.

Kernels P_m(x, y) are computed with the periodic trapezoidal rule under
a-priori error bounds derived from where the phase function stops being
analytic. The Henyey-Greenstein m = 0 kernel also has a closed form in
complete elliptic integrals.
"""

from ._backend import BACKEND
from .elliptic import e0, elliptic_pair, half_period_integrals, k0
from .exceptions import DomainError, NearSingularError, PhaseSpecError, ToleranceError
from .hgclosed import h0_closed, h0_prudnikov, h_closed
from .kernelgrid import convergence_study, eval_grid, write_csv, write_heatmap
from .phasefn import (
    HenyeyGreenstein, LegendreTabulated, Mixture, RationalPeak, SechPeak,
    eval_phase, load_phase_spec, multimodal_example, parse_phase_spec,
)
from .quadrature import choose_n, scattering_kernel, strip_half_width, trapezoid_kernel

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "DomainError", "HenyeyGreenstein", "LegendreTabulated", "Mixture",
    "NearSingularError", "PhaseSpecError", "RationalPeak", "SechPeak", "ToleranceError",
    "choose_n", "convergence_study", "e0", "elliptic_pair", "eval_grid", "eval_phase",
    "h0_closed", "h0_prudnikov", "h_closed", "half_period_integrals", "k0",
    "load_phase_spec", "multimodal_example", "parse_phase_spec", "scattering_kernel",
    "strip_half_width", "trapezoid_kernel", "write_csv", "write_heatmap",
]
