"""Complete elliptic integrals K0(m), E0(m) in the modulus convention.

``m`` is the modulus (``m = k**2``), so ``K0(m) = K(sqrt(m))`` in the
parameter convention. Both integrals come from one arithmetic-geometric
mean run::

    a_0 = 1, g_0 = sqrt(1 - m), c_0 = sqrt(m)
    a_{n+1} = (a_n + g_n) / 2,  g_{n+1} = sqrt(a_n g_n),  c_{n+1} = c_n**2 / (4 a_{n+1})
    K0 = pi / (2 M),  E0 = K0 * (1 - sum_n 2**(n-1) c_n**2)

with ``M`` the common limit of ``a_n`` and ``g_n``.

Every function accepts an optional complement ``mc = 1 - m``. Callers that
know ``1 - m`` more accurately than ``m`` itself (``m`` close to 1) should
pass it; it is what fixes ``g_0``.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .exceptions import DomainError

UNIT_ROUNDOFF = 2.0**-53
AGM_MAX_ITER = 16


@dataclass(frozen=True)
class AgmState:
    """One state of the AGM iteration. ``c_sum`` is sum_{j<=n} 2**(j-1) c_j**2."""

    a_n: float
    g_n: float
    c_n: float
    n: int
    c_sum: float


@dataclass(frozen=True)
class EllipticPair:
    modulus_m: float
    k0: float
    e0: float
    iterations: int
    final_gap: float


def _check_agm_domain(m, mc):
    if mc is None:
        mc = 1.0 - m
    if not (0.0 <= m < 1.0) or not mc > 0.0:
        raise DomainError(f"AGM needs 0 <= m < 1, got m={m!r}")
    return mc


def agm_iterates(m, mc=None):
    """Yield every AGM state from ``n = 0`` to termination.

    Termination: ``a_n - g_n <= 4 u a_n`` (u the unit roundoff) or ``n = 16``.
    """
    mc = _check_agm_domain(m, mc)
    a, g, c = 1.0, math.sqrt(mc), math.sqrt(m)
    c_sum = 0.5 * m
    n = 0
    yield AgmState(a, g, c, n, c_sum)
    while a - g > 4.0 * UNIT_ROUNDOFF * a and n < AGM_MAX_ITER:
        a_next = 0.5 * (a + g)
        g = math.sqrt(a * g)
        c = c * c / (4.0 * a_next)
        a = a_next
        n += 1
        c_sum += 2.0 ** (n - 1) * c * c
        yield AgmState(a, g, c, n, c_sum)


def agm_sequence(m, mc=None):
    """Terminal AGM state for modulus ``m`` in [0, 1)."""
    for state in agm_iterates(m, mc):
        pass
    return state


def _as_pair(m, mc):
    m = np.asarray(m, dtype=float)
    mc = 1.0 - m if mc is None else np.asarray(mc, dtype=float)
    m, mc = np.broadcast_arrays(m, mc)
    return m, mc


def _ke(m, mc, need_e):
    """K0 and E0 for arrays with m < 1 (validated by the caller)."""
    m_flat = np.ravel(m).astype(float)
    mc_flat = np.ravel(mc).astype(float)
    neg = m_flat < 0.0
    # imaginary-modulus transformation maps m < 0 into (0, 1)
    m_work = np.where(neg, -m_flat / np.where(neg, mc_flat, 1.0), m_flat)
    mc_work = np.where(neg, 1.0 / np.where(neg, mc_flat, 1.0), mc_flat)
    a, _, c_sum, _ = kernels.agm_arrays(np.ascontiguousarray(m_work), np.ascontiguousarray(mc_work))
    k = 0.5 * math.pi / a
    root = np.sqrt(np.where(neg, mc_flat, 1.0))
    k_out = np.where(neg, k / root, k)
    if not need_e:
        return k_out.reshape(np.shape(m)), None
    e = k * (1.0 - c_sum)
    e_out = np.where(neg, e * root, e)
    return k_out.reshape(np.shape(m)), e_out.reshape(np.shape(m))


def _scalar_or_array(value, like):
    return float(value) if np.ndim(like) == 0 else value


def k0(m, mc=None):
    """Complete elliptic integral of the first kind, K0(m) for real m < 1.

    Accepts scalars or arrays; ``mc`` optionally supplies ``1 - m``.
    """
    m_arr, mc_arr = _as_pair(m, mc)
    if np.any(~(m_arr < 1.0)) or np.any(~(mc_arr > 0.0)):
        raise DomainError("K0(m) requires m < 1 (branch cut along [1, inf))")
    k, _ = _ke(m_arr, mc_arr, need_e=False)
    return _scalar_or_array(k, m)


def e0(m, mc=None):
    """Complete elliptic integral of the second kind, E0(m) for real m <= 1."""
    m_arr, mc_arr = _as_pair(m, mc)
    if np.any(~(m_arr <= 1.0)) or np.any(~(mc_arr >= 0.0)):
        raise DomainError("E0(m) requires m <= 1")
    at_one = (m_arr == 1.0) | (mc_arr == 0.0)
    safe_m = np.where(at_one, 0.0, m_arr)
    safe_mc = np.where(at_one, 1.0, mc_arr)
    _, e = _ke(safe_m, safe_mc, need_e=True)
    e = np.where(at_one, 1.0, e)
    return _scalar_or_array(e, m)


def k0_e0(m, mc=None):
    """Both integrals from a single AGM run; m < 1."""
    m_arr, mc_arr = _as_pair(m, mc)
    if np.any(~(m_arr < 1.0)) or np.any(~(mc_arr > 0.0)):
        raise DomainError("K0(m) requires m < 1 (branch cut along [1, inf))")
    k, e = _ke(m_arr, mc_arr, need_e=True)
    return _scalar_or_array(k, m), _scalar_or_array(e, m)


def elliptic_pair(m, mc=None):
    """K0, E0 and AGM diagnostics for one modulus in [0, 1)."""
    state = agm_sequence(m, mc)
    k = 0.5 * math.pi / state.a_n
    return EllipticPair(
        modulus_m=m,
        k0=k,
        e0=k * (1.0 - state.c_sum),
        iterations=state.n,
        final_gap=abs(state.a_n - state.g_n),
    )


def half_period_integrals(alpha, beta):
    """Integrals over [0, pi] of (alpha - beta cos s)**(-1/2) and (alpha - beta cos s)**(1/2).

    Requires ``alpha > |beta|``. A negative ``beta`` is folded onto ``|beta|``
    through s -> pi - s, so the elliptic modulus ``2|beta| / (alpha + |beta|)``
    always lies in [0, 1).
    """
    if not alpha > abs(beta):
        raise DomainError(f"need alpha > |beta|, got alpha={alpha!r}, beta={beta!r}")
    beta = abs(beta)
    total = alpha + beta
    m = 2.0 * beta / total
    mc = (alpha - beta) / total
    k, e = k0_e0(m, mc)
    root = math.sqrt(total)
    return 2.0 / root * k, 2.0 * root * e
