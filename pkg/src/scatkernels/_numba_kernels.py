"""numba-compiled hot loops.

Every function here has a counterpart with the same signature in
``_numpy_kernels``; ``_backend`` picks one of the two modules at import time.
"""

import math

import numpy as np
from numba import njit

from ._tables import HG, RATIONAL, SECH, LEGENDRE

UNIT_ROUNDOFF = 2.0**-53
AGM_MAX_ITER = 16


@njit(cache=True)
def _agm_one(m, mc):
    a = 1.0
    g = math.sqrt(mc)
    c = math.sqrt(m)
    c_sum = 0.5 * m
    n = 0
    while a - g > 4.0 * UNIT_ROUNDOFF * a and n < AGM_MAX_ITER:
        a_next = 0.5 * (a + g)
        g = math.sqrt(a * g)
        c = c * c / (4.0 * a_next)
        a = a_next
        n += 1
        c_sum += 2.0 ** (n - 1) * c * c
    return a, g, c_sum, n


@njit(cache=True)
def agm_arrays(m, mc):
    """Terminal AGM state for each (m, 1 - m) pair; 0 <= m < 1."""
    size = m.size
    a_out = np.empty(size)
    g_out = np.empty(size)
    s_out = np.empty(size)
    n_out = np.empty(size, dtype=np.int64)
    for i in range(size):
        a, g, s, n = _agm_one(m[i], mc[i])
        a_out[i] = a
        g_out[i] = g
        s_out[i] = s
        n_out[i] = n
    return a_out, g_out, s_out, n_out


@njit(cache=True)
def _legendre_sum(coeffs, start, length, t):
    # forward three-term recurrence, summed on the fly
    if length == 0:
        return 0.0
    total = coeffs[start]
    if length == 1:
        return total
    prev = 1.0
    cur = t
    total += coeffs[start + 1] * cur
    for n in range(1, length - 1):
        nxt = ((2 * n + 1) * t * cur - n * prev) / (n + 1)
        prev = cur
        cur = nxt
        total += coeffs[start + n + 1] * cur
    return total


@njit(cache=True)
def _int_exponent(gamma):
    # small integer exponents use repeated products instead of pow
    if gamma == math.floor(gamma) and 1.0 <= gamma <= 16.0:
        return int(gamma)
    return 0


@njit(cache=True)
def _inv_pow(q, gamma, k):
    if k == 0:
        return q ** (-gamma)
    r = q
    for _ in range(k - 1):
        r *= q
    return 1.0 / r


@njit(cache=True)
def _phase_one(table, coeffs, t):
    total = 0.0
    for j in range(table.shape[0]):
        kind = int(table[j, 0])
        w = table[j, 1]
        if kind == HG:
            g = table[j, 2]
            one_m_g = 1.0 - g
            den = one_m_g * one_m_g + 2.0 * g * (1.0 - t)
            total += w * table[j, 3] / (den * math.sqrt(den))
        elif kind == RATIONAL:
            u = (t - table[j, 2]) / table[j, 3]
            gamma = table[j, 4]
            total += w * table[j, 5] * _inv_pow(1.0 + u * u, gamma, _int_exponent(gamma))
        elif kind == SECH:
            u = abs((t - table[j, 2]) / table[j, 3])
            e = math.exp(-u)
            total += w * table[j, 4] * 2.0 * e / (1.0 + e * e)
        else:
            total += w * _legendre_sum(coeffs, int(table[j, 2]), int(table[j, 3]), t)
    return total


@njit(cache=True)
def phase_eval(table, coeffs, t):
    out = np.empty(t.size)
    for i in range(t.size):
        out[i] = _phase_one(table, coeffs, t[i])
    return out


@njit(cache=True)
def legendre_sum(coeffs, t):
    out = np.empty(t.size)
    for i in range(t.size):
        out[i] = _legendre_sum(coeffs, 0, coeffs.size, t[i])
    return out


@njit(cache=True)
def _clamp(t):
    if t > 1.0:
        return 1.0
    if t < -1.0:
        return -1.0
    return t


@njit(cache=True)
def _cos_table(n):
    out = np.empty(n)
    two_pi = 2.0 * math.pi
    for j in range(n):
        out[j] = math.cos(two_pi * j / n)
    return out


@njit(cache=True)
def _trapezoid_one(table, coeffs, a, b, m, n, cos_tab):
    if b == 0.0:
        if m == 0:
            return _phase_one(table, coeffs, a)
        return 0.0
    # node k = N (s = 0) first, then the folded pairs k, N - k
    s = _phase_one(table, coeffs, _clamp(a + b))
    comp = 0.0
    half = (n - 1) // 2
    for k in range(1, half + 1):
        v = 2.0 * _phase_one(table, coeffs, _clamp(a + b * cos_tab[k]))
        if m != 0:
            v *= cos_tab[(m * k) % n]
        # Neumaier compensated accumulation
        tmp = s + v
        if abs(s) >= abs(v):
            comp += (s - tmp) + v
        else:
            comp += (v - tmp) + s
        s = tmp
    if n % 2 == 0:
        v = _phase_one(table, coeffs, _clamp(a - b))
        if m % 2 == 1:
            v = -v
        tmp = s + v
        if abs(s) >= abs(v):
            comp += (s - tmp) + v
        else:
            comp += (v - tmp) + s
        s = tmp
    total = s + comp
    if m == 0:
        return total / n
    return 2.0 * total / n


@njit(cache=True)
def _phase_into(table, coeffs, t, out):
    # same per-point arithmetic as _phase_one, with the component loop outermost
    out[:] = 0.0
    for j in range(table.shape[0]):
        kind = int(table[j, 0])
        w = table[j, 1]
        if kind == HG:
            g = table[j, 2]
            c = table[j, 3]
            one_m_g = 1.0 - g
            for i in range(t.size):
                den = one_m_g * one_m_g + 2.0 * g * (1.0 - t[i])
                out[i] += w * c / (den * math.sqrt(den))
        elif kind == RATIONAL:
            x0, delta, gamma, c = table[j, 2], table[j, 3], table[j, 4], table[j, 5]
            k = _int_exponent(gamma)
            for i in range(t.size):
                u = (t[i] - x0) / delta
                out[i] += w * c * _inv_pow(1.0 + u * u, gamma, k)
        elif kind == SECH:
            x0, delta, c = table[j, 2], table[j, 3], table[j, 4]
            for i in range(t.size):
                e = math.exp(-abs((t[i] - x0) / delta))
                out[i] += w * c * 2.0 * e / (1.0 + e * e)
        else:
            start, length = int(table[j, 2]), int(table[j, 3])
            for i in range(t.size):
                out[i] += w * _legendre_sum(coeffs, start, length, t[i])


@njit(cache=True)
def _accumulate(s, comp, v):
    # Neumaier compensated s += v, elementwise
    for i in range(s.size):
        tmp = s[i] + v[i]
        big = abs(s[i]) >= abs(v[i])
        hi = s[i] if big else v[i]
        lo = v[i] if big else s[i]
        comp[i] += (hi - tmp) + lo
        s[i] = tmp


@njit(cache=True)
def _trapezoid_group(table, coeffs, a, b, m, n):
    """Kernel values for points with B > 0 sharing the node count n.

    Nodes are the outer loop and points the inner one, which keeps the inner
    loops free of per-point control flow. Each point sees exactly the
    operations of _trapezoid_one.
    """
    cos_tab = _cos_table(n)
    size = a.size
    t = np.empty(size)
    v = np.empty(size)
    s = np.empty(size)
    comp = np.zeros(size)
    for i in range(size):
        t[i] = _clamp(a[i] + b[i])
    _phase_into(table, coeffs, t, s)
    for k in range(1, (n - 1) // 2 + 1):
        ck = cos_tab[k]
        for i in range(size):
            t[i] = _clamp(a[i] + b[i] * ck)
        _phase_into(table, coeffs, t, v)
        if m != 0:
            cm = cos_tab[(m * k) % n]
            for i in range(size):
                v[i] = 2.0 * v[i] * cm
        else:
            for i in range(size):
                v[i] = 2.0 * v[i]
        _accumulate(s, comp, v)
    if n % 2 == 0:
        for i in range(size):
            t[i] = _clamp(a[i] - b[i])
        _phase_into(table, coeffs, t, v)
        if m % 2 == 1:
            for i in range(size):
                v[i] = -v[i]
        _accumulate(s, comp, v)
    out = np.empty(size)
    for i in range(size):
        total = s[i] + comp[i]
        out[i] = total / n if m == 0 else 2.0 * total / n
    return out


@njit(cache=True)
def trapezoid_points(table, coeffs, a, b, m, n_nodes):
    """Trapezoid-rule kernel value at each (A, B) with its own node count.

    Points sharing a node count are evaluated together; each value depends
    only on its own point, never on which other points share the call.
    """
    out = np.empty(a.size)
    inner = np.empty(a.size, dtype=np.int64)
    count = 0
    for i in range(a.size):
        if b[i] == 0.0:
            out[i] = _phase_one(table, coeffs, a[i]) if m == 0 else 0.0
        else:
            inner[count] = i
            count += 1
    inner = inner[:count]
    order = inner[np.argsort(n_nodes[inner], kind="mergesort")]
    lo = 0
    while lo < order.size:
        n = n_nodes[order[lo]]
        hi = lo
        while hi < order.size and n_nodes[order[hi]] == n:
            hi += 1
        idx = order[lo:hi]
        vals = _trapezoid_group(table, coeffs, a[idx], b[idx], m, n)
        for j in range(idx.size):
            out[idx[j]] = vals[j]
        lo = hi
    return out
