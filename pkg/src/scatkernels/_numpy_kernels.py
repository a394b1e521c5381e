"""Pure-numpy implementations of the hot loops.

Same signatures and node order as ``_numba_kernels``. Loops run over AGM
steps or quadrature nodes; each step is vectorized across evaluation points,
so the value at a point does not depend on how many other points share the
call.
"""

import math

import numpy as np

from ._tables import HG, RATIONAL, SECH, LEGENDRE

UNIT_ROUNDOFF = 2.0**-53
AGM_MAX_ITER = 16


def agm_arrays(m, mc):
    """Terminal AGM state for each (m, 1 - m) pair; 0 <= m < 1."""
    m = np.asarray(m, dtype=float)
    a = np.ones_like(m)
    g = np.sqrt(np.asarray(mc, dtype=float))
    c = np.sqrt(m)
    c_sum = 0.5 * m
    n = np.zeros(m.shape, dtype=np.int64)
    for step in range(1, AGM_MAX_ITER + 1):
        active = a - g > 4.0 * UNIT_ROUNDOFF * a
        if not active.any():
            break
        a_act, g_act = a[active], g[active]
        a_next = 0.5 * (a_act + g_act)
        g[active] = np.sqrt(a_act * g_act)
        c_act = c[active]
        c_act = c_act * c_act / (4.0 * a_next)
        c[active] = c_act
        a[active] = a_next
        n[active] = step
        c_sum[active] += 2.0 ** (step - 1) * c_act * c_act
    return a, g, c_sum, n


def _legendre_sum(coeffs, t):
    total = np.full(t.shape, coeffs[0] if coeffs.size else 0.0)
    if coeffs.size < 2:
        return total
    prev = np.ones_like(t)
    cur = t.copy()
    total += coeffs[1] * cur
    for n in range(1, coeffs.size - 1):
        prev, cur = cur, ((2 * n + 1) * t * cur - n * prev) / (n + 1)
        total += coeffs[n + 1] * cur
    return total


def _inv_pow(q, gamma):
    # small integer exponents use repeated products instead of pow
    if gamma == np.floor(gamma) and 1.0 <= gamma <= 16.0:
        r = q
        for _ in range(int(gamma) - 1):
            r = r * q
        return 1.0 / r
    return q ** (-gamma)


def legendre_sum(coeffs, t):
    return _legendre_sum(np.asarray(coeffs, dtype=float), np.asarray(t, dtype=float))


def phase_eval(table, coeffs, t):
    t = np.asarray(t, dtype=float)
    total = np.zeros(t.shape)
    for row in table:
        kind, w = int(row[0]), row[1]
        if kind == HG:
            g = row[2]
            den = (1.0 - g) * (1.0 - g) + 2.0 * g * (1.0 - t)
            total += w * row[3] / (den * np.sqrt(den))
        elif kind == RATIONAL:
            u = (t - row[2]) / row[3]
            total += w * row[5] * _inv_pow(1.0 + u * u, row[4])
        elif kind == SECH:
            e = np.exp(-np.abs((t - row[2]) / row[3]))
            total += w * row[4] * 2.0 * e / (1.0 + e * e)
        elif kind == LEGENDRE:
            start, length = int(row[2]), int(row[3])
            total += w * _legendre_sum(coeffs[start:start + length], t)
    return total


def _neumaier_add(s, comp, v):
    tmp = s + v
    big = np.abs(s) >= np.abs(v)
    comp += np.where(big, (s - tmp) + v, (v - tmp) + s)
    return tmp, comp


def _cos_tables(ns):
    """Concatenated tables cos(2 pi j / n), j < n, and each n's offset."""
    offsets, parts, pos = {}, [], 0
    for n in ns:
        offsets[int(n)] = pos
        parts.append([math.cos(2.0 * math.pi * j / n) for j in range(n)])
        pos += n
    return np.concatenate(parts), offsets


def trapezoid_points(table, coeffs, a, b, m, n_nodes):
    """Trapezoid-rule kernel value at each (A, B) with its own node count.

    Points are sorted by node count, largest first, so the points still
    active at node k form a prefix. Each point goes through the same
    operations in the same order as when evaluated alone.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n_nodes = np.asarray(n_nodes, dtype=np.int64)
    out = np.empty(a.shape)
    flat = b == 0.0
    if flat.any():
        out[flat] = phase_eval(table, coeffs, a[flat]) if m == 0 else 0.0
    idx = np.nonzero(~flat)[0]
    if idx.size == 0:
        return out
    idx = idx[np.argsort(-n_nodes[idx], kind="stable")]
    a_s, b_s, n_s = a[idx], b[idx], n_nodes[idx]
    half = (n_s - 1) // 2
    cos_flat, offsets = _cos_tables(np.unique(n_s))
    off = np.array([offsets[int(n)] for n in n_s], dtype=np.int64)

    s = phase_eval(table, coeffs, np.clip(a_s + b_s, -1.0, 1.0))
    comp = np.zeros_like(s)
    for k in range(1, int(half[0]) + 1):
        c = int(np.count_nonzero(half >= k))
        t = np.clip(a_s[:c] + b_s[:c] * cos_flat[off[:c] + k], -1.0, 1.0)
        v = 2.0 * phase_eval(table, coeffs, t)
        if m != 0:
            v *= cos_flat[off[:c] + (m * k) % n_s[:c]]
        s[:c], comp[:c] = _neumaier_add(s[:c], comp[:c], v)
    even = n_s % 2 == 0
    if even.any():
        v = phase_eval(table, coeffs, np.clip(a_s[even] - b_s[even], -1.0, 1.0))
        if m % 2 == 1:
            v = -v
        s[even], comp[even] = _neumaier_add(s[even], comp[even], v)
    total = s + comp
    out[idx] = total / n_s if m == 0 else 2.0 * total / n_s
    return out
