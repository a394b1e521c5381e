"""Flat-array encoding of phase functions shared by both kernel backends.

A phase function becomes a ``(n_components, 6)`` float table plus one
concatenated array of Legendre coefficients. Row layout::

    HG        kind, weight, g,  0.5 (1 - g^2), 0,     0
    RATIONAL  kind, weight, x0, delta,         gamma, norm
    SECH      kind, weight, x0, delta,         norm,  0
    LEGENDRE  kind, weight, offset, length,    0,     0
"""

HG = 0
RATIONAL = 1
SECH = 2
LEGENDRE = 3

TABLE_WIDTH = 6
