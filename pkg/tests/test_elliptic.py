import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from scatkernels.elliptic import (
    agm_iterates, agm_sequence, e0, elliptic_pair, half_period_integrals, k0, k0_e0,
)
from scatkernels.exceptions import DomainError

from oracles import quad_e0, quad_k0


def quad_e0(m):
    return integrate.quad(lambda s: math.sqrt(1.0 - m * math.sin(s) ** 2), 0, math.pi / 2,
                          epsabs=0, epsrel=2e-14, limit=200)[0]


def test_agm_at_zero_is_trivial():
    state = agm_sequence(0.0)
    assert state.a_n == state.g_n == 1.0
    assert state.c_sum == 0.0
    assert state.n <= 1


def test_agm_limit_half():
    # mpmath.agm(1, sqrt(0.5)) at 40 digits
    assert agm_sequence(0.5).a_n == pytest.approx(0.8472130847939790866, rel=1e-15)


def test_agm_iteration_cap_near_one():
    assert agm_sequence(1.0 - 1e-12).n <= 12


def test_agm_state_invariants():
    states = list(agm_iterates(0.9))
    assert states[0].a_n == 1.0 and states[0].g_n == pytest.approx(math.sqrt(0.1))
    assert states[0].c_n == pytest.approx(math.sqrt(0.9))
    for prev, cur in zip(states, states[1:]):
        assert cur.a_n >= cur.g_n >= 0.0
        assert cur.a_n - cur.g_n <= (prev.a_n - prev.g_n) ** 2 / (8.0 * cur.g_n) * (1 + 1e-12) + 1e-16
        assert cur.c_n == prev.c_n ** 2 / (4.0 * cur.a_n)
    final = states[-1]
    assert final.a_n - final.g_n <= 4 * 2.0**-53 * final.a_n


@pytest.mark.parametrize("m", [-0.1, 1.0, 1.5, float("nan")])
def test_agm_domain(m):
    with pytest.raises(DomainError):
        agm_sequence(m)


def test_known_values():
    assert k0(0.0) == pytest.approx(math.pi / 2, rel=1e-16)
    assert e0(0.0) == pytest.approx(math.pi / 2, rel=1e-16)
    assert e0(1.0) == 1.0
    # mpmath.ellipk / ellipe at 40 digits
    assert k0(0.5) == pytest.approx(1.8540746773013719184, rel=1e-14)
    assert e0(0.5) == pytest.approx(1.3506438810476755025, rel=1e-14)
    assert k0(0.9999) > 5.0
    assert k0(0.9999) == pytest.approx(quad_k0(0.9999), rel=1e-13)


@pytest.mark.parametrize("m", [1.0, 1.2])
def test_k0_domain(m):
    with pytest.raises(DomainError):
        k0(m)


def test_e0_domain():
    with pytest.raises(DomainError):
        e0(1.01)


@pytest.mark.parametrize("m", [0.0, 1e-8, 0.1, 0.5, 0.9, 0.999, 1 - 1e-9, 1 - 1e-10])
def test_against_quadrature(m):
    assert k0(m) == pytest.approx(quad_k0(m), rel=1e-13)
    assert e0(m) == pytest.approx(quad_e0(m), rel=1e-13)


@pytest.mark.parametrize("m", [-0.5, -3.0, -50.0])
def test_negative_modulus(m):
    assert k0(m) == pytest.approx(quad_k0(m), rel=1e-13)
    assert e0(m) == pytest.approx(quad_e0(m), rel=1e-13)


def test_complement_argument_matters_near_one():
    mc = 1e-14
    m = 1.0 - mc
    # with mc the result tracks the true modulus, not the rounded m
    exact = math.log(4.0 / math.sqrt(mc))  # leading asymptotic term
    assert k0(m, mc) == pytest.approx(exact, rel=1e-12)


def test_array_matches_scalar():
    ms = np.linspace(-2, 0.99, 37)
    ks, es = k0_e0(ms)
    for m, kv, ev in zip(ms, ks, es):
        assert kv == k0(float(m))
        assert ev == e0(float(m))
    assert k0(ms.reshape(37, 1)).shape == (37, 1)


def test_elliptic_pair_diagnostics():
    pair = elliptic_pair(0.5)
    assert pair.k0 == k0(0.5)
    assert pair.e0 == pytest.approx(e0(0.5), rel=1e-15)
    assert pair.k0 >= pair.e0
    assert pair.final_gap <= 4 * 2.0**-53
    assert pair.iterations <= 12


@pytest.mark.parametrize("m", [0.1 * i for i in range(1, 10)])
def test_derivative_identity(m):
    h = 1e-6
    fd = (k0(m + h) - k0(m - h)) / (2 * h)
    assert fd == pytest.approx((e0(m) / (1 - m) - k0(m)) / (2 * m), rel=1e-6)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.0, 0.999999), st.floats(1e-6, 1e-3))
def test_monotone(m, step):
    hi = min(m + step, 0.9999999)
    if hi <= m:
        return
    assert k0(hi) > k0(m)
    assert e0(hi) < e0(m)


def test_half_period_trivial():
    first, second = half_period_integrals(1.0, 0.0)
    assert first == pytest.approx(math.pi, rel=1e-15)
    assert second == pytest.approx(math.pi, rel=1e-15)
    first, _ = half_period_integrals(2.0, 1.0)
    assert first == pytest.approx(2 / math.sqrt(3) * k0(2 / 3), rel=1e-15)


@pytest.mark.parametrize("alpha,beta", [(1.9025, 1.596), (1.9025, -1.596), (3.0, 0.5), (1.0, 0.999)])
def test_half_period_quadrature(alpha, beta):
    first, second = half_period_integrals(alpha, beta)
    q1 = integrate.quad(lambda s: (alpha - beta * math.cos(s)) ** -0.5, 0, math.pi, epsabs=0, epsrel=2e-14, limit=200)[0]
    q2 = integrate.quad(lambda s: (alpha - beta * math.cos(s)) ** 0.5, 0, math.pi, epsabs=0, epsrel=2e-14, limit=200)[0]
    assert first == pytest.approx(q1, rel=1e-12)
    assert second == pytest.approx(q2, rel=1e-12)


def test_half_period_frozen():
    # mpmath.quad at 40 digits
    first, second = half_period_integrals(1.9025, 1.596)
    assert first == pytest.approx(2.8234214888025917776, rel=1e-13)
    assert second == pytest.approx(4.0942121863878575841, rel=1e-13)


@pytest.mark.parametrize("alpha,beta", [(1.0, 1.0), (1.0, -2.0), (0.0, 0.0)])
def test_half_period_domain(alpha, beta):
    with pytest.raises(DomainError):
        half_period_integrals(alpha, beta)
