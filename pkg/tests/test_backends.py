import numpy as np
import pytest

from scatkernels import _numpy_kernels as npk
from scatkernels.phasefn import HenyeyGreenstein, multimodal_example

nbk = pytest.importorskip("scatkernels._numba_kernels")


def test_agm_agree(rng):
    m = np.concatenate([rng.uniform(0, 1, 200), [0.0, 1 - 1e-15, 1e-300]])
    mc = 1.0 - m
    for got, want in zip(npk.agm_arrays(m, mc), nbk.agm_arrays(m, mc)):
        np.testing.assert_allclose(got, want, rtol=1e-15, atol=0)


def test_phase_eval_agree(rng):
    t = np.concatenate([rng.uniform(-1, 1, 500), [-1.0, 1.0]])
    for p in (multimodal_example(), HenyeyGreenstein(-0.3)):
        table, coeffs = p.compiled
        np.testing.assert_allclose(npk.phase_eval(table, coeffs, t), nbk.phase_eval(table, coeffs, t),
                                   rtol=1e-14)


@pytest.mark.parametrize("m", [0, 1, 6])
def test_trapezoid_agree(m, rng):
    table, coeffs = multimodal_example().compiled
    x = rng.uniform(-1, 1, 300)
    y = rng.uniform(-1, 1, 300)
    a = x * y
    b = np.sqrt(1 - x * x) * np.sqrt(1 - y * y)
    b[:5] = 0.0
    n = rng.integers(max(8, m + 1), 300, size=300).astype(np.int64)
    got = npk.trapezoid_points(table, coeffs, a, b, m, n)
    want = nbk.trapezoid_points(table, coeffs, a, b, m, n)
    scale = np.abs(want).max()
    np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-14 * scale)


@pytest.mark.parametrize("mod", [npk, nbk], ids=["numpy", "numba"])
def test_value_independent_of_batch(mod, rng):
    table, coeffs = multimodal_example().compiled
    x, y = rng.uniform(-1, 1, (2, 40))
    a = x * y
    b = np.sqrt(1 - x * x) * np.sqrt(1 - y * y)
    n = rng.integers(8, 120, size=40).astype(np.int64)
    batch = mod.trapezoid_points(table, coeffs, a, b, 3, n)
    alone = [mod.trapezoid_points(table, coeffs, a[i:i + 1], b[i:i + 1], 3, n[i:i + 1])[0] for i in range(40)]
    assert batch.tobytes() == np.array(alone).tobytes()
