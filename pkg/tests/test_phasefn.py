import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from scatkernels.exceptions import DomainError, PhaseSpecError
from scatkernels.legendre import hg_legendre_coeffs, legendre_eval
from scatkernels.phasefn import (
    Entire, HenyeyGreenstein, LegendreTabulated, Mixture, PoleLadder, RationalPeak, RealRay,
    SechPeak, VerticalCut, eval_phase, load_phase_spec, multimodal_example,
    normalization_constant, parse_phase_spec, singularity_set,
)

MULTIMODAL_SPEC = """\
# four components
hg g=0.9 w=0.8
hg g=-0.6 w=0.1
f1 x0=0.2 delta=0.01 gamma=3 w=0.04
f2 delta=0.02 x0=0.6 w=0.06
"""


def total_mass(p, extra_points=()):
    pts = sorted({-1.0, 1.0, *[t for t in extra_points if -1 < t < 1]})
    return math.fsum(
        integrate.quad(lambda t: eval_phase(p, t), a, b, epsabs=1e-13, epsrel=1e-13, limit=400)[0]
        for a, b in zip(pts, pts[1:]))


def test_hg_values():
    assert eval_phase(HenyeyGreenstein(0.0), 0.37) == 0.5
    assert eval_phase(HenyeyGreenstein(0.95), 1.0) == pytest.approx(390.0, rel=1e-13)
    t = np.linspace(-1, 1, 9)
    g = -0.3
    np.testing.assert_allclose(eval_phase(HenyeyGreenstein(g), t),
                               0.5 * (1 - g * g) / (1 + g * g - 2 * g * t) ** 1.5, rtol=1e-14)


def test_hg_domain():
    with pytest.raises(DomainError):
        HenyeyGreenstein(1.0)
    with pytest.raises(DomainError):
        eval_phase(HenyeyGreenstein(0.2), 1.5)


def test_normalization_constants():
    assert normalization_constant("hg", g=0.4) == 1.0
    # 1 / integral of sech(t/10) over [-1, 1], mpmath at 40 digits
    assert normalization_constant("f2", x0=0.0, delta=10.0) == pytest.approx(0.50083264030712343, rel=1e-12)
    assert normalization_constant("f1", x0=0.2, delta=0.01, gamma=3.0) == pytest.approx(84.882636320652686, rel=1e-11)
    assert normalization_constant("f2", x0=0.6, delta=0.02) == pytest.approx(15.915494330073386, rel=1e-11)
    with pytest.raises(DomainError):
        normalization_constant("f1", x0=0.0, delta=0.0, gamma=1.0)


def test_sech_peak_maximum():
    p = SechPeak(0.6, 0.02)
    assert eval_phase(p, 0.6) == pytest.approx(p.norm, rel=1e-15)


@pytest.mark.parametrize("p,peaks", [
    (HenyeyGreenstein(0.95), [0.9, 0.99]),
    (HenyeyGreenstein(-0.6), []),
    (RationalPeak(0.2, 0.01, 3.0), [0.1, 0.19, 0.2, 0.21, 0.3]),
    (RationalPeak(-0.9, 0.3, 0.7), [-0.9]),
    (SechPeak(0.6, 0.02), [0.4, 0.58, 0.6, 0.62, 0.8]),
    (SechPeak(0.0, 10.0), []),
    (LegendreTabulated(hg_legendre_coeffs(0.5, 60)), []),
    (multimodal_example(), [0.1, 0.19, 0.2, 0.21, 0.3, 0.4, 0.58, 0.6, 0.62, 0.8, 0.99]),
])
def test_unit_mass(p, peaks):
    assert total_mass(p, peaks) == pytest.approx(1.0, abs=1e-9)


def test_mixture_is_weighted_sum(rng):
    p = multimodal_example()
    t = rng.uniform(-1, 1, 20)
    parts = sum(w * eval_phase(c, t) for w, c in p.components)
    np.testing.assert_allclose(eval_phase(p, t), parts, rtol=1e-15, atol=0)


def test_mixture_weight_checks():
    with pytest.raises(DomainError):
        Mixture(((0.5, HenyeyGreenstein(0.1)), (0.6, HenyeyGreenstein(0.2))))
    with pytest.raises(DomainError):
        Mixture(((1.5, HenyeyGreenstein(0.1)), (-0.5, HenyeyGreenstein(0.2))))


@settings(max_examples=50, deadline=None)
@given(st.floats(-0.7, 0.7), st.floats(-1.0, 1.0))
def test_hg_legendre_consistency(g, t):
    n = 200
    series = np.dot(hg_legendre_coeffs(g, n).coefficients, legendre_eval(t, n - 1))
    assert eval_phase(HenyeyGreenstein(g), t) == pytest.approx(series, rel=1e-12, abs=1e-14)


def test_legendre_tabulated_eval():
    p = LegendreTabulated(hg_legendre_coeffs(0.3, 80))
    t = np.linspace(-1, 1, 11)
    np.testing.assert_allclose(eval_phase(p, t), eval_phase(HenyeyGreenstein(0.3), t), rtol=1e-13)
    with pytest.raises(DomainError):
        LegendreTabulated([1.0, 0.2])


def test_singularity_sets():
    (ray,) = singularity_set(HenyeyGreenstein(0.9)).items
    assert isinstance(ray, RealRay) and ray.direction == 1
    assert ray.x_s == pytest.approx(1.81 / 1.8, rel=1e-15)
    (ray,) = singularity_set(HenyeyGreenstein(-0.6)).items
    assert ray.direction == -1 and ray.x_s == pytest.approx(-1.36 / 1.2, rel=1e-15)
    assert singularity_set(HenyeyGreenstein(0.0)).items == (Entire(0),)
    (ladder,) = singularity_set(SechPeak(0.6, 0.02)).items
    assert isinstance(ladder, PoleLadder)
    assert ladder.first_height == pytest.approx(0.02 * math.pi / 2, rel=1e-15)
    assert singularity_set(RationalPeak(0.2, 0.01, 3)).items == (VerticalCut(0.2, 0.01),)
    assert singularity_set(LegendreTabulated([0.5, 0.1])).items == (Entire(1),)


def test_multimodal_singularities():
    items = singularity_set(multimodal_example()).items
    assert len(items) == 4
    rays = [i for i in items if isinstance(i, RealRay)]
    assert sorted(r.x_s for r in rays) == pytest.approx([-1.1333333333333333, 1.0055555555555555])
    assert VerticalCut(0.2, 0.01) in items
    assert any(isinstance(i, PoleLadder) and i.x0 == 0.6 and i.delta == 0.02 for i in items)


def test_singularity_item_validation():
    with pytest.raises(DomainError):
        RealRay(0.5, 1)
    with pytest.raises(DomainError):
        VerticalCut(0.0, 0.0)


def test_parse_single():
    p = parse_phase_spec("hg g=0.0 w=1.0")
    assert isinstance(p, HenyeyGreenstein) and p.g == 0.0
    assert isinstance(parse_phase_spec("# comment only line\nf2 x0=0 delta=0.5\n"), SechPeak)


def test_parse_multimodal():
    p = parse_phase_spec(MULTIMODAL_SPEC)
    assert isinstance(p, Mixture)
    assert [w for w, _ in p.components] == pytest.approx([0.8, 0.1, 0.04, 0.06], abs=1e-15)
    assert math.fsum(w for w, _ in p.components) == 1.0
    t = np.linspace(-1, 1, 33)
    np.testing.assert_allclose(eval_phase(p, t), eval_phase(multimodal_example(), t), rtol=1e-14)


def test_parse_renormalizes_small_drift():
    p = parse_phase_spec("hg g=0.1 w=0.5000000001\nhg g=0.2 w=0.5")
    assert math.fsum(w for w, _ in p.components) == 1.0


@pytest.mark.parametrize("text,match", [
    ("hg g=1.2 w=1", "line 1"),
    ("hg g=0.2 w=0.5\nhg g=0.1 w=0.4", "sum"),
    ("hg g=0.2\nhg g=0.1", "line 1: w is required"),
    ("mie r=3", "line 1: unknown phase function kind"),
    ("hg g=0.1 q=2", "unknown key"),
    ("hg g=abc", "not a number"),
    ("hg g=0.1 g=0.2", "duplicate"),
    ("\n\nf1 x0=0.1 delta=-1 gamma=2", "line 3"),
    ("f1 x0=0.1 delta=0.1", "missing gamma"),
    ("# nothing\n", "no phase function"),
])
def test_parse_errors(text, match):
    with pytest.raises(PhaseSpecError, match=match):
        parse_phase_spec(text)


def test_legendre_file_component(tmp_path):
    (tmp_path / "coef.txt").write_text("\n".join(repr(float(c)) for c in hg_legendre_coeffs(0.4, 60).coefficients))
    spec = tmp_path / "p.spec"
    spec.write_text("legendre file=coef.txt w=0.5\nhg g=0.4 w=0.5\n")
    p = load_phase_spec(spec)
    t = np.linspace(-1, 1, 7)
    np.testing.assert_allclose(eval_phase(p, t), eval_phase(HenyeyGreenstein(0.4), t), rtol=1e-13)
    spec.write_text("legendre file=missing.txt\n")
    with pytest.raises(PhaseSpecError, match="cannot read"):
        load_phase_spec(spec)


def test_bad_coefficient_file_reports_line(tmp_path):
    (tmp_path / "coef.txt").write_text("0.5\nnope\n")
    spec = tmp_path / "p.spec"
    spec.write_text("# header\nlegendre file=coef.txt\n")
    with pytest.raises(PhaseSpecError, match="line 2"):
        load_phase_spec(spec)
