import math

import numpy as np
import pytest

from umbilic_lines.chart import (UmbilicSurfaceSpec, eval_chart, focal_sheets,
                                 forms_numeric, forms_series, hk_series,
                                 FundamentalForms)
from umbilic_lines.errors import (FocalRadiusError, HypothesisViolationError,
                                  OutOfStripError)
from umbilic_lines.profiles import ScalarProfile, constant_profile

TAU = 2.0 * math.pi


def fourier(coeffs, l=TAU):
    return ScalarProfile("fourier", tuple(coeffs), period=l)


@pytest.fixture(scope="module")
def generic_spec():
    return UmbilicSurfaceSpec.build(
        TAU,
        fourier([1.0, 0.2, 0.4]),
        fourier([0.3, 0.0, 0.25]),
        fourier([1.1, 0.3, 0.0]),
        fourier([0.4, 0.0, 0.2]),
        closed=True,
    )


def test_chart_on_axis_returns_curve(generic_spec):
    for u in (0.0, 1.3, 4.7):
        c, _, _, _ = generic_spec.frame.at(u)
        assert np.allclose(eval_chart(generic_spec, u, 0.0), c, atol=1e-14)


def test_chart_quadratic_height_term():
    spec = UmbilicSurfaceSpec.build(
        1.0, constant_profile(1.0), constant_profile(0.0),
        constant_profile(0.0), constant_profile(0.0), v_max=1.5)
    c0, _, s0, n0 = spec.frame.at(0.0)
    expect = c0 + s0 + 0.5 * n0
    assert np.allclose(eval_chart(spec, 0.0, 1.0), expect, atol=1e-14)


def test_chart_cubic_height_term():
    spec = UmbilicSurfaceSpec.build(
        1.0, constant_profile(0.0), constant_profile(0.0),
        constant_profile(6.0), constant_profile(0.0), v_max=1.5)
    c0, _, s0, n0 = spec.frame.at(0.0)
    expect = c0 + s0 + n0  # (1/6) * 6 * 1^3
    assert np.allclose(eval_chart(spec, 0.0, 1.0), expect, atol=1e-14)


def test_out_of_strip_error(generic_spec):
    with pytest.raises(OutOfStripError):
        eval_chart(generic_spec, 1.0, generic_spec.v_max * 1.01)
    with pytest.raises(OutOfStripError):
        forms_numeric(generic_spec, 1.0, generic_spec.v_max * 1.01)


def test_forms_numeric_on_umbilic_axis(generic_spec):
    for u in (0.4, 2.2, 5.6):
        fm = forms_numeric(generic_spec, u, 0.0)
        k = generic_spec.k.eval(u)
        assert fm.E == pytest.approx(1.0, abs=2e-7)
        assert fm.F == pytest.approx(0.0, abs=2e-7)
        assert fm.G == pytest.approx(1.0, abs=2e-7)
        assert fm.e == pytest.approx(k, abs=2e-7)
        assert fm.f == pytest.approx(0.0, abs=2e-7)
        assert fm.g == pytest.approx(k, abs=2e-7)
        assert fm.H == pytest.approx(k, abs=2e-7)
        assert fm.K == pytest.approx(k * k, abs=5e-7)
        assert fm.k2 - fm.k1 == pytest.approx(0.0, abs=1e-6)


def test_umbilicity_refines_at_second_order(generic_spec):
    us = np.linspace(0.0, TAU, 17)
    def gap(h):
        return max(forms_numeric(generic_spec, float(u), 0.0, h).k2
                   - forms_numeric(generic_spec, float(u), 0.0, h).k1 for u in us)
    g1, g2 = gap(2e-4), gap(1e-4)
    assert g2 < 1e-6
    assert g1 / g2 > 2.5  # ~4x per halving


def test_forms_series_constant_terms(generic_spec):
    for u in (0.9, 3.3):
        fs = forms_series(generic_spec, u, 0.0)
        k = generic_spec.k.eval(u)
        assert fs.as_tuple() == pytest.approx((1.0, 0.0, 1.0, k, 0.0, k), abs=1e-15)


def test_forms_series_flat_strip():
    spec = UmbilicSurfaceSpec.build(
        1.0, constant_profile(0.0), constant_profile(0.0),
        constant_profile(0.0), constant_profile(0.7), v_max=0.5)
    for v in (0.0, 0.2, -0.4):
        fs = forms_series(spec, 0.5, v)
        assert fs.E == pytest.approx(1.0, abs=1e-15)
        assert fs.F == pytest.approx(0.0, abs=1e-15)
        assert fs.G == pytest.approx(1.0, abs=1e-15)


def test_forms_series_F_vanishes_for_constant_k():
    spec = UmbilicSurfaceSpec.build(
        TAU, constant_profile(1.2), fourier([0.3, 0.1, 0.0]),
        fourier([1.0, 0.2, 0.1]), constant_profile(0.3), closed=True)
    for v in (0.05, 0.2):
        assert forms_series(spec, 1.0, v).F == 0.0


def test_hk_series_constant_terms(generic_spec):
    for u in (0.4, 2.8):
        H, K = hk_series(generic_spec, u, 0.0)
        k = generic_spec.k.eval(u)
        assert H == pytest.approx(k, abs=1e-15)
        assert K == pytest.approx(k * k, abs=1e-15)


def test_hk_series_no_linear_term_when_a_zero():
    spec = UmbilicSurfaceSpec.build(
        TAU, fourier([1.0, 0.2, 0.0]), fourier([0.3, 0.0, 0.1]),
        constant_profile(0.0), constant_profile(0.4), closed=True)
    u = 1.7
    k = spec.k.eval(u)
    for v in (1e-3, 3e-3):
        assert abs(hk_series(spec, u, v)[0] - k) < 2.0 * v**2


def test_gauss_series_quadratic_term_oracle(generic_spec):
    """Quadratic fit of numeric K(v) arbitrates the printed v^2 coefficient.

    The printed expansion carries -2k'' where the finite-difference oracle
    supports -2(k')^2; this test records which version the oracle backs.
    """
    u = 1.234
    k = generic_spec.k.eval(u)
    kp = generic_spec.k.eval(u, 1)
    kpp = generic_spec.k.eval(u, 2)
    kg = generic_spec.k_g.eval(u)
    a = generic_spec.a.eval(u)
    b = generic_spec.b.eval(u)
    vs = np.array([2e-3, 4e-3, 6e-3, 8e-3, 1e-2])
    resid = []
    for v in vs:
        Kn = forms_numeric(generic_spec, u, float(v)).K
        resid.append((Kn - k**2 - k * a * v) / v**2)
    fitted = np.polyfit(vs, resid, 1)[1]  # extrapolate the v^2 coefficient to v=0
    printed = 0.5 * (-kg * k * a - 3 * k**4 + k * kpp + k * b - 2 * kpp)
    corrected = 0.5 * (-kg * k * a - 3 * k**4 + k * kpp + k * b - 2 * kp**2)
    assert fitted == pytest.approx(corrected, rel=1e-3)
    assert abs(fitted - printed) > 100 * abs(fitted - corrected)


def test_forms_invariants_random_points():
    rng = np.random.default_rng(5)
    for _ in range(10):
        spec = UmbilicSurfaceSpec.build(
            TAU,
            fourier([1.0, *rng.uniform(-0.3, 0.3, 2)]),
            fourier([0.2, *rng.uniform(-0.2, 0.2, 2)]),
            fourier([1.0, *rng.uniform(-0.3, 0.3, 2)]),
            fourier([0.3, *rng.uniform(-0.3, 0.3, 2)]),
            closed=True)
        for _ in range(100):
            u = float(rng.uniform(0, TAU))
            v = float(rng.uniform(-spec.v_max, spec.v_max))
            fm = forms_numeric(spec, u, v)
            assert fm.E > 0 and fm.G > 0
            assert fm.E * fm.G - fm.F**2 > 0
            den = fm.E * fm.G - fm.F**2
            assert fm.H == pytest.approx(
                (fm.E * fm.g - 2 * fm.F * fm.f + fm.G * fm.e) / (2 * den), rel=1e-12)
            assert fm.K == pytest.approx((fm.e * fm.g - fm.f**2) / den, rel=1e-12)
            assert fm.k1 + fm.k2 == pytest.approx(2 * fm.H, abs=1e-10)
            assert fm.k1 * fm.k2 == pytest.approx(fm.K, abs=1e-10)
            assert fm.H**2 - fm.K >= -1e-12


def test_focal_sheets_simple_values():
    fm = FundamentalForms(E=1, F=0, G=1, e=0, f=0, g=0, H=1.5, K=2.0, k1=1.0, k2=2.0)
    s1, s2 = focal_sheets(fm, (0, 0, 0), (0, 0, 1))
    assert np.allclose(s1, [0, 0, 1.0])
    assert np.allclose(s2, [0, 0, 0.5])


def test_focal_sheets_coincide_on_unit_umbilic():
    spec = UmbilicSurfaceSpec.build(
        TAU, constant_profile(1.0), constant_profile(0.0),
        constant_profile(0.5), constant_profile(0.0), closed=True)
    u = 1.0
    fm = forms_numeric(spec, u, 0.0)
    c, _, _, n = spec.frame.at(u)
    s1, s2 = focal_sheets(fm, c, n)
    assert np.allclose(s1, s2, atol=1e-6)
    assert np.allclose(s1, c + n, atol=1e-6)


def test_focal_sheets_flat_curve_errors():
    fm = FundamentalForms(E=1, F=0, G=1, e=0, f=0, g=0, H=0.0, K=0.0, k1=0.0, k2=0.0)
    with pytest.raises(FocalRadiusError) as exc:
        focal_sheets(fm, (0, 0, 0), (0, 0, 1))
    assert exc.value.sheet == 1


def test_closed_spec_requires_periodic_profiles():
    with pytest.raises(HypothesisViolationError):
        UmbilicSurfaceSpec.build(
            TAU, ScalarProfile("polynomial", (1.0, 0.5)), constant_profile(0.0),
            constant_profile(1.0), constant_profile(0.0), closed=True)
