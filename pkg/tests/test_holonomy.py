import math

import numpy as np
import pytest

from umbilic_lines.chart import UmbilicSurfaceSpec
from umbilic_lines.errors import HypothesisViolationError
from umbilic_lines.holonomy import (first_variation, integrate_tangent_leaf,
                                    return_map_analytic, return_map_numeric,
                                    second_variation_ode, tangent_slope)
from umbilic_lines.numerics import adaptive_simpson
from umbilic_lines.profiles import ScalarProfile, constant_profile

TAU = 2.0 * math.pi


def fourier(coeffs, l=TAU):
    return ScalarProfile("fourier", tuple(coeffs), period=l)


@pytest.fixture(scope="module")
def spiral_spec():
    # planar strip: k = 0, k_g = cos u, a = 2 + sin u
    return UmbilicSurfaceSpec.build(
        TAU, constant_profile(0.0), fourier([0.0, 1.0, 0.0]),
        fourier([2.0, 0.0, 1.0]), constant_profile(0.0), closed=True)


@pytest.fixture(scope="module")
def circle_spec():
    return UmbilicSurfaceSpec.build(
        TAU, constant_profile(1.0), constant_profile(0.0),
        fourier([2.0, 0.0, 1.0]), constant_profile(0.5), closed=True)


def test_first_variation_constant_offset():
    spec = UmbilicSurfaceSpec.build(
        TAU, constant_profile(0.0), constant_profile(0.1),
        constant_profile(1.3), constant_profile(0.0), closed=True)
    for u in (0.0, 1.0, 4.2):
        assert first_variation(spec, u) == 1.0


def test_first_variation_square_root():
    # a(u) = 1.25 - 0.75 cos u: a(0) = 0.5, a(pi) = 2 = 4 a(0)
    spec = UmbilicSurfaceSpec.build(
        TAU, constant_profile(0.0), constant_profile(0.1),
        fourier([1.25, -0.75, 0.0]), constant_profile(0.0), closed=True)
    assert first_variation(spec, math.pi) == pytest.approx(0.5, rel=1e-12)
    assert first_variation(spec, TAU) == pytest.approx(1.0, rel=1e-12)


def test_first_variation_rejects_nonpositive_a():
    spec = UmbilicSurfaceSpec.build(
        TAU, constant_profile(0.0), constant_profile(0.1),
        fourier([0.0, 0.0, 1.0]), constant_profile(0.0), closed=True)
    with pytest.raises(HypothesisViolationError):
        first_variation(spec, 1.0)


def test_variable_k_rejected(spiral_spec):
    spec = UmbilicSurfaceSpec.build(
        TAU, fourier([1.0, 0.2, 0.0]), constant_profile(0.0),
        fourier([2.0, 0.0, 1.0]), constant_profile(0.0), closed=True)
    with pytest.raises(HypothesisViolationError):
        return_map_analytic(spec)


def test_second_variation_vanishes_when_sources_vanish():
    # b = 3 k^3 with k_g = 0 and b' = 0 kills every source term
    spec = UmbilicSurfaceSpec.build(
        TAU, constant_profile(1.0), constant_profile(0.0),
        fourier([2.0, 0.0, 1.0]), constant_profile(3.0), closed=True)
    us = np.linspace(0.0, TAU, 9)
    q_ode, q_closed = second_variation_ode(spec, us)
    assert np.max(np.abs(q_ode)) < 1e-11
    assert np.max(np.abs(q_closed)) < 1e-11


def test_second_variation_vanishes_for_constant_profiles():
    spec = UmbilicSurfaceSpec.build(
        TAU, constant_profile(1.0), constant_profile(0.3),
        constant_profile(1.7), constant_profile(0.4), closed=True)
    us = np.linspace(0.0, TAU, 9)
    q_ode, q_closed = second_variation_ode(spec, us)
    assert np.max(np.abs(q_ode)) < 1e-11
    assert np.max(np.abs(q_closed)) < 1e-11


def test_second_variation_ode_matches_closed_form(spiral_spec):
    us = np.linspace(0.0, TAU, 33)
    q_ode, q_closed = second_variation_ode(spiral_spec, us)
    scale = np.max(np.abs(q_closed))
    assert scale > 0
    assert np.max(np.abs(q_ode - q_closed)) / scale < 1e-6


def test_analytic_integral_constant_geodesic_curvature():
    # with k_g constant the integrand is an exact derivative over a period
    spec = UmbilicSurfaceSpec.build(
        TAU, constant_profile(0.0), constant_profile(0.7),
        fourier([2.0, 0.0, 1.0]), constant_profile(0.0), closed=True)
    rep = return_map_analytic(spec)
    assert abs(rep.spiral_integral) < 1e-10
    assert rep.spiral == "none-at-second-order"


def test_analytic_integral_constant_a(circle_spec):
    spec = UmbilicSurfaceSpec.build(
        TAU, constant_profile(1.0), constant_profile(0.3),
        constant_profile(2.0), constant_profile(0.1), closed=True)
    rep = return_map_analytic(spec)
    assert rep.spiral_integral == 0.0


def test_analytic_integral_spiral_scenario(spiral_spec):
    rep = return_map_analytic(spiral_spec)
    want = adaptive_simpson(
        lambda u: math.cos(u) ** 2 * (2.0 + math.sin(u)) ** -1.5, 0.0, TAU, tol=1e-12)
    assert rep.spiral_integral == pytest.approx(want, rel=1e-9)
    assert rep.spiral_integral > 0
    assert rep.pi_second_analytic == pytest.approx(math.sqrt(2.0) / 6.0 * want, rel=1e-12)
    assert rep.spiral == "away"


def test_umbilic_curve_is_invariant_orbit(spiral_spec):
    us, vs = integrate_tangent_leaf(spiral_spec, 0.0)
    assert np.max(np.abs(vs)) < 1e-15


def test_tangent_slope_zero_on_axis(spiral_spec):
    assert tangent_slope(spiral_spec, 1.3, 0.0) == 0.0


def test_flow_derivative_law(spiral_spec):
    # dv/dv0 by finite differences across neighboring leaves vs sqrt(a0/a(u))
    v0, dv0 = 1e-3, 5e-5
    u_eval = np.linspace(0.0, TAU, 9)
    _, hi = integrate_tangent_leaf(spiral_spec, v0 + dv0, u_eval=u_eval)
    _, lo = integrate_tangent_leaf(spiral_spec, v0 - dv0, u_eval=u_eval)
    fd = (hi - lo) / (2.0 * dv0)
    for u, val in zip(u_eval, fd):
        want = math.sqrt(2.0 / spiral_spec.a.eval(float(u)))
        assert val == pytest.approx(want, rel=0.01)


def test_return_map_numeric_spiral(spiral_spec):
    rep = return_map_numeric(spiral_spec)
    assert abs(rep.pi_prime_numeric - 1.0) < 1e-4
    assert rep.relative_error < 0.05
    # sign consistency between the fitted curvature and the analytic one
    assert math.copysign(1, rep.pi_second_numeric) == math.copysign(1, rep.pi_second_analytic)


def test_return_map_numeric_circle(circle_spec):
    rep = return_map_numeric(circle_spec)
    assert abs(rep.pi_prime_numeric - 1.0) < 1e-4
    assert abs(rep.pi_second_numeric) < 1e-3
    assert abs(rep.pi_second_analytic) < 1e-10


def test_return_map_requires_closed_spec():
    spec = UmbilicSurfaceSpec.build(
        2.0, constant_profile(0.0), constant_profile(0.1),
        constant_profile(1.0), constant_profile(0.0))
    with pytest.raises(HypothesisViolationError):
        return_map_analytic(spec)


def test_v0_too_large_error_names_offset(spiral_spec):
    from umbilic_lines.errors import OutOfStripError
    with pytest.raises(OutOfStripError) as exc:
        return_map_numeric(spiral_spec, v0_grid=(1e-3, 2e-3, 4e-3, 0.4))
    assert "0.4" in str(exc.value)
