import math

import numpy as np
import pytest

from umbilic_lines.chart import FundamentalForms, UmbilicSurfaceSpec, forms_numeric
from umbilic_lines.errors import (AmbiguousStartError,
                                  InconsistentDirectionsError,
                                  UmbilicDegeneracyError)
from umbilic_lines.lineode import (LineODECoeffs, _direction_vectors,
                                   integrate_principal_line, ode_coeffs,
                                   ode_coeffs_series, principal_directions,
                                   reduced_equation)
from umbilic_lines.profiles import ScalarProfile, constant_profile

TAU = 2.0 * math.pi


def fourier(coeffs, l=TAU):
    return ScalarProfile("fourier", tuple(coeffs), period=l)


def forms_from(E, F, G, e, f, g):
    return FundamentalForms.from_coefficients(E, F, G, e, f, g)


@pytest.fixture(scope="module")
def transversal_spec():
    return UmbilicSurfaceSpec.build(
        TAU, fourier([1.0, 0.2, 0.4]), constant_profile(0.1),
        constant_profile(1.0), constant_profile(0.2), closed=True)


@pytest.fixture(scope="module")
def flat_spec():
    # constant profiles: the whole line v = 0 is umbilic and v = const leaves
    # are one principal family
    return UmbilicSurfaceSpec.build(
        TAU, constant_profile(1.0), constant_profile(0.0),
        constant_profile(1.0), constant_profile(0.0), closed=True)


def test_ode_coeffs_umbilic_forms_vanish():
    co = ode_coeffs(forms_from(1.0, 0.0, 1.0, 0.7, 0.0, 0.7))
    assert co.L == 0.0 and co.M == 0.0 and co.N == 0.0


def test_ode_coeffs_diagonal_forms():
    co = ode_coeffs(forms_from(1.0, 0.0, 1.0, 1.0, 0.0, 2.0))
    assert (co.L, co.M, co.N) == (0.0, 1.0, 0.0)


def test_ode_coeffs_random_forms_have_real_directions():
    rng = np.random.default_rng(3)
    for _ in range(200):
        E = rng.uniform(0.5, 2.0)
        G = rng.uniform(0.5, 2.0)
        F = rng.uniform(-0.9, 0.9) * math.sqrt(E * G)
        e, f, g = rng.uniform(-2, 2, 3)
        co = ode_coeffs(forms_from(E, F, G, e, f, g))
        assert co.discriminant() > -1e-12


def test_series_coeffs_vanish_on_axis(transversal_spec):
    co = ode_coeffs_series(transversal_spec, 1.0, 0.0)
    assert (co.L, co.M, co.N) == (0.0, 0.0, 0.0)


def test_series_coeffs_leading_linear_terms(transversal_spec):
    u, v = 0.9, 1e-5
    kp = transversal_spec.k.eval(u, 1)
    a = transversal_spec.a.eval(u)
    co = ode_coeffs_series(transversal_spec, u, v)
    assert co.L == pytest.approx(-kp * v, rel=1e-3)
    assert co.M == pytest.approx(a * v, rel=1e-3)
    assert co.N == pytest.approx(kp * v, rel=1e-3)


def test_series_coeffs_vanish_for_flat_profiles(flat_spec):
    for v in (0.02, 0.1, 0.3):
        co = ode_coeffs_series(flat_spec, 1.0, v)
        assert co.L == 0.0 and co.N == 0.0
        assert co.M != 0.0


def test_reduced_equation_on_axis(transversal_spec):
    u = 2.1
    kp = transversal_spec.k.eval(u, 1)
    a = transversal_spec.a.eval(u)
    for p in (-2.0, -0.4, 0.0, 1.3):
        want = kp * (1.0 - p * p) + a * p
        assert reduced_equation(transversal_spec, u, 0.0, p) == pytest.approx(want, rel=1e-14)


def test_reduced_equation_unit_roots():
    spec = UmbilicSurfaceSpec.build(
        2.0, ScalarProfile("polynomial", (1.0, 1.0)), constant_profile(0.0),
        constant_profile(0.0), constant_profile(0.0))
    # k' = 1, a = 0 at u = 0: roots of 1 - p^2
    assert reduced_equation(spec, 0.0, 0.0, 1.0) == pytest.approx(0.0, abs=1e-14)
    assert reduced_equation(spec, 0.0, 0.0, -1.0) == pytest.approx(0.0, abs=1e-14)


def test_reduced_equation_tangent_root_when_k_constant(flat_spec):
    # k' = 0, a != 0: the axis directions p = 0 and q = 0 solve the equation
    assert reduced_equation(flat_spec, 1.0, 0.0, 0.0) == 0.0


def test_principal_directions_formula_and_product():
    rng = np.random.default_rng(11)
    for _ in range(100):
        kp = rng.uniform(0.2, 2.0) * rng.choice([-1.0, 1.0])
        a = rng.uniform(-3.0, 3.0)
        co = LineODECoeffs(L=-kp, M=a, N=kp)
        p1, p2 = principal_directions(co)
        root = math.sqrt(a * a + 4.0 * kp * kp)
        want = sorted(((a + root) / (2 * kp), (a - root) / (2 * kp)))
        assert p1 == pytest.approx(want[0], abs=1e-10)
        assert p2 == pytest.approx(want[1], abs=1e-10)
        assert p1 * p2 == pytest.approx(-1.0, abs=1e-10)


def test_principal_directions_example_values():
    p1, p2 = principal_directions(LineODECoeffs(L=-1.0, M=3.0, N=1.0))
    assert p2 == pytest.approx((3 + math.sqrt(13)) / 2, rel=1e-12)
    assert p1 == pytest.approx((3 - math.sqrt(13)) / 2, rel=1e-12)


def test_principal_directions_degenerate_and_inconsistent():
    with pytest.raises(UmbilicDegeneracyError):
        principal_directions(LineODECoeffs(0.0, 0.0, 0.0))
    with pytest.raises(InconsistentDirectionsError):
        principal_directions(LineODECoeffs(1.0, 0.0, 1.0))


def test_directions_orthogonal_in_chart_metric(transversal_spec):
    rng = np.random.default_rng(4)
    for _ in range(40):
        u = float(rng.uniform(0, TAU))
        v = float(rng.uniform(0.02, transversal_spec.v_max * 0.9))
        fm = forms_numeric(transversal_spec, u, v)
        co = ode_coeffs(fm)
        w1, w2 = _direction_vectors(co)

        def metric_norm(w):
            return math.sqrt(fm.E * w[0]**2 + 2 * fm.F * w[0] * w[1] + fm.G * w[1]**2)

        w1 = w1 / metric_norm(w1)
        w2 = w2 / metric_norm(w2)
        ip = (fm.E * w1[0] * w2[0] + fm.F * (w1[0] * w2[1] + w1[1] * w2[0])
              + fm.G * w1[1] * w2[1])
        assert abs(ip) < 1e-8


def test_direction_product_matches_coefficient_ratio(transversal_spec):
    u, v = 1.2, 0.1
    co = ode_coeffs(forms_numeric(transversal_spec, u, v))
    p1, p2 = principal_directions(co)
    assert p1 * p2 == pytest.approx(co.N / co.L, rel=1e-8)


def _midpoint_residuals(spec, traj):
    out = []
    pts = traj.points
    for i in range(len(pts) - 1):
        mid = 0.5 * (pts[i] + pts[i + 1])
        du, dv = pts[i + 1] - pts[i]
        co = ode_coeffs(forms_numeric(spec, float(mid[0]), float(mid[1])))
        if abs(du) >= abs(dv):
            p = dv / du
            out.append(abs(co.L * p * p + co.M * p + co.N))
        else:
            q = du / dv
            out.append(abs(co.L + co.M * q + co.N * q * q))
    return out


def test_trajectory_residual_invariant(transversal_spec):
    traj = integrate_principal_line(transversal_spec, (1.0, 0.05), 1,
                                    max_steps=400, max_arclength=0.5)
    res = _midpoint_residuals(transversal_spec, traj)
    assert max(res) < 1e-6


def test_transversal_scenario_both_foliations_cross(transversal_spec):
    # start just off the umbilic curve; each foliation's line crosses v = 0
    for foliation in (1, 2):
        crossed = False
        for orientation in (1.0, -1.0):
            traj = integrate_principal_line(
                transversal_spec, (1.0, 1e-3), foliation, max_steps=400,
                orientation=orientation, max_arclength=0.05)
            if traj.points[:, 1].min() < -1e-4:
                crossed = True
        assert crossed


def test_flat_spec_horizontal_leaves(flat_spec):
    # v = const curves are one principal family; v = 0 is the umbilic line
    for v0 in (0.05, 0.2):
        traj = integrate_principal_line(flat_spec, (0.0, v0), 1,
                                        max_steps=3000, max_arclength=TAU)
        assert traj.terminated_by in ("endpoint", "step-budget")
        assert np.max(np.abs(traj.points[:, 1] - v0)) < 1e-6


def test_flat_spec_transversal_foliation_crosses_line(flat_spec):
    # the vertical family continues straight through the umbilic line: a
    # crossing in one step never lands inside the tiny coefficient ball
    reached = []
    for orientation in (1.0, -1.0):
        traj = integrate_principal_line(flat_spec, (1.0, 0.05), 2,
                                        max_steps=2000, orientation=orientation)
        assert traj.terminated_by == "strip-exit"
        reached.append(traj.points[-1][1])
    assert min(reached) < -0.4 and max(reached) > 0.4


def test_umbilic_hit_guard_near_the_line(flat_spec):
    # inside the coefficient ball the field refuses to produce a direction;
    # the integrator maps that refusal to the umbilic-hit termination
    from umbilic_lines.lineode import _LineField, _UmbilicHit
    planar = UmbilicSurfaceSpec.build(
        TAU, constant_profile(0.0), constant_profile(0.0),
        constant_profile(1.0), constant_profile(0.0), closed=True)
    field = _LineField(planar, 1e-4)
    with pytest.raises(_UmbilicHit):
        field.directions_at(1.0, 5e-11)
    # and just outside the ball directions exist
    assert len(field.directions_at(1.0, 1e-3)) == 2


def test_ambiguous_start_on_umbilic_curve(flat_spec):
    with pytest.raises(AmbiguousStartError):
        integrate_principal_line(flat_spec, (1.0, 0.0), 1)


def test_strip_exit_termination(transversal_spec):
    traj = integrate_principal_line(transversal_spec, (1.0, 0.3), 2,
                                    max_steps=4000)
    assert traj.terminated_by == "strip-exit"


def test_chart_switch_consistency(transversal_spec):
    # transversal slopes near v=0 have |p| in [0.5, 2]; force both charts
    start = (1.0, 0.02)
    trajs = {}
    for chart in ("p", "q"):
        trajs[chart] = integrate_principal_line(
            transversal_spec, start, 2, max_steps=800,
            max_arclength=0.4, max_step=0.002, force_chart=chart)
    tp, tq = trajs["p"].points, trajs["q"].points
    # compare v(u) along the overlapping u-range
    u_lo = max(tp[:, 0].min(), tq[:, 0].min())
    u_hi = min(tp[:, 0].max(), tq[:, 0].max())
    us = np.linspace(u_lo, u_hi, 50)
    vp = np.interp(us, tp[:, 0], tp[:, 1])
    vq = np.interp(us, tq[:, 0], tq[:, 1])
    assert np.max(np.abs(vp - vq)) < 1e-6


def test_tangential_quadratic_contact():
    # one foliation's leaf through the tangential point fits a parabola with
    # coefficient -k''/(2 a0)
    from conftest import fit_tangential_contact
    spec = UmbilicSurfaceSpec.build(
        2.0, ScalarProfile("polynomial", (1.8, -1.6, 0.8)), constant_profile(0.1),
        constant_profile(1.2), constant_profile(0.3))
    beta_expect = -1.6 / (2.0 * 1.2)
    fitted = fit_tangential_contact(spec, 1.0, beta_expect, window=0.12)
    assert fitted == pytest.approx(beta_expect, rel=0.02)


def test_trajectory_csv_format(transversal_spec):
    traj = integrate_principal_line(transversal_spec, (1.0, 0.05), 1,
                                    max_steps=50, max_arclength=0.02)
    lines = traj.to_csv().splitlines()
    assert lines[0] == "foliation,index,u,v"
    assert lines[1].startswith("1,0,")
