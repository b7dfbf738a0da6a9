"""First-return map of the foliation tangent to a closed umbilic curve.

Hypotheses: the normal curvature profile k is constant (spherical case; zero
for the planar case) and a(u) > 0 over the period. The tangent foliation then
defines a first-return map pi with pi'(0) = 1 and
pi''(0) = (sqrt(a0)/6) * integral of k_g a' / a^(3/2) over one period.
The analytic route and a direct numeric route (integrating the tangent
direction field built from finite-difference forms) are computed side by side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .chart import DEFAULT_FD_STEP, UmbilicSurfaceSpec, forms_numeric
from .errors import HypothesisViolationError, OutOfStripError
from .lineode import ode_coeffs, _direction_vectors
from .numerics import adaptive_simpson

DEFAULT_V0_GRID = (1e-3, 2e-3, 4e-3, 8e-3)
SPIRAL_TOL = 1e-9


def validate_constant_k(spec: UmbilicSurfaceSpec, tol: float = 1e-12) -> float:
    """Return the constant normal curvature; error if k is not constant."""
    us = np.linspace(0.0, spec.l, 193)
    kd = max(abs(spec.k.eval(float(u), 1)) for u in us)
    if kd > tol:
        raise HypothesisViolationError(
            f"return-map hypotheses need constant k; max |k'| = {kd:.3g}")
    return spec.k.eval(0.0)


def _validate_positive_a(spec: UmbilicSurfaceSpec) -> float:
    us = np.linspace(0.0, spec.l, 385)
    amin = min(spec.a.eval(float(u)) for u in us)
    if amin <= 0.0:
        raise HypothesisViolationError(
            f"return-map hypotheses need a(u) > 0 on [0, l]; min a = {amin:.3g}")
    return spec.a.eval(0.0)


def first_variation(spec: UmbilicSurfaceSpec, u: float) -> float:
    """Derivative of the flow with respect to the start offset: sqrt(a0/a(u))."""
    validate_constant_k(spec)
    a0 = _validate_positive_a(spec)
    return math.sqrt(a0 / spec.a.eval(u))


def second_variation_ode(spec: UmbilicSurfaceSpec, u_grid) -> tuple[np.ndarray, np.ndarray]:
    """Second flow-variation q(u): linear-ODE solution and closed form.

    The two columns are independent evaluations of the same quantity; their
    agreement checks the transcription of both the ODE and its integral form.
    """
    k = validate_constant_k(spec)
    a0 = _validate_positive_a(spec)
    u_grid = np.asarray(u_grid, dtype=float)

    def a(u): return spec.a.eval(u)
    def ap(u): return spec.a.eval(u, 1)
    def b(u): return spec.b.eval(u)
    def bp(u): return spec.b.eval(u, 1)
    def kg(u): return spec.k_g.eval(u)

    def ode_rhs(u, y):
        au = a(u)
        src = (-0.5 * a0 * ap(u) * b(u) / au**2
               + 1.5 * a0 * ap(u) * k**3 / au**2
               - a0 * ap(u) * kg(u) / (6.0 * au)
               + a0 * bp(u) / (3.0 * au))
        return [(-0.5 * ap(u) * y[0] - src) / au]

    sol = solve_ivp(ode_rhs, (0.0, float(u_grid[-1])), [0.0], t_eval=u_grid,
                    rtol=1e-11, atol=1e-13, dense_output=False, method="DOP853")
    if not sol.success:
        raise RuntimeError(f"variation ODE failed: {sol.message}")
    q_ode = sol.y[0]

    def integrand(u):
        au = a(u)
        return (ap(u) * (3.0 * b(u) - 9.0 * k**3) / au**2.5
                + (ap(u) * kg(u) - 2.0 * bp(u)) / au**1.5)

    sol2 = solve_ivp(lambda u, y: [integrand(u)], (0.0, float(u_grid[-1])), [0.0],
                     t_eval=u_grid, rtol=1e-11, atol=1e-13, method="DOP853")
    if not sol2.success:
        raise RuntimeError(f"variation quadrature failed: {sol2.message}")
    q_closed = (a0 / 6.0) * sol2.y[0] / np.sqrt([a(float(u)) for u in u_grid])
    return q_ode, q_closed


@dataclass
class ReturnMapReport:
    """Analytic and numeric first-return map data at the umbilic curve."""

    a0: float
    pi_prime: float                    # analytic, identically 1
    spiral_integral: float             # integral of k_g a' a^(-3/2) over [0, l]
    pi_second_analytic: float          # (sqrt(a0)/6) * spiral_integral
    spiral: str                        # toward | away | none-at-second-order (v > 0 side)
    pi_prime_numeric: float | None = None
    pi_second_numeric: float | None = None
    relative_error: float | None = None
    v0_grid: tuple[float, ...] | None = None
    pi_values: tuple[float, ...] | None = None

    def lines(self) -> list[str]:
        out = [
            f"a0                  : {self.a0:.12g}",
            f"pi'(0) analytic     : {self.pi_prime:g}",
            f"spiral integral     : {self.spiral_integral:.12g}",
            f"pi''(0) analytic    : {self.pi_second_analytic:.12g}",
            f"spiral (v>0 side)   : {self.spiral}",
        ]
        if self.pi_second_numeric is not None:
            out.append(f"pi'(0) numeric fit  : {self.pi_prime_numeric:.12g}")
            out.append(f"pi''(0) numeric fit : {self.pi_second_numeric:.12g}")
            rel = "n/a" if self.relative_error is None or math.isnan(self.relative_error) \
                else f"{self.relative_error:.3%}"
            out.append(f"relative error      : {rel}")
        return out


def _spiral_verdict(pi_second: float, tol: float = SPIRAL_TOL) -> str:
    if abs(pi_second) < tol:
        return "none-at-second-order"
    return "away" if pi_second > 0.0 else "toward"


def return_map_analytic(spec: UmbilicSurfaceSpec) -> ReturnMapReport:
    """Analytic return-map data by adaptive quadrature of the spiral integral."""
    if not spec.closed:
        raise HypothesisViolationError("return map needs a closed (periodic) spec")
    validate_constant_k(spec)
    a0 = _validate_positive_a(spec)

    def integrand(u):
        return spec.k_g.eval(u) * spec.a.eval(u, 1) / spec.a.eval(u) ** 1.5

    integral = adaptive_simpson(integrand, 0.0, spec.l, tol=1e-10)
    pi2 = math.sqrt(a0) / 6.0 * integral
    return ReturnMapReport(
        a0=a0, pi_prime=1.0, spiral_integral=integral,
        pi_second_analytic=pi2, spiral=_spiral_verdict(pi2),
    )


def tangent_slope(spec: UmbilicSurfaceSpec, u: float, v: float,
                  h: float = DEFAULT_FD_STEP) -> float:
    """Slope of the foliation tangent to the umbilic curve at (u, v).

    On v = 0 the divided direction quadratic gives slope 0 exactly (the
    umbilic curve is an orbit); off it, the root of smallest slope is the
    tangent family.
    """
    if v == 0.0:
        return 0.0
    co = ode_coeffs(forms_numeric(spec, u, v, h))
    best = None
    for w in _direction_vectors(co):
        if abs(w[0]) < 1e-14:
            continue
        p = w[1] / w[0]
        if best is None or abs(p) < abs(best):
            best = p
    if best is None:
        raise HypothesisViolationError(f"no tangent-family slope at (u={u:.4g}, v={v:.4g})")
    return best


def integrate_tangent_leaf(spec: UmbilicSurfaceSpec, v0: float, u_end: float | None = None,
                           u_eval=None, h: float = DEFAULT_FD_STEP,
                           rtol: float = 1e-9, atol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Integrate dv/du along the tangent foliation from (0, v0)."""
    if u_end is None:
        u_end = spec.l
    vmax = spec.v_max

    def rhs(u, y):
        return [tangent_slope(spec, u, float(y[0]), h)]

    def escape(u, y):
        return vmax - abs(y[0])
    escape.terminal = True
    escape.direction = -1

    try:
        sol = solve_ivp(rhs, (0.0, float(u_end)), [float(v0)], t_eval=u_eval,
                        rtol=rtol, atol=atol, method="RK45", events=escape,
                        max_step=spec.l / 16.0)
    except OutOfStripError:
        raise OutOfStripError(f"tangent leaf from v0 = {v0:g} left the strip; v0 too large")
    if sol.status == 1:
        raise OutOfStripError(
            f"tangent leaf from v0 = {v0:g} left the strip near u = {sol.t[-1]:.4g}; v0 too large")
    if not sol.success:
        raise RuntimeError(f"tangent-leaf integration failed: {sol.message}")
    return sol.t, sol.y[0]


def return_map_numeric(spec: UmbilicSurfaceSpec, v0_grid=DEFAULT_V0_GRID,
                       h: float = DEFAULT_FD_STEP) -> ReturnMapReport:
    """Numeric return map from the finite-difference direction field.

    Fits pi(v0) = s v0 + (C/2) v0^2 with weights 1/v0^2 and reports
    C beside the analytic second derivative.
    """
    report = return_map_analytic(spec)
    v0s = tuple(float(v) for v in v0_grid)
    if len(v0s) < 4:
        raise ValueError("need at least 4 start offsets for the quadratic fit")
    pis = []
    for v0 in v0s:
        _, vv = integrate_tangent_leaf(spec, v0, h=h)
        pis.append(float(vv[-1]))
    x = np.array(v0s)
    y = np.array(pis)
    w = 1.0 / x**2
    # model columns: v0 and v0^2/2
    c1, c2 = x, 0.5 * x * x
    a11 = np.sum(w * c1 * c1)
    a12 = np.sum(w * c1 * c2)
    a22 = np.sum(w * c2 * c2)
    b1 = np.sum(w * c1 * y)
    b2 = np.sum(w * c2 * y)
    det = a11 * a22 - a12 * a12
    s = (b1 * a22 - b2 * a12) / det
    C = (a11 * b2 - a12 * b1) / det
    if abs(report.pi_second_analytic) > 1e-12:
        rel = abs(C - report.pi_second_analytic) / abs(report.pi_second_analytic)
    else:
        rel = float("nan")
    report.pi_prime_numeric = float(s)
    report.pi_second_numeric = float(C)
    report.relative_error = rel
    report.v0_grid = v0s
    report.pi_values = tuple(pis)
    return report
