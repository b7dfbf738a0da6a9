"""Implicit quadratic ODE of principal curvature lines and its integration.

The direction quadratic is L dv^2 + M dv du + N du^2 = 0 with L = Fg - Gf,
M = Eg - Ge, N = Ef - Fe. Away from the umbilic curve it has two real root
directions; trajectories follow one root family by continuity, switching
between the slope chart p = dv/du and the reciprocal chart q = du/dv as the
direction steepens. Integration coefficients always come from the
finite-difference forms, never from the truncated series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .chart import DEFAULT_FD_STEP, FundamentalForms, UmbilicSurfaceSpec, forms_numeric
from .errors import (AmbiguousStartError, InconsistentDirectionsError,
                     UmbilicDegeneracyError)
from .numerics import solve_quadratic

UMBILIC_COEFF_TOL = 1e-10       # all-three-below => on the umbilic set
AMBIGUOUS_START_TOL = 3e-8      # start-point slope undetermined below this;
                                # covers the coefficient noise floor on v = 0
DEGENERACY_TOL = -1e-10         # allowed roundoff excursion of the discriminant
DIRECTION_SOLVE_TOL = 1e-12


@dataclass(frozen=True)
class LineODECoeffs:
    """Coefficients of L dv^2 + M dv du + N du^2 = 0."""

    L: float
    M: float
    N: float
    source: str = "numeric"   # "series" | "numeric"

    def magnitude(self) -> float:
        return max(abs(self.L), abs(self.M), abs(self.N))

    def discriminant(self) -> float:
        return self.M * self.M - 4.0 * self.L * self.N


@dataclass
class Trajectory:
    """Arclength-parametrized polyline of one principal foliation."""

    foliation: int
    points: np.ndarray            # (n, 2) of (u, v)
    terminated_by: str            # step-budget | strip-exit | umbilic-hit | discriminant-degeneracy | endpoint
    directions: np.ndarray | None = None   # (n, 2) unit tangents, diagnostics

    def to_csv(self) -> str:
        lines = ["foliation,index,u,v"]
        for i, (u, v) in enumerate(self.points):
            lines.append(f"{self.foliation},{i},{'%.17g' % u},{'%.17g' % v}")
        return "\n".join(lines) + "\n"


def ode_coeffs(forms: FundamentalForms, source: str = "numeric") -> LineODECoeffs:
    """Direction-quadratic coefficients from fundamental forms."""
    return LineODECoeffs(
        L=forms.F * forms.g - forms.G * forms.f,
        M=forms.E * forms.g - forms.G * forms.e,
        N=forms.E * forms.f - forms.F * forms.e,
        source=source,
    )


def ode_coeffs_series(spec: UmbilicSurfaceSpec, u: float, v: float) -> LineODECoeffs:
    """Truncated closed-form series (through v^3) for L, M, N."""
    uw = spec.wrap_u(u)
    k = spec.k.eval(uw)
    kp = spec.k.eval(uw, 1)
    kpp = spec.k.eval(uw, 2)
    kg = spec.k_g.eval(uw)
    kgp = spec.k_g.eval(uw, 1)
    a = spec.a.eval(uw)
    ap = spec.a.eval(uw, 1)
    app = spec.a.eval(uw, 2)
    b = spec.b.eval(uw)
    bp = spec.b.eval(uw, 1)
    L = -(kp * v + 0.5 * (kg * kp + ap) * v**2
          + (kg * ap + 3.0 * kp * kg**2 + bp + 3.0 * k**2 * kp) / 6.0 * v**3)
    M = (a * v + 0.5 * (b - 3.0 * k**3 - kpp - 3.0 * kg * a) * v**2
         + (15.0 * k**3 * kg - 3.0 * kgp * kp + (3.0 * kg**2 - 16.0 * k**2) * a
            - app - 5.0 * kg * b) / 6.0 * v**3)
    N = (kp * v + 0.5 * (ap - 3.0 * kg * kp) * v**2
         + (3.0 * kp * kg**2 - 9.0 * k**2 * kp - 5.0 * kg * ap + bp) / 6.0 * v**3)
    return LineODECoeffs(L=L, M=M, N=N, source="series")


def reduced_coeffs(spec: UmbilicSurfaceSpec, u: float, v: float) -> tuple[float, float, float]:
    """Coefficients of the direction quadratic divided by v (through v^2)."""
    uw = spec.wrap_u(u)
    k = spec.k.eval(uw)
    kp = spec.k.eval(uw, 1)
    kpp = spec.k.eval(uw, 2)
    kg = spec.k_g.eval(uw)
    kgp = spec.k_g.eval(uw, 1)
    a = spec.a.eval(uw)
    ap = spec.a.eval(uw, 1)
    app = spec.a.eval(uw, 2)
    b = spec.b.eval(uw)
    bp = spec.b.eval(uw, 1)
    Lr = -(kp + 0.5 * (kg * kp + ap) * v
           + (kg * ap + 3.0 * kp * kg**2 + bp + 3.0 * k**2 * kp) / 6.0 * v**2)
    Mr = (a + 0.5 * (b - 3.0 * k**3 - kpp - 3.0 * kg * a) * v
          + (15.0 * k**3 * kg - 3.0 * kgp * kp + (3.0 * kg**2 - 16.0 * k**2) * a
             - app - 5.0 * kg * b) / 6.0 * v**2)
    Nr = (kp + 0.5 * (ap - 3.0 * kg * kp) * v
          + (3.0 * kp * kg**2 - 9.0 * k**2 * kp - 5.0 * kg * ap + bp) / 6.0 * v**2)
    return Lr, Mr, Nr


def reduced_equation(spec: UmbilicSurfaceSpec, u: float, v: float, p: float) -> float:
    """Value of the divided direction quadratic at slope p = dv/du."""
    Lr, Mr, Nr = reduced_coeffs(spec, u, v)
    return Lr * p * p + Mr * p + Nr


def principal_directions(coeffs: LineODECoeffs) -> tuple[float, float]:
    """The two slope roots of the direction quadratic, ascending.

    Solves in the p chart when |L| >= |N|, in the q = du/dv chart otherwise,
    and maps back; a root at q = 0 maps to an infinite slope.
    """
    L, M, N = coeffs.L, coeffs.M, coeffs.N
    if max(abs(L), abs(M), abs(N)) < DIRECTION_SOLVE_TOL:
        raise UmbilicDegeneracyError("all direction coefficients vanish (umbilic point)")
    disc = coeffs.discriminant()
    if disc < DEGENERACY_TOL:
        raise InconsistentDirectionsError(f"discriminant {disc:.3g} < 0 beyond tolerance")
    if abs(L) >= abs(N):
        if L == 0.0:
            # M p + N = 0 plus the direction at infinity
            roots = (-N / M, math.inf)
        else:
            roots = solve_quadratic(L, M, N)
    else:
        q1, q2 = solve_quadratic(N, M, L)
        roots = tuple(math.inf if q == 0.0 else 1.0 / q for q in (q1, q2))
    r = sorted(roots)
    return (r[0], r[1])


def _direction_vectors(coeffs: LineODECoeffs) -> list[np.ndarray]:
    """Unit direction vectors (du, dv) of the two root families."""
    L, M, N = coeffs.L, coeffs.M, coeffs.N
    disc = max(coeffs.discriminant(), 0.0)
    out = []
    if abs(L) >= abs(N) and L != 0.0:
        for p in solve_quadratic(L, M, N):
            w = np.array([1.0, p])
            out.append(w / np.linalg.norm(w))
    elif abs(N) > 0.0:
        for q in solve_quadratic(N, M, L):
            w = np.array([q, 1.0])
            out.append(w / np.linalg.norm(w))
    else:
        # L = N = 0, M != 0: coordinate directions
        out = [np.array([1.0, 0.0]), np.array([0.0, 1.0])]
    return out


def _normal_curvature(forms: FundamentalForms, w: np.ndarray) -> float:
    du, dv = w
    num = forms.e * du * du + 2.0 * forms.f * du * dv + forms.g * dv * dv
    den = forms.E * du * du + 2.0 * forms.F * du * dv + forms.G * dv * dv
    return num / den


class _UmbilicHit(Exception):
    pass


class _DiscriminantDegeneracy(Exception):
    pass


class _LineField:
    """Continuity-tracked unit direction field of one foliation."""

    def __init__(self, spec: UmbilicSurfaceSpec, h: float):
        self.spec = spec
        self.h = h

    def coeffs_at(self, u: float, v: float) -> LineODECoeffs:
        return ode_coeffs(forms_numeric(self.spec, u, v, self.h))

    def directions_at(self, u: float, v: float) -> list[np.ndarray]:
        co = self.coeffs_at(u, v)
        if co.magnitude() < UMBILIC_COEFF_TOL:
            raise _UmbilicHit
        if co.discriminant() < DEGENERACY_TOL:
            raise _DiscriminantDegeneracy
        return _direction_vectors(co)

    def tracked(self, u: float, v: float, w_ref: np.ndarray) -> np.ndarray:
        best, best_dot = None, -np.inf
        for w in self.directions_at(u, v):
            for s in (1.0, -1.0):
                d = float(np.dot(s * w, w_ref))
                if d > best_dot:
                    best, best_dot = s * w, d
        return best


# Cash-Karp tableau (shared layout with numerics.rk45_step, scalar-state variant)
from .numerics import _CK_B, _CK_C4, _CK_C5  # noqa: E402


def integrate_principal_line(spec: UmbilicSurfaceSpec, start: tuple[float, float],
                             foliation: int, max_steps: int = 4000,
                             ds: float = 1e-3, *, tol: float = 1e-8,
                             orientation: float = 1.0,
                             h_field: float = DEFAULT_FD_STEP,
                             max_arclength: float | None = None,
                             max_step: float = 0.01,
                             force_chart: str | None = None) -> Trajectory:
    """Follow one principal foliation from a start point.

    The root family is chosen at the start by the foliation label (1 follows
    the smaller principal curvature) and continued by nearest-direction
    tracking. force_chart ("p" or "q") restricts the root solve to one chart
    for cross-checking; default picks the better-conditioned chart.
    """
    if foliation not in (1, 2):
        raise ValueError("foliation must be 1 or 2")
    field_ = _LineField(spec, h_field)
    if force_chart is not None:
        field_.directions_at = _forced_chart_directions(field_, force_chart)
    u0, v0 = float(start[0]), float(start[1])
    forms0 = forms_numeric(spec, u0, v0, h_field)
    co0 = ode_coeffs(forms0)
    if co0.magnitude() < AMBIGUOUS_START_TOL:
        raise AmbiguousStartError(
            "start lies on the umbilic curve; slope is undetermined there "
            "(use the blow-up analysis to continue through it)"
        )
    dirs = _direction_vectors(co0)
    kns = [_normal_curvature(forms0, w) for w in dirs]
    order = np.argsort(kns)
    w = dirs[order[foliation - 1]].copy()
    if orientation < 0:
        w = -w
    x = np.array([u0, v0])
    pts = [x.copy()]
    dirs_out = [w.copy()]
    status = "step-budget"
    h = ds
    traveled = 0.0
    budget = max_arclength if max_arclength is not None else np.inf
    steps = 0
    while steps < max_steps:
        steps += 1
        try:
            k = [field_.tracked(x[0], x[1], w)]
            ok = True
            for i in range(1, 6):
                xi = x + h * sum(bb * kk for bb, kk in zip(_CK_B[i], k))
                if not spec.in_strip(xi[0], xi[1]):
                    ok = False
                    break
                k.append(field_.tracked(xi[0], xi[1], w))
            if not ok:
                # shrink toward the strip boundary; stop when resolved
                h *= 0.5
                if h < 1e-10:
                    status = "strip-exit"
                    break
                continue
            x5 = x + h * sum(c * kk for c, kk in zip(_CK_C5, k))
            x4 = x + h * sum(c * kk for c, kk in zip(_CK_C4, k))
        except _UmbilicHit:
            h *= 0.5
            if h < 1e-10:
                status = "umbilic-hit"
                break
            continue
        except _DiscriminantDegeneracy:
            h *= 0.5
            if h < 1e-10:
                status = "discriminant-degeneracy"
                break
            continue
        err = float(np.max(np.abs(x5 - x4)))
        scale = tol * (1.0 + float(np.max(np.abs(x))))
        ratio = err / scale
        if ratio <= 1.0:
            if not spec.in_strip(x5[0], x5[1]):
                status = "strip-exit"
                break
            try:
                w_new = field_.tracked(x5[0], x5[1], w)
            except _UmbilicHit:
                status = "umbilic-hit"
                pts.append(x5.copy())
                dirs_out.append(w.copy())
                break
            except _DiscriminantDegeneracy:
                status = "discriminant-degeneracy"
                pts.append(x5.copy())
                dirs_out.append(w.copy())
                break
            traveled += h
            x = x5
            w = w_new
            pts.append(x.copy())
            dirs_out.append(w.copy())
            if traveled >= budget:
                status = "endpoint"
                break
            # step cap keeps the recorded polyline dense enough that secant
            # slopes satisfy the direction quadratic to ~1e-8
            grow = 5.0 if ratio == 0.0 else 0.9 * ratio ** -0.2
            h = min(h * min(5.0, max(0.2, grow)), max_step, budget - traveled + 1e-12)
        else:
            h *= max(0.1, 0.9 * ratio ** -0.25)
            if h < 1e-12:
                status = "strip-exit"
                break
    return Trajectory(foliation=foliation, points=np.array(pts),
                      terminated_by=status, directions=np.array(dirs_out))


def _forced_chart_directions(field_: _LineField, chart: str):
    if chart not in ("p", "q"):
        raise ValueError("force_chart must be 'p' or 'q'")

    def directions_at(u: float, v: float) -> list[np.ndarray]:
        co = field_.coeffs_at(u, v)
        if co.magnitude() < UMBILIC_COEFF_TOL:
            raise _UmbilicHit
        if co.discriminant() < DEGENERACY_TOL:
            raise _DiscriminantDegeneracy
        out = []
        if chart == "p":
            for p in solve_quadratic(co.L, co.M, co.N):
                w = np.array([1.0, p])
                out.append(w / np.linalg.norm(w))
        else:
            for q in solve_quadratic(co.N, co.M, co.L):
                w = np.array([q, 1.0])
                out.append(w / np.linalg.norm(w))
        return out

    return directions_at
