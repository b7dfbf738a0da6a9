"""Canonical strip chart around a curve of umbilic points.

The chart is alpha(u, v) = c(u) + v S(u) + P(u, v) N(u) with height polynomial
P = k v^2/2 + a v^3/6 + b v^4/24 truncated exactly after the quartic term.
Fundamental forms come from two independent routes: truncated closed-form
series in v, and centered finite differences of the chart evaluation. The
finite-difference route is the ground truth used by integrators; the series
route is tested against it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .curvebuild import FrameField, integrate_darboux_frame
from .errors import (DegenerateChartError, FocalRadiusError,
                     HypothesisViolationError, OutOfStripError)
from .framespline import poly_center_diff1, poly_center_diff2
from .profiles import ProfileLike

DEFAULT_FD_STEP = 1e-4


@dataclass(frozen=True)
class FundamentalForms:
    """First/second fundamental form coefficients and derived curvatures."""

    E: float
    F: float
    G: float
    e: float
    f: float
    g: float
    H: float
    K: float
    k1: float
    k2: float

    @classmethod
    def from_coefficients(cls, E, F, G, e, f, g) -> "FundamentalForms":
        den = E * G - F * F
        if den <= 0.0:
            raise DegenerateChartError(f"EG - F^2 = {den:.3g} <= 0")
        H = (E * g - 2.0 * F * f + G * e) / (2.0 * den)
        K = (e * g - f * f) / den
        # H^2 - K evaluated as (Eg-Ge)^2 - 4(Fg-Gf)(Ef-Fe) over 4(EG-F^2)^2:
        # near umbilics the direct form cancels at the k^2 scale while this
        # one differences coefficients pairwise, keeping the gap meaningful.
        disc = ((E * g - G * e) ** 2 - 4.0 * (F * g - G * f) * (E * f - F * e)) / (4.0 * den * den)
        if disc < 0.0:
            # exact umbilics land roundoff-negative
            disc = 0.0
        root = math.sqrt(disc)
        return cls(E=E, F=F, G=G, e=e, f=f, g=g, H=H, K=K, k1=H - root, k2=H + root)

    def as_tuple(self):
        return (self.E, self.F, self.G, self.e, self.f, self.g)


@dataclass
class UmbilicSurfaceSpec:
    """Data defining the strip chart: profiles, length, frame."""

    l: float
    k: ProfileLike
    k_g: ProfileLike
    a: ProfileLike
    b: ProfileLike
    closed: bool
    frame: FrameField
    v_max: float

    @classmethod
    def build(cls, l: float, k: ProfileLike, k_g: ProfileLike, a: ProfileLike,
              b: ProfileLike, *, closed: bool = False, v_max: float | None = None,
              frame_step: float = 1e-3, margin: float | None = None) -> "UmbilicSurfaceSpec":
        if l <= 0:
            raise ValueError("l must be positive")
        if closed:
            for name, p in (("k", k), ("k_g", k_g), ("a", a), ("b", b)):
                _require_periodic(name, p, l)
        if margin is None:
            margin = min(0.2, 0.45 * l)
        frame = integrate_darboux_frame(k, k_g, l, frame_step, margin=margin, closed=closed)
        if v_max is None:
            us = np.linspace(0.0, l, 257)
            k_sup = max(abs(k.eval(float(u))) for u in us)
            v_max = 0.5 / max(1.0, k_sup)
        return cls(l=l, k=k, k_g=k_g, a=a, b=b, closed=closed, frame=frame, v_max=v_max)

    def wrap_u(self, u: float) -> float:
        if self.closed:
            return u - self.l * math.floor(u / self.l)
        return u

    def in_strip(self, u: float, v: float) -> bool:
        if abs(v) > self.v_max:
            return False
        uw = self.wrap_u(u)
        return self.frame.u_min <= uw <= self.frame.u_max

    def height_coeffs(self, u: float) -> np.ndarray:
        """Ascending v-coefficients of the height polynomial P(u, .)."""
        return np.array([
            0.0, 0.0,
            0.5 * self.k.eval(u),
            self.a.eval(u) / 6.0,
            self.b.eval(u) / 24.0,
        ])


def _require_periodic(name: str, p: ProfileLike, l: float) -> None:
    kind = getattr(p, "kind", None)
    if kind == "polynomial":
        if not p.is_constant():
            raise HypothesisViolationError(
                f"closed spec requires l-periodic profiles; polynomial profile {name!r} is not constant"
            )
        return
    if kind == "fourier":
        ratio = l / p.period
        if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
            raise HypothesisViolationError(
                f"closed spec requires l-periodic profiles; profile {name!r} has period {p.period}"
            )
        return
    # derived profiles: sampled check
    for n in range(3):
        if abs(p.eval(0.0, n) - p.eval(l, n)) > 1e-8:
            raise HypothesisViolationError(
                f"closed spec requires l-periodic profiles; profile {name!r} fails at order {n}"
            )


def eval_chart(spec: UmbilicSurfaceSpec, u: float, v: float) -> np.ndarray:
    """Chart point alpha(u, v); errors outside the declared strip."""
    if abs(v) > spec.v_max:
        raise OutOfStripError(f"|v| = {abs(v):.4g} exceeds strip half-width {spec.v_max:.4g}")
    uw = spec.wrap_u(u)
    if not spec.frame.u_min <= uw <= spec.frame.u_max:
        raise OutOfStripError(f"u = {u:.4g} outside chart domain")
    c, _, s, n = spec.frame.at(uw)
    pc = spec.height_coeffs(uw)
    height = pc[2] * v**2 + pc[3] * v**3 + pc[4] * v**4
    return c + v * s + height * n


class _StencilCache:
    """Frame and height-polynomial values on the u-stencil used by the FD forms."""

    def __init__(self, spec: UmbilicSurfaceSpec, u: float, h: float):
        self.spec = spec
        self.u = u
        self.h = h
        pp = spec.frame.spline()
        self.pp = pp
        offs = (-h, -0.5 * h, 0.0, 0.5 * h, h)
        self.offsets = offs
        vals = {o: pp.value(u + o) for o in offs}
        self.c = {o: vals[o][0:3] for o in offs}
        self.S = {o: vals[o][3:6] for o in offs}
        self.N = {o: vals[o][6:9] for o in offs}
        self.pcoef = {o: spec.height_coeffs(u + o) for o in offs}


def _alpha_stencil_derivatives(spec: UmbilicSurfaceSpec, u: float, v: float, h: float):
    """First and second chart partials by centered differences.

    Differences are assembled term-by-term over the three chart terms so the
    frame-evaluation roundoff does not get amplified by 1/h^2; the combined
    numbers equal the plain centered stencils of eval_chart up to roundoff.
    Second derivatives use Richardson extrapolation over (h, h/2).
    """
    st = _StencilCache(spec, u, h)
    pp = st.pp

    def P(o: float, vv: float) -> float:
        pc = st.pcoef[o]
        return pc[2] * vv**2 + pc[3] * vv**3 + pc[4] * vv**4

    def pn(o: float, vv: float) -> np.ndarray:
        return P(o, vv) * st.N[o]

    # --- first u-derivative at step h
    d1 = pp.diff1(u, h)
    d1c, d1S = d1[0:3], d1[3:6]
    d1PN = (pn(h, v) - pn(-h, v)) / (2.0 * h)
    alpha_u = d1c + v * d1S + d1PN

    # --- first v-derivative (exact stencil of the quartic height polynomial)
    d1vP = poly_center_diff1(st.pcoef[0.0], v, h)
    alpha_v = st.S[0.0] + d1vP * st.N[0.0]

    # --- second u-derivative, Richardson over (h, h/2)
    def d2_at(hh: float) -> np.ndarray:
        d2 = pp.diff2(u, hh)
        d2PN = (pn(hh, v) - 2.0 * pn(0.0, v) + pn(-hh, v)) / (hh * hh)
        return d2[0:3] + v * d2[3:6] + d2PN

    alpha_uu = (4.0 * d2_at(0.5 * h) - d2_at(h)) / 3.0

    # --- second v-derivative, Richardson over (h, h/2)
    def d2v_at(hh: float) -> float:
        return poly_center_diff2(st.pcoef[0.0], v, hh)

    alpha_vv = ((4.0 * d2v_at(0.5 * h) - d2v_at(h)) / 3.0) * st.N[0.0]

    # --- mixed derivative, Richardson over (h, h/2) with both steps tied
    def mixed_at(hh: float) -> np.ndarray:
        gp = poly_center_diff1(st.pcoef[hh], v, hh) * st.N[hh]
        gm = poly_center_diff1(st.pcoef[-hh], v, hh) * st.N[-hh]
        return pp.diff1(u, hh)[3:6] + (gp - gm) / (2.0 * hh)

    alpha_uv = (4.0 * mixed_at(0.5 * h) - mixed_at(h)) / 3.0

    return alpha_u, alpha_v, alpha_uu, alpha_uv, alpha_vv


def forms_numeric(spec: UmbilicSurfaceSpec, u: float, v: float,
                  h: float = DEFAULT_FD_STEP) -> FundamentalForms:
    """Fundamental forms from finite differences of the chart evaluation."""
    if h <= 0:
        raise ValueError("h must be positive")
    if abs(v) > spec.v_max:
        raise OutOfStripError(f"|v| = {abs(v):.4g} exceeds strip half-width {spec.v_max:.4g}")
    uw = spec.wrap_u(u)
    if not spec.frame.u_min <= uw <= spec.frame.u_max:
        raise OutOfStripError(f"u = {u:.4g} outside chart domain")
    au, av, auu, auv, avv = _alpha_stencil_derivatives(spec, uw, v, h)
    normal = np.cross(au, av)
    nn = np.linalg.norm(normal)
    if nn == 0.0:
        raise DegenerateChartError("vanishing normal")
    normal /= nn
    E = float(au @ au)
    F = float(au @ av)
    G = float(av @ av)
    e = float(auu @ normal)
    f = float(auv @ normal)
    g = float(avv @ normal)
    return FundamentalForms.from_coefficients(E, F, G, e, f, g)


def forms_series(spec: UmbilicSurfaceSpec, u: float, v: float) -> FundamentalForms:
    """Fundamental forms from the truncated closed-form series in v."""
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

    E = 1.0 - 2.0 * kg * v + (kg**2 - k**2) * v**2 + (6.0 * kg * k**2 - 2.0 * k * a) / 6.0 * v**3
    F = 0.5 * kp * k * v**3
    G = 1.0 + k**2 * v**2 + k * a * v**3
    e = (k - 2.0 * kg * k * v
         + 0.5 * (2.0 * k * kg**2 - kg * a - 2.0 * k**3 + kpp) * v**2
         + (app + kg * (9.0 * k**3 - b) + (3.0 * kg**2 - k**2) * a
            + 3.0 * kp * (kgp + k**2)) / 6.0 * v**3)
    f = (kp * v + 0.5 * (kg * kp + ap) * v**2
         + (kg * ap + 3.0 * kp * kg**2 + bp) / 6.0 * v**3)
    g = (k + a * v + 0.5 * (b - k**3) * v**2 - 0.5 * k**2 * (a - kp) * v**3)
    return FundamentalForms.from_coefficients(E, F, G, e, f, g)


def hk_series(spec: UmbilicSurfaceSpec, u: float, v: float) -> tuple[float, float]:
    """Mean and Gauss curvature from their truncated series (through v^2)."""
    uw = spec.wrap_u(u)
    k = spec.k.eval(uw)
    kpp = spec.k.eval(uw, 2)
    kg = spec.k_g.eval(uw)
    a = spec.a.eval(uw)
    b = spec.b.eval(uw)
    H = k + 0.5 * a * v + 0.25 * (b + kpp - 3.0 * k**3 - kg * a) * v**2
    K = k**2 + k * a * v + 0.5 * (-kg * k * a - 3.0 * k**4 + k * kpp + k * b - 2.0 * kpp) * v**2
    return H, K


def focal_sheets(forms: FundamentalForms, base: Sequence[float],
                 normal: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """Centers of principal curvature: base + N/k1 and base + N/k2."""
    base = np.asarray(base, dtype=float)
    normal = np.asarray(normal, dtype=float)
    for sheet, ki in ((1, forms.k1), (2, forms.k2)):
        if abs(ki) < 1e-14:
            raise FocalRadiusError(sheet)
    return base + normal / forms.k1, base + normal / forms.k2
