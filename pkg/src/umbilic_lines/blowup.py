"""Blow-up analysis of the direction field at points of the umbilic curve.

At a point where the gradient of the mean curvature degenerates along the
curve, the divided direction quadratic has a linear jet
F = -(A u + v) p^2 + (2 u + B v) p + (A u + v). Its blow-up singularities on
the projective line are the roots of R(p) = p^3 + (A - B) p^2 - 3 p - A, with
eigenvalue pair (lambda1, lambda2) at each root. Classification ground truth
is the saddle/node census of those roots; the sign table built from the
discriminant-like polynomial Delta and delta = 2 - A B is evaluated alongside
and compared, never trusted. An independent trajectory-based portrait oracle
cross-validates the census.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .chart import UmbilicSurfaceSpec
from .errors import HypothesisViolationError

HYPERBOLIC_TOL = 1e-9
JET_TOL = 1e-8


class MultipleRootWarning(UserWarning):
    """The classification cubic is near a multiple root."""


# ---------------------------------------------------------------------------
# local jet invariants


@dataclass(frozen=True)
class LocalInvariants:
    """Jets of the defining profiles at a point of the umbilic curve."""

    u0: float
    k0: float
    kprime: float
    ksecond: float
    kg0: float
    a0: float
    aprime: float
    b0: float
    case: str                      # transversal | tangential | darboux_like | a_zero | degenerate
    A: float | None = None         # darboux_like only
    B: float | None = None
    Delta: float | None = None
    delta: float | None = None
    a1: float | None = None        # a_zero only


def _profile_k_is_constant(spec: UmbilicSurfaceSpec) -> bool:
    k = spec.k
    if getattr(k, "kind", None) == "polynomial":
        return k.is_constant(1e-14)
    if getattr(k, "kind", None) == "fourier":
        return all(abs(c) <= 1e-14 for c in k.coefficients[1:])
    us = np.linspace(0.0, spec.l, 65)
    return max(abs(k.eval(float(u), 1)) for u in us) < 1e-12


def local_invariants(spec: UmbilicSurfaceSpec, u0: float, tol: float = JET_TOL) -> LocalInvariants:
    """Evaluate profile jets at u0 and assign the classification case."""
    if not 0.0 <= u0 <= spec.l:
        raise ValueError(f"u0 = {u0} outside [0, {spec.l}]")
    k0 = spec.k.eval(u0)
    kp = spec.k.eval(u0, 1)
    kpp = spec.k.eval(u0, 2)
    kg0 = spec.k_g.eval(u0)
    a0 = spec.a.eval(u0)
    ap = spec.a.eval(u0, 1)
    b0 = spec.b.eval(u0)
    base = dict(u0=u0, k0=k0, kprime=kp, ksecond=kpp, kg0=kg0, a0=a0, aprime=ap, b0=b0)
    if abs(kp) > tol:
        return LocalInvariants(case="transversal", **base)
    if abs(kpp) > tol and abs(a0) > tol:
        return LocalInvariants(case="tangential", **base)
    if abs(a0) <= tol and abs(ap * kpp) > tol * tol:
        A = -2.0 * kpp / ap
        B = (b0 - 3.0 * k0**3 - kpp) / ap
        Delta, delta = delta_Delta(A, B)
        return LocalInvariants(case="darboux_like", A=A, B=B, Delta=Delta, delta=delta, **base)
    if _profile_k_is_constant(spec) and abs(a0) <= tol and abs(ap) > tol:
        return LocalInvariants(case="a_zero", a1=(b0 - 3.0 * k0**3) / ap, **base)
    return LocalInvariants(case="degenerate", **base)


# ---------------------------------------------------------------------------
# the classification cubic and its spectra


def delta_Delta(A: float, B: float) -> tuple[float, float]:
    """(Delta, delta) for the sign-table classification."""
    Delta = (-4.0 * A**4 + 12.0 * B * A**3 - (36.0 + 12.0 * B**2) * A**2
             + (4.0 * B**3 + 72.0 * B) * A - 9.0 * B**2 - 108.0)
    delta = 2.0 - A * B
    return Delta, delta


def cubic_R(A: float, B: float) -> np.poly1d:
    """The singularity cubic R(p) = p^3 + (A - B) p^2 - 3 p - A."""
    return np.poly1d([1.0, A - B, -3.0, -A])


def _depressed_cubic_roots(b: float, c: float, d: float) -> list[float]:
    """Real roots of x^3 + b x^2 + c x + d via the trigonometric/Cardano form."""
    p = c - b * b / 3.0
    q = d - b * c / 3.0 + 2.0 * b**3 / 27.0
    shift = -b / 3.0
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    if disc > 0.0:
        s = math.sqrt(disc)
        u1 = math.copysign(abs(-q / 2.0 + s) ** (1.0 / 3.0), -q / 2.0 + s)
        u2 = math.copysign(abs(-q / 2.0 - s) ** (1.0 / 3.0), -q / 2.0 - s)
        return [u1 + u2 + shift]
    if p == 0.0:
        return [shift]
    m = 2.0 * math.sqrt(-p / 3.0)
    arg = 3.0 * q / (p * m)
    arg = min(1.0, max(-1.0, arg))
    theta = math.acos(arg) / 3.0
    return sorted(m * math.cos(theta - 2.0 * math.pi * k / 3.0) + shift for k in range(3))


def roots_R(A: float, B: float) -> list[float]:
    """Real roots of the singularity cubic, Newton-polished to ~1e-12."""
    Delta, _ = delta_Delta(A, B)
    if abs(Delta) < 1e-9:
        warnings.warn(MultipleRootWarning(
            f"Delta = {Delta:.3g}: the singularity cubic is near a multiple root"))
    poly = cubic_R(A, B)
    dpoly = poly.deriv()
    roots = _depressed_cubic_roots(A - B, -3.0, -A)
    polished = []
    for r in roots:
        x = r
        for _ in range(4):
            fx, dfx = poly(x), dpoly(x)
            if dfx == 0.0:
                break
            x -= fx / dfx
        polished.append(x)
    return sorted(polished)


def eigenvalues_at(p: float, A: float, B: float) -> tuple[float, float]:
    """Nonzero eigenvalues of the blow-up linearization at slope p."""
    lam1 = 2.0 + (B - 2.0 * A) * p - 2.0 * p * p
    lam2 = 3.0 * p * p + 2.0 * (A - B) * p - 3.0
    return lam1, lam2


@dataclass(frozen=True)
class BlowUpSingularity:
    """A singular slope on the projective line with its eigenvalue pair."""

    p: float
    lambda1: float
    lambda2: float
    kind: str      # saddle | node | nonhyperbolic


def _singularity(p: float, lam1: float, lam2: float, tol: float = HYPERBOLIC_TOL) -> BlowUpSingularity:
    if min(abs(lam1), abs(lam2)) < tol:
        kind = "nonhyperbolic"
    elif lam1 * lam2 < 0.0:
        kind = "saddle"
    else:
        kind = "node"
    return BlowUpSingularity(p=p, lambda1=lam1, lambda2=lam2, kind=kind)


def _census_verdict(singularities: list[BlowUpSingularity]) -> str:
    kinds = sorted(s.kind for s in singularities)
    if any(k == "nonhyperbolic" for k in kinds):
        return "degenerate"
    saddles = kinds.count("saddle")
    nodes = kinds.count("node")
    if saddles == 1 and nodes == 0:
        return "D1"
    if saddles == 2 and nodes == 1:
        return "D2"
    if saddles == 3 and nodes == 0:
        return "D3"
    return "degenerate"


def _sign_table_verdict(Delta: float, delta: float) -> str:
    if delta > 0.0:
        return "D3"
    if delta < 0.0 and Delta < 0.0:
        return "D1"
    if delta < 0.0 and Delta > 0.0:
        return "D2"
    return "degenerate"


@dataclass(frozen=True)
class ClassificationReport:
    """Census-based verdict with the printed sign-table verdict alongside."""

    invariants: LocalInvariants | None
    singularities: tuple[BlowUpSingularity, ...]
    verdict: str            # transversal | tangential | D1 | D2 | D3 | a_zero_D3 | degenerate
    sign_table_verdict: str
    agrees: bool
    index: float | None     # +1/2 when delta < 0, -1/2 when delta > 0

    def lines(self) -> list[str]:
        out = []
        inv = self.invariants
        if inv is not None:
            out.append(f"case        : {inv.case} (u0 = {inv.u0:g})")
            out.append(
                "jets        : k=%.6g k'=%.3g k''=%.6g k_g=%.6g a=%.3g a'=%.6g b=%.6g"
                % (inv.k0, inv.kprime, inv.ksecond, inv.kg0, inv.a0, inv.aprime, inv.b0))
            if inv.case == "darboux_like":
                out.append(f"A, B        : {inv.A:.9g}, {inv.B:.9g}")
                out.append(f"Delta, delta: {inv.Delta:.9g}, {inv.delta:.9g}")
            if inv.case == "a_zero":
                out.append(f"a1          : {inv.a1:.9g}")
        for s in self.singularities:
            out.append(f"slope p = {s.p:+.9f}: lambda = ({s.lambda1:+.6f}, {s.lambda2:+.6f}) -> {s.kind}")
        out.append(f"census verdict    : {self.verdict}")
        out.append(f"sign-table verdict: {self.sign_table_verdict}")
        out.append(f"agree             : {str(self.agrees).lower()}")
        if self.index is not None:
            out.append(f"foliation index   : {self.index:+.1f}")
        return out


def classify_invariants(A: float, B: float) -> ClassificationReport:
    """Census classification of the abstract jet with parameters (A, B)."""
    Delta, delta = delta_Delta(A, B)
    sings = tuple(_singularity(p, *eigenvalues_at(p, A, B)) for p in roots_R(A, B))
    verdict = _census_verdict(list(sings))
    table = _sign_table_verdict(Delta, delta)
    index = None
    if delta != 0.0:
        index = 0.5 if delta < 0.0 else -0.5
    return ClassificationReport(
        invariants=None, singularities=sings, verdict=verdict,
        sign_table_verdict=table, agrees=(verdict == table), index=index,
    )


def classify_point(spec: UmbilicSurfaceSpec, u0: float, tol: float = JET_TOL) -> ClassificationReport:
    """Classify a darboux-like point of the umbilic curve by eigenvalue census."""
    inv = local_invariants(spec, u0, tol)
    if inv.case != "darboux_like":
        raise HypothesisViolationError(
            f"classify_point requires the darboux_like case, got {inv.case!r} at u0={u0}")
    rep = classify_invariants(inv.A, inv.B)
    return ClassificationReport(
        invariants=inv, singularities=rep.singularities, verdict=rep.verdict,
        sign_table_verdict=rep.sign_table_verdict, agrees=rep.agrees, index=rep.index,
    )


def a_zero_blowup(a1: float) -> ClassificationReport:
    """Blow-up census at a transversal zero of a(u) on a constant-k strip.

    Singular slopes solve p (p^2 - a1 p - 3) = 0 with eigenvalues
    lambda1 = 2 - 2 p^2 + a1 p and lambda2 = 3 p^2 - 2 a1 p - 3.
    """
    root = math.sqrt(a1 * a1 + 12.0)
    slopes = sorted([0.0, 0.5 * (a1 + root), 0.5 * (a1 - root)])
    sings = []
    for p in slopes:
        lam1 = 2.0 - 2.0 * p * p + a1 * p
        lam2 = 3.0 * p * p - 2.0 * a1 * p - 3.0
        sings.append(_singularity(p, lam1, lam2))
    verdict = "a_zero_D3" if _census_verdict(sings) == "D3" else "degenerate"
    return ClassificationReport(
        invariants=None, singularities=tuple(sings), verdict=verdict,
        sign_table_verdict="a_zero_D3", agrees=(verdict == "a_zero_D3"), index=-0.5,
    )


@dataclass(frozen=True)
class ResultantChecks:
    """Numeric resultants beside the closed forms they are claimed to equal."""

    res_R_lambda2: float
    res_R_lambda1: float
    Delta: float
    delta_expr: float      # delta * (16 + (2A - B)^2)

    @property
    def lambda2_matches(self) -> bool:
        return abs(self.res_R_lambda2 - self.Delta) <= 1e-9 * max(1.0, abs(self.Delta))

    @property
    def lambda1_matches(self) -> bool:
        return abs(self.res_R_lambda1 - self.delta_expr) <= 1e-9 * max(1.0, abs(self.delta_expr))


def resultant_checks(A: float, B: float) -> ResultantChecks:
    """Resultants of R with each eigenvalue polynomial, from root products."""
    roots = np.roots([1.0, A - B, -3.0, -A])
    lam1 = np.prod([2.0 + (B - 2.0 * A) * r - 2.0 * r * r for r in roots])
    lam2 = np.prod([3.0 * r * r + 2.0 * (A - B) * r - 3.0 for r in roots])
    Delta, delta = delta_Delta(A, B)
    return ResultantChecks(
        res_R_lambda2=float(lam2.real),
        res_R_lambda1=float(lam1.real),
        Delta=Delta,
        delta_expr=delta * (16.0 + (2.0 * A - B) ** 2),
    )


# ---------------------------------------------------------------------------
# trajectory-based portrait oracle


@dataclass(frozen=True)
class ReducedJet:
    """Linear jet of the divided quadratic: each coefficient is cu*u + cv*v."""

    lu: float
    lv: float
    mu: float
    mv: float
    nu: float
    nv: float
    kind: str = "darboux"    # darboux | a_zero

    def coeffs(self, u: float, v: float) -> tuple[float, float, float]:
        return (self.lu * u + self.lv * v,
                self.mu * u + self.mv * v,
                self.nu * u + self.nv * v)


def darboux_jet(A: float, B: float) -> ReducedJet:
    return ReducedJet(lu=-A, lv=-1.0, mu=2.0, mv=B, nu=A, nv=1.0, kind="darboux")


def a_zero_jet(a1: float) -> ReducedJet:
    return ReducedJet(lu=0.0, lv=-1.0, mu=2.0, mv=a1, nu=0.0, nv=1.0, kind="a_zero")


def _branch_angles(jet: ReducedJet, theta: float) -> tuple[float, float]:
    """Direction angles (mod pi) of the two root families at unit position angle theta."""
    u, v = math.cos(theta), math.sin(theta)
    L, M, N = jet.coeffs(u, v)
    disc = max(M * M - 4.0 * L * N, 0.0)
    s = math.sqrt(disc)
    angles = []
    if abs(L) >= abs(N) and L != 0.0:
        qq = -0.5 * (M + s) if M >= 0 else -0.5 * (M - s)
        for p in (qq / L, N / qq if qq != 0.0 else 0.0):
            angles.append(math.atan2(p, 1.0) % math.pi)
    elif N != 0.0:
        qq = -0.5 * (M + s) if M >= 0 else -0.5 * (M - s)
        for q in (qq / N, L / qq if qq != 0.0 else 0.0):
            angles.append(math.atan2(1.0, q) % math.pi)
    else:
        angles = [0.0, 0.5 * math.pi]
    return angles[0], angles[1]


def _angdist_mod_pi(x: float, y: float) -> float:
    d = (x - y) % math.pi
    return min(d, math.pi - d)


def _wrap_half_pi(x: float) -> float:
    """Reduce an angle difference to (-pi/2, pi/2]."""
    y = (x + 0.5 * math.pi) % math.pi - 0.5 * math.pi
    return 0.5 * math.pi if y == -0.5 * math.pi else y


@dataclass
class SectorProbe:
    foliation: int
    theta_start: float
    ends: tuple[str, str]         # origin | escape | budget
    sector_type: str              # hyperbolic | parabolic | elliptic | inconclusive


@dataclass
class PortraitCensus:
    """Separatrix/sector census of the blown-down portrait, per foliation."""

    rays: tuple[list[float], list[float]]            # invariant ray angles per foliation
    probes: list[SectorProbe]
    separatrices: tuple[int, int]
    parabolic_sectors: tuple[int, int]
    hyperbolic_sectors: tuple[int, int]
    verdict: str                                     # D1 | D2 | D3 | a_zero_D3 | degenerate
    conclusive: bool

    def lines(self) -> list[str]:
        out = []
        for i in (0, 1):
            out.append(
                f"foliation {i+1}: rays at " +
                ", ".join(f"{t:.6f}" for t in self.rays[i]) +
                f" | separatrices {self.separatrices[i]}" +
                f" | sectors hyperbolic {self.hyperbolic_sectors[i]}, parabolic {self.parabolic_sectors[i]}"
            )
        out.append(f"portrait verdict  : {self.verdict}")
        out.append(f"conclusive        : {str(self.conclusive).lower()}")
        return out


def _tracked_branches(jet: ReducedJet, thetas: np.ndarray) -> np.ndarray:
    """Branch angles psi_i(theta) continued from theta[0]; shape (n, 2)."""
    out = np.empty((len(thetas), 2))
    a0, a1 = _branch_angles(jet, thetas[0])
    if a0 > a1:
        a0, a1 = a1, a0
    out[0] = (a0, a1)
    for i in range(1, len(thetas)):
        b0, b1 = _branch_angles(jet, thetas[i])
        keep = (_angdist_mod_pi(b0, out[i - 1, 0]) + _angdist_mod_pi(b1, out[i - 1, 1]))
        swap = (_angdist_mod_pi(b1, out[i - 1, 0]) + _angdist_mod_pi(b0, out[i - 1, 1]))
        out[i] = (b0, b1) if keep <= swap else (b1, b0)
    return out


def _refine_ray(jet: ReducedJet, theta_lo: float, theta_hi: float, psi_anchor: float) -> float:
    """Bisection on f(theta) = wrap(psi(theta) - theta) within a bracketing interval."""
    def f(theta: float) -> float:
        b = _branch_angles(jet, theta)
        psi = b[0] if _angdist_mod_pi(b[0], psi_anchor) <= _angdist_mod_pi(b[1], psi_anchor) else b[1]
        return _wrap_half_pi(psi - theta)

    flo = f(theta_lo)
    for _ in range(64):
        mid = 0.5 * (theta_lo + theta_hi)
        fm = f(mid)
        if flo * fm <= 0.0:
            theta_hi = mid
        else:
            theta_lo, flo = mid, fm
        if theta_hi - theta_lo < 1e-13:
            break
    return 0.5 * (theta_lo + theta_hi)


def _probe_sector(jet: ReducedJet, theta_mid: float, psi_start: float,
                  rho_window: tuple[float, float], max_steps: int) -> tuple[str, str]:
    """Integrate the line field both ways from (rho=0, theta_mid)."""
    ends = []
    for sgn in (1.0, -1.0):
        theta = theta_mid
        rho = 0.0
        chi = psi_start if sgn > 0 else psi_start + math.pi
        end = "budget"
        dt = 0.02
        for _ in range(max_steps):
            b = _branch_angles(jet, theta)
            psi = b[0] if _angdist_mod_pi(b[0], chi) <= _angdist_mod_pi(b[1], chi) else b[1]
            # keep motion orientation continuous
            cand = psi if math.cos(psi - chi) >= 0.0 else psi + math.pi
            chi = cand
            dtheta = math.sin(chi - theta)
            drho = math.cos(chi - theta)
            if abs(dtheta) < 1e-10:
                end = "escape" if drho > 0.0 else "origin"
                break
            theta += dt * dtheta
            rho += dt * drho
            if rho < rho_window[0]:
                end = "origin"
                break
            if rho > rho_window[1]:
                end = "escape"
                break
        ends.append(end)
    return ends[0], ends[1]


def phase_portrait_oracle(jet: ReducedJet, window: tuple[float, float] = (-18.0, 18.0),
                          grid: int = 1440, max_steps: int = 60000) -> PortraitCensus:
    """Separatrix/sector census by direct trajectory integration of the jet field.

    The jet coefficients are linear in (u, v), so the direction field is
    invariant under radial scaling; trajectories are integrated in
    log-radius/angle coordinates and classified by whether each end reaches
    the origin or escapes. The census is independent of the eigenvalue
    formulas used by classify_point.
    """
    thetas = np.linspace(0.0, 2.0 * math.pi, grid, endpoint=False)
    psis = _tracked_branches(jet, thetas)
    rays: tuple[list[float], list[float]] = ([], [])
    for fol in (0, 1):
        f_vals = np.array([_wrap_half_pi(psis[i, fol] - thetas[i]) for i in range(grid)])
        for i in range(grid):
            j = (i + 1) % grid
            fi, fj = f_vals[i], f_vals[j]
            if fi == 0.0:
                rays[fol].append(float(thetas[i]))
                continue
            if fi * fj < 0.0 and abs(fi) < 0.25 * math.pi and abs(fj) < 0.25 * math.pi:
                lo = float(thetas[i])
                hi = float(thetas[j]) if j != 0 else 2.0 * math.pi
                rays[fol].append(_refine_ray(jet, lo, hi, float(psis[i, fol])))
    probes: list[SectorProbe] = []
    parab = [0, 0]
    hyper = [0, 0]
    seps = [0, 0]
    conclusive = True
    for fol in (0, 1):
        r = sorted(rays[fol])
        n = len(r)
        if n == 0:
            conclusive = False
            continue
        sector_types = []
        for i in range(n):
            lo = r[i]
            hi = r[(i + 1) % n] if i + 1 < n else r[0] + 2.0 * math.pi
            mid = 0.5 * (lo + hi)
            idx = int(np.argmin(np.abs(((thetas - mid) + math.pi) % (2 * math.pi) - math.pi)))
            psi_mid = psis[idx, fol]
            ends = _probe_sector(jet, mid, psi_mid, window, max_steps)
            n_origin = sum(1 for x in ends if x == "origin")
            if "budget" in ends:
                stype = "inconclusive"
                conclusive = False
            elif n_origin == 0:
                stype = "hyperbolic"
            elif n_origin == 1:
                stype = "parabolic"
            else:
                stype = "elliptic"
            sector_types.append(stype)
            probes.append(SectorProbe(foliation=fol + 1, theta_start=mid, ends=ends, sector_type=stype))
        # a ray bounding at least one hyperbolic chunk is a separatrix; rays
        # interior to a parabolic region (nodal central lines) are not
        sep_idx = [i for i in range(n)
                   if "hyperbolic" in (sector_types[i - 1], sector_types[i])]
        seps[fol] = len(sep_idx)
        # merge angular chunks between consecutive separatrices into sectors
        if not sep_idx:
            merged = ["parabolic" if "parabolic" in sector_types else sector_types[0]]
        else:
            merged = []
            for a_i, b_i in zip(sep_idx, sep_idx[1:] + [sep_idx[0] + n]):
                chunk = [sector_types[j % n] for j in range(a_i, b_i)]
                if "inconclusive" in chunk:
                    merged.append("inconclusive")
                elif "elliptic" in chunk:
                    merged.append("elliptic")
                elif "parabolic" in chunk:
                    merged.append("parabolic")
                else:
                    merged.append("hyperbolic")
        parab[fol] = merged.count("parabolic")
        hyper[fol] = merged.count("hyperbolic")
    verdict = "degenerate"
    per_fol = [(len(rays[0]), parab[0]), (len(rays[1]), parab[1])]
    if per_fol[0] == per_fol[1]:
        nrays, npar = per_fol[0]
        if nrays == 1 and npar == 0:
            verdict = "D1"
        elif nrays == 3 and npar == 0:
            verdict = "D3"
        elif nrays == 3 and npar >= 1:
            verdict = "D2"
    if jet.kind == "a_zero" and verdict == "D3":
        verdict = "a_zero_D3"
    return PortraitCensus(
        rays=rays, probes=probes, separatrices=(seps[0], seps[1]),
        parabolic_sectors=(parab[0], parab[1]), hyperbolic_sectors=(hyper[0], hyper[1]),
        verdict=verdict, conclusive=conclusive,
    )
