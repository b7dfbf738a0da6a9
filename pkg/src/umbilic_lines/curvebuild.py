"""Space-curve and adapted-frame construction by ODE integration.

The adapted frame {T, S, N} (S = N x T) along the curve obeys the linear
system  c' = T,  T' = k_g S + k_n N,  S' = -k_g T,  N' = -k_n T,  i.e. the
zero-geodesic-torsion case that holds along a curve of umbilic points. A
classical fixed-step RK4 scheme with per-step re-orthonormalization keeps the
frame orthonormal to roundoff; quintic-spline interpolation makes the frame
smoothly evaluable between samples.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
import numpy as np

from .framespline import PiecewisePoly
from .jets import Jet3
from .numerics import adaptive_simpson
from .profiles import DerivedProfile, ProfileLike, ScalarProfile

DEFAULT_FRAME_STEP = 1e-3


@dataclass
class FrameField:
    """Sampled curve-and-frame data plus smooth interpolation.

    samples cover [u_min, u_max] (a closed-curve field may carry margin
    beyond [0, l] so stencils near the endpoints stay interior).
    """

    u: np.ndarray          # (n,)
    c: np.ndarray          # (n, 3)
    T: np.ndarray          # (n, 3)
    S: np.ndarray          # (n, 3)
    N: np.ndarray          # (n, 3)
    step: float
    l: float
    closed: bool
    _spline: PiecewisePoly | None = field(default=None, repr=False)

    @property
    def u_min(self) -> float:
        return float(self.u[0])

    @property
    def u_max(self) -> float:
        return float(self.u[-1])

    def spline(self) -> PiecewisePoly:
        if self._spline is None:
            stacked = np.hstack([self.c, self.S, self.N, self.T])
            self._spline = PiecewisePoly(self.u, stacked)
        return self._spline

    def at(self, u: float) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(c, T, S, N) at arbitrary u inside the sampled range."""
        vals = self.spline().value(u)
        return vals[0:3], vals[9:12], vals[3:6], vals[6:9]

    def orthonormality_residual(self) -> float:
        """max over samples of |T.S|, |T.N|, |S.N|, ||v|-1| for v in {T,S,N}."""
        dots = [
            np.abs(np.einsum("ij,ij->i", self.T, self.S)),
            np.abs(np.einsum("ij,ij->i", self.T, self.N)),
            np.abs(np.einsum("ij,ij->i", self.S, self.N)),
            np.abs(np.linalg.norm(self.T, axis=1) - 1.0),
            np.abs(np.linalg.norm(self.S, axis=1) - 1.0),
            np.abs(np.linalg.norm(self.N, axis=1) - 1.0),
        ]
        return float(max(d.max() for d in dots))

    def handedness(self) -> float:
        """min over samples of det[T S N]; positive means right-handed."""
        mats = np.stack([self.T, self.S, self.N], axis=1)
        return float(np.linalg.det(mats).min())

    def index_of(self, u: float) -> int:
        return int(np.argmin(np.abs(self.u - u)))

    def monodromy(self) -> dict:
        """Mismatch between the frame at u=l and at u=0."""
        i0, i1 = self.index_of(0.0), self.index_of(self.l)
        r0 = np.stack([self.T[i0], self.S[i0], self.N[i0]])
        r1 = np.stack([self.T[i1], self.S[i1], self.N[i1]])
        rel = r1 @ r0.T
        cos_angle = 0.5 * (np.trace(rel) - 1.0)
        angle = math.acos(min(1.0, max(-1.0, cos_angle)))
        return {
            "position_residual": float(np.linalg.norm(self.c[i1] - self.c[i0])),
            "rotation_angle": float(angle),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = ["u", "cx", "cy", "cz", "Tx", "Ty", "Tz", "Sx", "Sy", "Sz", "Nx", "Ny", "Nz"]
        buf.write(",".join(cols) + "\n")
        for i in range(len(self.u)):
            row = [self.u[i], *self.c[i], *self.T[i], *self.S[i], *self.N[i]]
            buf.write(",".join("%.17g" % x for x in row) + "\n")
        return buf.getvalue()


def _system_matrix(kn: float, kg: float) -> np.ndarray:
    # rows act on Y = [c, T, S, N]
    return np.array([
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, kg, kn],
        [0.0, -kg, 0.0, 0.0],
        [0.0, -kn, 0.0, 0.0],
    ])


def _renormalize(y: np.ndarray) -> np.ndarray:
    t = y[1] / np.linalg.norm(y[1])
    s = y[2] - np.dot(y[2], t) * t
    s /= np.linalg.norm(s)
    n = np.cross(t, s)
    out = y.copy()
    out[1], out[2], out[3] = t, s, n
    return out


def _march(k: ProfileLike, k_g: ProfileLike, u0: float, u1: float, n_steps: int,
           y0: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    us = np.linspace(u0, u1, n_steps + 1)
    h = (u1 - u0) / n_steps
    ys = np.empty((n_steps + 1, 4, 3))
    y = y0.copy()
    ys[0] = y
    for i in range(n_steps):
        u = us[i]
        m1 = _system_matrix(k.eval(u), k_g.eval(u))
        m2 = _system_matrix(k.eval(u + 0.5 * h), k_g.eval(u + 0.5 * h))
        m4 = _system_matrix(k.eval(u + h), k_g.eval(u + h))
        k1 = m1 @ y
        k2 = m2 @ (y + 0.5 * h * k1)
        k3 = m2 @ (y + 0.5 * h * k2)
        k4 = m4 @ (y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        y = _renormalize(y)
        ys[i + 1] = y
    return us, ys


def integrate_darboux_frame(k: ProfileLike, k_g: ProfileLike, l: float,
                            step: float = DEFAULT_FRAME_STEP, *,
                            margin: float = 0.0, closed: bool = False) -> FrameField:
    """Integrate the adapted frame from the identity frame at u = 0.

    The frame covers [-margin, l + margin]; samples are uniformly spaced with
    spacing <= step.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    if l <= 0:
        raise ValueError("l must be positive")
    y0 = np.vstack([np.zeros(3), np.eye(3)])
    n_fwd = max(8, int(math.ceil((l + margin) / step)))
    us_f, ys_f = _march(k, k_g, 0.0, l + margin, n_fwd, y0)
    if margin > 0.0:
        n_back = max(8, int(math.ceil(margin / step)))
        us_b, ys_b = _march(k, k_g, 0.0, -margin, n_back, y0)
        us = np.concatenate([us_b[:0:-1], us_f])
        ys = np.concatenate([ys_b[:0:-1], ys_f])
    else:
        us, ys = us_f, ys_f
    return FrameField(
        u=us, c=ys[:, 0], T=ys[:, 1], S=ys[:, 2], N=ys[:, 3],
        step=step, l=l, closed=closed,
    )


@dataclass(frozen=True)
class ClosureReport:
    """Whether a torsion profile admits a closed umbilic-curve strip."""

    total_torsion: float
    residual: float          # total torsion reduced to (-pi, pi]
    passes: bool
    frame_monodromy_angle: float
    tolerance: float

    def lines(self) -> list[str]:
        return [
            f"total torsion     : {self.total_torsion:.12g}",
            f"residual (mod 2pi): {self.residual:.12g}",
            f"frame monodromy   : {self.frame_monodromy_angle:.12g}",
            f"tolerance         : {self.tolerance:g}",
            f"passes            : {str(self.passes).lower()}",
        ]


def _reduce_mod_2pi(x: float) -> float:
    r = math.remainder(x, 2.0 * math.pi)
    if r <= -math.pi:
        r += 2.0 * math.pi
    return r


def _twist_monodromy(tau: ProfileLike, l: float, n_steps: int = 8192) -> float:
    """Rotation angle of the normal-plane transport, by RK4 on SO(2)."""
    h = l / n_steps
    q = np.eye(2)

    def rhs(u, mat):
        t = tau.eval(u)
        return np.array([[0.0, -t], [t, 0.0]]) @ mat

    u = 0.0
    winding = 0
    prev = 0.0
    for _ in range(n_steps):
        k1 = rhs(u, q)
        k2 = rhs(u + 0.5 * h, q + 0.5 * h * k1)
        k3 = rhs(u + 0.5 * h, q + 0.5 * h * k2)
        k4 = rhs(u + h, q + h * k3)
        q = q + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        # project back to SO(2)
        ang = math.atan2(q[1, 0], q[0, 0])
        if ang - prev > math.pi:
            winding -= 1
        elif ang - prev < -math.pi:
            winding += 1
        prev = ang
        q = np.array([[math.cos(ang), -math.sin(ang)], [math.sin(ang), math.cos(ang)]])
        u += h
    return _reduce_mod_2pi(prev + 2.0 * math.pi * winding)


def closure_check(tau: ProfileLike, l: float, tol: float = 1e-6) -> ClosureReport:
    """Check that the total torsion over [0, l] is an integer multiple of 2*pi."""
    if l <= 0:
        raise ValueError("l must be positive")
    total = adaptive_simpson(lambda u: tau.eval(u), 0.0, l, tol=1e-10)
    residual = _reduce_mod_2pi(total)
    return ClosureReport(
        total_torsion=total,
        residual=residual,
        passes=abs(residual) < tol,
        frame_monodromy_angle=_twist_monodromy(tau, l),
        tolerance=tol,
    )


def darboux_from_frenet(kappa: ScalarProfile, tau: ScalarProfile,
                        theta0: float = 0.0) -> tuple[DerivedProfile, DerivedProfile, DerivedProfile]:
    """Adapted-frame data (k_n, k_g, theta) for a curve given (kappa, tau).

    theta(u) = theta0 - integral of tau from 0 to u, which makes the geodesic
    torsion of the resulting strip vanish identically; then
    k_n = kappa cos(theta) and k_g = -kappa sin(theta).
    """
    anti = tau.antiderivative()

    def theta_jet(u: float) -> Jet3:
        return Jet3(theta0 - anti.eval(u, 0), -tau.eval(u, 0), -tau.eval(u, 1), -tau.eval(u, 2))

    def kn_jet(u: float) -> Jet3:
        return kappa.jet(u) * theta_jet(u).cos()

    def kg_jet(u: float) -> Jet3:
        return -1.0 * (kappa.jet(u) * theta_jet(u).sin())

    return (
        DerivedProfile(kn_jet, label="k_n"),
        DerivedProfile(kg_jet, label="k_g"),
        DerivedProfile(theta_jet, label="theta"),
    )
