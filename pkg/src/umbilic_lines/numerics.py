"""Small numerical utilities: quadrature, quadratic roots, an adaptive RK pair."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np


def adaptive_simpson(f: Callable[[float], float], a: float, b: float,
                     tol: float = 1e-10, max_depth: int = 40) -> float:
    """Adaptive Simpson quadrature with absolute tolerance."""
    def simpson(x0, x2, f0, f1, f2):
        return (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2)

    def recurse(x0, x2, f0, f1, f2, whole, eps, depth):
        xm = 0.5 * (x0 + x2)
        xl = 0.5 * (x0 + xm)
        xr = 0.5 * (xm + x2)
        fl, fr = f(xl), f(xr)
        left = simpson(x0, xm, f0, fl, f1)
        right = simpson(xm, x2, f1, fr, f2)
        if depth >= max_depth or abs(left + right - whole) <= 15.0 * eps:
            return left + right + (left + right - whole) / 15.0
        half = 0.5 * eps
        return (recurse(x0, xm, f0, fl, f1, left, half, depth + 1)
                + recurse(xm, x2, f1, fr, f2, right, half, depth + 1))

    if a == b:
        return 0.0
    fa, fb = f(a), f(b)
    fm = f(0.5 * (a + b))
    whole = simpson(a, b, fa, fm, fb)
    return recurse(a, b, fa, fm, fb, whole, tol, 0)


def solve_quadratic(c2: float, c1: float, c0: float) -> tuple[float, float]:
    """Real roots of c2 x^2 + c1 x + c0, numerically stable, ascending order.

    Caller guarantees a non-negative discriminant (clamped at zero here).
    """
    disc = c1 * c1 - 4.0 * c2 * c0
    disc = max(disc, 0.0)
    s = math.sqrt(disc)
    if c1 >= 0.0:
        qq = -0.5 * (c1 + s)
    else:
        qq = -0.5 * (c1 - s)
    r1 = qq / c2
    r2 = c0 / qq if qq != 0.0 else 0.0
    return (r1, r2) if r1 <= r2 else (r2, r1)


# Cash-Karp embedded 4(5) pair
_CK_A = (0.0, 1 / 5, 3 / 10, 3 / 5, 1.0, 7 / 8)
_CK_B = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (3 / 10, -9 / 10, 6 / 5),
    (-11 / 54, 5 / 2, -70 / 27, 35 / 27),
    (1631 / 55296, 175 / 512, 575 / 13824, 44275 / 110592, 253 / 4096),
)
_CK_C5 = (37 / 378, 0.0, 250 / 621, 125 / 594, 0.0, 512 / 1771)
_CK_C4 = (2825 / 27648, 0.0, 18575 / 48384, 13525 / 55296, 277 / 14336, 1 / 4)


class StepRejected(Exception):
    """Raised by a field callback to force the current trial step to shrink."""


def rk45_step(f, t, y, h):
    """One Cash-Karp trial step; returns (y5, error_estimate)."""
    k = [f(t, y)]
    for i in range(1, 6):
        yi = y + h * sum(b * kk for b, kk in zip(_CK_B[i], k))
        k.append(f(t + _CK_A[i] * h, yi))
    y5 = y + h * sum(c * kk for c, kk in zip(_CK_C5, k))
    y4 = y + h * sum(c * kk for c, kk in zip(_CK_C4, k))
    return y5, y5 - y4


def integrate_adaptive(f, t0, y0, t_end, *, tol=1e-8, h0=1e-3, h_min=1e-13,
                       h_max=np.inf, max_steps=100000, callback=None):
    """Adaptive Cash-Karp integration of y' = f(t, y) from t0 to t_end.

    callback(t, y) may return False to stop early. Returns (ts, ys, status)
    where status is "done", "stopped", or "budget".
    """
    t = float(t0)
    y = np.asarray(y0, dtype=float)
    direction = 1.0 if t_end >= t0 else -1.0
    h = direction * min(abs(h0), abs(t_end - t0))
    ts, ys = [t], [y.copy()]
    for _ in range(max_steps):
        if direction * (t - t_end) >= 0.0:
            return np.array(ts), np.array(ys), "done"
        if direction * (t + h - t_end) > 0.0:
            h = t_end - t
        try:
            y5, err = rk45_step(f, t, y, h)
        except StepRejected:
            h *= 0.25
            if abs(h) < h_min:
                return np.array(ts), np.array(ys), "stopped"
            continue
        scale = tol * (1.0 + np.max(np.abs(y)))
        ratio = np.max(np.abs(err)) / scale
        if ratio <= 1.0:
            t += h
            y = y5
            ts.append(t)
            ys.append(y.copy())
            if callback is not None and callback(t, y) is False:
                return np.array(ts), np.array(ys), "stopped"
            grow = 5.0 if ratio == 0.0 else 0.9 * ratio ** -0.2
            h *= min(5.0, max(0.2, grow))
            h = direction * min(abs(h), h_max)
        else:
            h *= max(0.1, 0.9 * ratio ** -0.25)
            if abs(h) < h_min:
                return np.array(ts), np.array(ys), "stopped"
    return np.array(ts), np.array(ys), "budget"


def fit_loglog_slope(x: np.ndarray, y: np.ndarray) -> float:
    """Least-squares slope of log|y| against log x."""
    lx, ly = np.log(np.asarray(x)), np.log(np.asarray(y))
    n = len(lx)
    sx, sy = lx.sum(), ly.sum()
    sxx = (lx * lx).sum()
    sxy = (lx * ly).sum()
    return (n * sxy - sx * sy) / (n * sxx - sx * sx)
