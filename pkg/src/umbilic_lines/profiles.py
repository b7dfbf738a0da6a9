"""Smooth scalar functions of arclength with exact derivatives to order 3.

Two concrete representations are supported: finite Fourier series (periodic,
for closed-curve scenarios) and polynomials (local scenarios). Both carry
analytic derivatives, so jets used by the classification and return-map code
are exact up to roundoff rather than finite-difference approximations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ProfileSpecError, UnsupportedDerivativeError
from .jets import Jet3

MAX_ORDER = 3
MAX_DEGREE = 16  # bound on polynomial degree / Fourier frequency index

_HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class ScalarProfile:
    """A smooth real function of arclength u.

    kind="fourier": coeffs = [c0, a1, b1, a2, b2, ...] for
        c0 + sum_j a_j cos(2*pi*j*u/period) + b_j sin(2*pi*j*u/period);
    kind="polynomial": coeffs in ascending powers of u.
    """

    kind: str
    coefficients: tuple[float, ...]
    period: float | None = None

    def __post_init__(self):
        if self.kind not in ("fourier", "polynomial"):
            raise ProfileSpecError(f"unknown profile kind {self.kind!r}")
        object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients))
        if not self.coefficients:
            raise ProfileSpecError("profile needs at least one coefficient")
        if self.kind == "fourier":
            if self.period is None or self.period <= 0:
                raise ProfileSpecError("fourier profile requires a positive period")
            n_pairs = (len(self.coefficients) - 1 + 1) // 2
            if len(self.coefficients) % 2 == 0:
                raise ProfileSpecError(
                    "fourier coefficients must be [c0, a1, b1, ...] with full cos/sin pairs"
                )
            if n_pairs > MAX_DEGREE:
                raise ProfileSpecError(f"fourier frequency index bounded by {MAX_DEGREE}")
        else:
            if len(self.coefficients) - 1 > MAX_DEGREE:
                raise ProfileSpecError(f"polynomial degree bounded by {MAX_DEGREE}")

    def eval(self, u: float, order: int = 0) -> float:
        if not 0 <= order <= MAX_ORDER:
            raise UnsupportedDerivativeError(
                f"derivative order {order} unsupported (0..{MAX_ORDER})"
            )
        if self.kind == "fourier":
            return self._eval_fourier(u, order)
        return self._eval_polynomial(u, order)

    def __call__(self, u: float, order: int = 0) -> float:
        return self.eval(u, order)

    def jet(self, u: float) -> Jet3:
        return Jet3(*(self.eval(u, n) for n in range(4)))

    def _eval_fourier(self, u: float, order: int) -> float:
        c = self.coefficients
        omega0 = 2.0 * math.pi / self.period
        total = c[0] if order == 0 else 0.0
        shift = order * _HALF_PI
        for j in range(1, (len(c) - 1) // 2 + 1):
            a, b = c[2 * j - 1], c[2 * j]
            w = j * omega0
            wn = w**order
            # d^n/du^n cos(wu) = w^n cos(wu + n*pi/2), likewise for sin
            total += wn * (a * math.cos(w * u + shift) + b * math.sin(w * u + shift))
        return total

    def _eval_polynomial(self, u: float, order: int) -> float:
        c = self.coefficients
        total = 0.0
        for j in range(len(c) - 1, order - 1, -1):
            fac = 1.0
            for m in range(order):
                fac *= j - m
            total = total * u + fac * c[j]
        return total

    def is_constant(self, tol: float = 0.0) -> bool:
        return all(abs(c) <= tol for c in self.coefficients[1:])

    def antiderivative(self) -> "ScalarProfile | _AffinePlusFourier":
        """Exact antiderivative vanishing at u = 0."""
        c = self.coefficients
        if self.kind == "polynomial":
            out = [0.0] + [c[j] / (j + 1) for j in range(len(c))]
            return ScalarProfile("polynomial", tuple(out))
        omega0 = 2.0 * math.pi / self.period
        pairs = []
        for j in range(1, (len(c) - 1) // 2 + 1):
            a, b = c[2 * j - 1], c[2 * j]
            w = j * omega0
            pairs.extend([-b / w, a / w])  # cos-> sin/w, sin-> -cos/w
        periodic = ScalarProfile("fourier", tuple([0.0] + pairs), period=self.period)
        return _AffinePlusFourier(slope=c[0], periodic=periodic, offset=-periodic.eval(0.0))


def constant_profile(value: float) -> ScalarProfile:
    return ScalarProfile("polynomial", (value,))


@dataclass(frozen=True)
class _AffinePlusFourier:
    """slope*u + offset + periodic(u); closed under differentiation to order 3."""

    slope: float
    periodic: ScalarProfile
    offset: float = 0.0

    def eval(self, u: float, order: int = 0) -> float:
        if not 0 <= order <= MAX_ORDER:
            raise UnsupportedDerivativeError(f"derivative order {order} unsupported")
        base = self.periodic.eval(u, order)
        if order == 0:
            return base + self.slope * u + self.offset
        if order == 1:
            return base + self.slope
        return base

    def __call__(self, u: float, order: int = 0) -> float:
        return self.eval(u, order)

    def jet(self, u: float) -> Jet3:
        return Jet3(*(self.eval(u, n) for n in range(4)))


@dataclass(frozen=True)
class DerivedProfile:
    """Profile defined by a jet-valued callable (e.g. kappa*cos(theta))."""

    fn: Callable[[float], Jet3]
    label: str = "derived"

    def eval(self, u: float, order: int = 0) -> float:
        if not 0 <= order <= MAX_ORDER:
            raise UnsupportedDerivativeError(f"derivative order {order} unsupported")
        return self.fn(u).deriv(order)

    def __call__(self, u: float, order: int = 0) -> float:
        return self.eval(u, order)

    def jet(self, u: float) -> Jet3:
        return self.fn(u)


ProfileLike = ScalarProfile | _AffinePlusFourier | DerivedProfile


def eval_profile(p: ProfileLike, u: float, order: int = 0) -> float:
    """Order-th analytic derivative of the profile at u."""
    return p.eval(u, order)


def sample_profile(p: ProfileLike, us: Sequence[float], order: int = 0) -> np.ndarray:
    return np.array([p.eval(float(u), order) for u in us])


def profile_from_config(cfg: dict, name: str, period_hint: float | None = None) -> ScalarProfile:
    """Build a ScalarProfile from a scenario-config mapping.

    Accepted keys: kind (fourier|polynomial|constant), coeffs, period.
    """
    if isinstance(cfg, (int, float)):
        return constant_profile(float(cfg))
    if not isinstance(cfg, dict):
        raise ProfileSpecError(f"profile {name!r}: expected a mapping or number")
    kind = cfg.get("kind")
    if kind == "constant":
        if "value" not in cfg:
            raise ProfileSpecError(f"profile {name!r}: constant profile needs 'value'")
        return constant_profile(float(cfg["value"]))
    if kind not in ("fourier", "polynomial"):
        raise ProfileSpecError(f"profile {name!r}: unknown kind {kind!r}")
    coeffs = cfg.get("coeffs")
    if not isinstance(coeffs, (list, tuple)) or not coeffs:
        raise ProfileSpecError(f"profile {name!r}: 'coeffs' must be a non-empty list")
    period = cfg.get("period", period_hint if kind == "fourier" else None)
    try:
        return ScalarProfile(kind, tuple(coeffs), period=period)
    except ProfileSpecError as exc:
        raise ProfileSpecError(f"profile {name!r}: {exc}") from exc
