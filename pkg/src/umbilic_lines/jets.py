"""Third-order jet arithmetic.

A jet holds the value and first three derivatives of a scalar function at a
point. Profile compositions (products, trig of an integral, square roots)
propagate derivatives exactly through these rules, so downstream code never
falls back on finite differences for profile jets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_BINOM3 = ((1.0,), (1.0, 1.0), (1.0, 2.0, 1.0), (1.0, 3.0, 3.0, 1.0))


@dataclass(frozen=True)
class Jet3:
    """Value and derivatives (f, f', f'', f''') at a point."""

    f0: float
    f1: float = 0.0
    f2: float = 0.0
    f3: float = 0.0

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.f0, self.f1, self.f2, self.f3)

    def deriv(self, order: int) -> float:
        return self.as_tuple()[order]

    def __add__(self, other):
        o = _coerce(other)
        return Jet3(self.f0 + o.f0, self.f1 + o.f1, self.f2 + o.f2, self.f3 + o.f3)

    __radd__ = __add__

    def __neg__(self):
        return Jet3(-self.f0, -self.f1, -self.f2, -self.f3)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        o = _coerce(other)
        a, b = self.as_tuple(), o.as_tuple()
        out = [0.0] * 4
        for n in range(4):
            s = 0.0
            for k in range(n + 1):
                s += _BINOM3[n][k] * a[k] * b[n - k]
            out[n] = s
        return Jet3(*out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * _coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return _coerce(other) * self.reciprocal()

    def compose(self, g0: float, g1: float, g2: float, g3: float) -> "Jet3":
        """Chain rule for g(self) given derivatives of g at self.f0."""
        f1, f2, f3 = self.f1, self.f2, self.f3
        return Jet3(
            g0,
            g1 * f1,
            g2 * f1 * f1 + g1 * f2,
            g3 * f1 ** 3 + 3.0 * g2 * f1 * f2 + g1 * f3,
        )

    def reciprocal(self) -> "Jet3":
        x = self.f0
        return self.compose(1.0 / x, -1.0 / x**2, 2.0 / x**3, -6.0 / x**4)

    def sin(self) -> "Jet3":
        s, c = math.sin(self.f0), math.cos(self.f0)
        return self.compose(s, c, -s, -c)

    def cos(self) -> "Jet3":
        s, c = math.sin(self.f0), math.cos(self.f0)
        return self.compose(c, -s, -c, s)

    def sqrt(self) -> "Jet3":
        r = math.sqrt(self.f0)
        return self.compose(r, 0.5 / r, -0.25 / r**3, 0.375 / r**5)

    def power(self, exponent: float) -> "Jet3":
        x = self.f0
        g0 = x**exponent
        g1 = exponent * x ** (exponent - 1)
        g2 = exponent * (exponent - 1) * x ** (exponent - 2)
        g3 = exponent * (exponent - 1) * (exponent - 2) * x ** (exponent - 3)
        return self.compose(g0, g1, g2, g3)


def _coerce(x) -> Jet3:
    if isinstance(x, Jet3):
        return x
    return Jet3(float(x))


def constant(value: float) -> Jet3:
    return Jet3(float(value))


def variable(value: float) -> Jet3:
    """The identity jet u -> u at the given point."""
    return Jet3(float(value), 1.0)
