import math

import numpy as np
import pytest

from umbilic_lines.errors import ProfileSpecError, UnsupportedDerivativeError
from umbilic_lines.profiles import (ScalarProfile, constant_profile,
                                    eval_profile)

TAU = 2.0 * math.pi


def test_constant_profile_value_and_derivative():
    p = constant_profile(2.0)
    assert eval_profile(p, 0.7) == 2.0
    assert eval_profile(p, 0.7, 1) == 0.0
    assert eval_profile(p, -3.1, 3) == 0.0


def test_fourier_sin_derivative_at_zero():
    p = ScalarProfile("fourier", (0.0, 0.0, 1.0), period=TAU)  # sin(u)
    assert eval_profile(p, 0.0, 1) == pytest.approx(1.0, abs=1e-15)
    assert eval_profile(p, 0.0) == pytest.approx(0.0, abs=1e-15)
    assert eval_profile(p, math.pi / 2) == pytest.approx(1.0, abs=1e-15)


def test_unsupported_derivative_order():
    p = constant_profile(1.0)
    with pytest.raises(UnsupportedDerivativeError):
        p.eval(0.0, 4)
    with pytest.raises(UnsupportedDerivativeError):
        p.eval(0.0, -1)


def test_degree_bounds_enforced():
    with pytest.raises(ProfileSpecError):
        ScalarProfile("polynomial", tuple(range(18)))
    with pytest.raises(ProfileSpecError):
        ScalarProfile("fourier", tuple([0.0] + [0.1] * 34), period=TAU)
    with pytest.raises(ProfileSpecError):
        ScalarProfile("fourier", (0.0, 1.0), period=TAU)  # broken pair
    with pytest.raises(ProfileSpecError):
        ScalarProfile("fourier", (0.0, 1.0, 0.5))  # no period


def test_polynomial_derivatives_match_manual():
    p = ScalarProfile("polynomial", (1.0, -2.0, 0.5, 3.0))
    u = 0.83
    assert p.eval(u) == pytest.approx(1 - 2 * u + 0.5 * u**2 + 3 * u**3, rel=1e-15)
    assert p.eval(u, 1) == pytest.approx(-2 + u + 9 * u**2, rel=1e-15)
    assert p.eval(u, 2) == pytest.approx(1 + 18 * u, rel=1e-15)
    assert p.eval(u, 3) == pytest.approx(18.0, rel=1e-15)


def test_fourier_periodicity_100_random_points():
    rng = np.random.default_rng(1)
    l = 3.7
    p = ScalarProfile("fourier", (0.4, 0.3, -0.2, 0.05, 0.11), period=l)
    for u in rng.uniform(-20, 20, 100):
        assert abs(p.eval(u) - p.eval(u + l)) < 1e-12


@pytest.mark.parametrize("order", [0, 1, 2])
def test_centered_difference_matches_next_derivative(order):
    # log-log slope of the FD error must be >= 1.8 over h in [1e-4, 1e-2]
    p = ScalarProfile("fourier", (0.2, 1.0, -0.7, 0.3, 0.4), period=TAU)
    u = 0.923
    hs = np.geomspace(1e-4, 1e-2, 7)
    errs = []
    for h in hs:
        fd = (p.eval(u + h, order) - p.eval(u - h, order)) / (2 * h)
        errs.append(abs(fd - p.eval(u, order + 1)) + 1e-300)
    slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    assert slope >= 1.8


def test_antiderivative_fourier_and_polynomial():
    l = TAU
    p = ScalarProfile("fourier", (0.5, 0.3, -0.2), period=l)
    anti = p.antiderivative()
    assert anti.eval(0.0) == pytest.approx(0.0, abs=1e-15)
    for u in (0.3, 1.7, 4.4):
        assert anti.eval(u, 1) == pytest.approx(p.eval(u), rel=1e-12)
    q = ScalarProfile("polynomial", (1.0, 2.0, 3.0))
    anti_q = q.antiderivative()
    assert anti_q.eval(2.0) == pytest.approx(2 + 4 + 8, rel=1e-14)


def test_profile_total_on_all_reals():
    p = ScalarProfile("fourier", (0.0, 1.0, 0.0), period=TAU)
    for u in (-1e6, -12.3, 0.0, 57.1, 1e6):
        assert math.isfinite(p.eval(u))
        assert math.isfinite(p.eval(u, 3))
