"""Frobenius series machinery against scipy special functions."""

import math

import numpy as np
import pytest
import sympy as sp
from scipy.special import jv

from modestab.odes import (
    FrobeniusSeries,
    ResonanceError,
    frobenius_coefficients,
    indicial_roots,
    indicial_roots_numeric,
    taylor_shift,
)


def bessel_coeffs(nu):
    # x^2 y'' + x y' + (x^2 - nu^2) y = 0
    return np.array([0, 0, 1.0]), np.array([0, 1.0]), np.array([-nu * nu, 0, 1.0])


@pytest.mark.parametrize("nu", [0.0, 0.5, 1.3, 2.0])
def test_bessel_series(nu):
    s = frobenius_coefficients(*bessel_coeffs(nu), 0.0, nu, 60)
    x = np.array([0.3, 1.0, 2.5])
    scale = 1 / (2**nu * math.gamma(nu + 1))
    y, _ = s.value(x)
    assert np.allclose(y.real * scale, jv(nu, x), rtol=1e-12, atol=1e-14)


def test_bessel_derivative():
    s = frobenius_coefficients(*bessel_coeffs(1.3), 0.0, 1.3, 60)
    x = np.array([0.7])
    h = 1e-6
    fd = (s(x + h) - s(x - h)) / (2 * h)
    assert np.allclose(s.value(x)[1], fd, rtol=1e-8)


def test_batched_matches_single():
    nus = np.array([0.5, 1.5])
    p2 = np.array([[0, 0], [0, 0], [1.0, 1.0]])
    p1 = np.array([[0, 0], [1.0, 1.0]])
    p0 = np.array([-nus**2, [0, 0], [1.0, 1.0]])
    batch = frobenius_coefficients(p2, p1, p0, 0.0, nus, 40)
    for i, nu in enumerate(nus):
        single = frobenius_coefficients(*bessel_coeffs(nu), 0.0, nu, 40)
        assert np.allclose(batch.coeffs[:, i], single.coeffs)


def test_resonance_detected():
    # Bessel nu = 1 at the lower index -1 hits sigma + 2 = 1
    with pytest.raises(ResonanceError):
        frobenius_coefficients(*bessel_coeffs(1.0), 0.0, -1.0, 10)


def test_non_root_rejected():
    with pytest.raises(ValueError):
        frobenius_coefficients(*bessel_coeffs(1.0), 0.0, 0.3, 10)


def test_indicial_roots_agree():
    assert sorted(indicial_roots_numeric(*bessel_coeffs(1.5), 0.0).real) == pytest.approx([-1.5, 1.5])
    x = sp.Symbol("x")
    roots = indicial_roots(x**2, x, x**2 - sp.Rational(9, 4), x, 0)
    assert sorted(roots) == [sp.Rational(-3, 2), sp.Rational(3, 2)]


def test_taylor_shift():
    # (x - 1)^2 re-expanded about 1 is s^2
    assert np.allclose(taylor_shift(np.array([1.0, -2.0, 1.0]), 1.0).ravel(), [0, 0, 1])


def test_series_call_is_value():
    s = FrobeniusSeries(x0=0.0, sigma=0.0, coeffs=np.array([1.0, 2.0, 3.0]))
    assert s(np.array([2.0]))[0] == pytest.approx(1 + 4 + 12)
