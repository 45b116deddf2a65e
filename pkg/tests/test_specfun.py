import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iltmoments.errors import DomainError
from iltmoments.specfun import (
    bessel_k0,
    bessel_k1,
    special_constants,
    trigamma,
    x_bessel_k1,
    zeta2,
    zeta3,
    zeta_f,
    zeta_f_series,
)

mpmath.mp.dps = 30


def _rel(a, b):
    return abs(a - b) / abs(b)


@pytest.mark.parametrize("x", [1e-8, 1e-3, 0.1, 0.5, 1.0, 1.999, 2.0, 2.001, 5.0, 20.0, 100.0, 700.0])
def test_k0_k1_points(x):
    assert _rel(bessel_k0(x), float(mpmath.besselk(0, x))) < 5e-15
    assert _rel(bessel_k1(x), float(mpmath.besselk(1, x))) < 5e-15


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=1e-6, max_value=60.0))
def test_k0_k1_random(x):
    assert _rel(bessel_k0(x), float(mpmath.besselk(0, x))) < 1e-14
    assert _rel(bessel_k1(x), float(mpmath.besselk(1, x))) < 1e-14


def test_bessel_domain():
    for bad in (0.0, -1.0, float("nan")):
        with pytest.raises(DomainError):
            bessel_k0(bad)
        with pytest.raises(DomainError):
            bessel_k1(bad)
    assert bessel_k0(800.0) == 0.0


def test_x_k1_near_zero():
    assert x_bessel_k1(0.0) == 1.0
    for x in (1e-12, 1e-6, 9.9e-5, 1.01e-4, 1e-3):
        exact = float(x * mpmath.besselk(1, x))
        assert abs(x_bessel_k1(x) - exact) < 1e-15
    with pytest.raises(DomainError):
        x_bessel_k1(-1e-3)


@pytest.mark.parametrize("x", [1 / 3, 2 / 3, 1.0, 0.01, 7.5, 30.0])
def test_trigamma(x):
    assert _rel(trigamma(x), float(mpmath.psi(1, x))) < 1e-14


def test_constants():
    assert abs(zeta3() - float(mpmath.zeta(3))) < 1e-16
    assert zeta2() == math.pi**2 / 6
    zf = (mpmath.psi(1, mpmath.mpf(1) / 3) - mpmath.psi(1, mpmath.mpf(2) / 3)) / 9
    assert abs(zeta_f() - float(zf)) < 1e-15
    c = special_constants()
    assert (c.zeta2, c.zeta3, c.zeta_f) == (zeta2(), zeta3(), zeta_f())


def test_zeta_f_routes_agree():
    b = zeta_f_series()
    assert b.lower <= zeta_f() + 1e-15 and zeta_f() - 1e-15 <= b.upper
    assert abs(b.estimate - zeta_f()) < 1e-12
    small = zeta_f_series(100)
    assert small.lower < b.lower < small.upper
