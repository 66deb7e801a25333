import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special as sp

from hybridbm import special
from hybridbm.special import ConvergenceError


@pytest.mark.parametrize("a,b,c,z", [
    (0.5, 1.0, 1.5, 0.3), (2.0, 3.5, 4.25, -0.9), (1.5, 2.5, 3.0, -20.0),
    (-3.0, 1.5, 2.0, 0.7), (0.25, 0.75, 1.25, 0.95), (3.0, 4.0, 6.5, -500.0),
])
def test_hyp2f1_matches_mpmath(a, b, c, z):
    ref = float(mpmath.hyp2f1(a, b, c, z))
    assert special.hyp2f1(a, b, c, z) == pytest.approx(ref, rel=1e-12)


def test_hyp2f1_known_closed_forms():
    # 2F1(1,1;2;z) = -log(1-z)/z
    for z in (0.5, -0.5, -3.0):
        assert special.hyp2f1(1, 1, 2, z) == pytest.approx(-math.log1p(-z) / z, rel=1e-13)
    assert special.hyp2f1(0.5, 0.5, 1.5, 0.25) == pytest.approx(math.asin(0.5) / 0.5, rel=1e-13)


def test_hyp2f1_terminating_and_errors():
    # 2F1(-2, b; c; z) is a quadratic polynomial
    b, c, z = 1.5, 2.5, 0.4
    poly = 1 - 2 * b / c * z + b * (b + 1) / (c * (c + 1)) * z * z
    assert special.hyp2f1(-2, b, c, z) == pytest.approx(poly, rel=1e-14)
    with pytest.raises(ConvergenceError):
        special.hyp2f1(1.0, 1.0, 2.0, 1.5)
    with pytest.raises(ConvergenceError):
        special.hyp2f1(1.0, 1.0, -2.0, 0.5)
    with pytest.raises(ConvergenceError):
        special._series(1.0, 1.0, 2.0, 0.9999999, 1e-16, 50)


def test_hyp2f1_extended_precision():
    with mpmath.workdps(40):
        v = special.hyp2f1(mpmath.mpf("1.5"), mpmath.mpf("2.25"), mpmath.mpf("3.5"), mpmath.mpf("-0.8"))
        ref = mpmath.hyp2f1(mpmath.mpf("1.5"), mpmath.mpf("2.25"), mpmath.mpf("3.5"), mpmath.mpf("-0.8"))
        assert abs(v / ref - 1) < mpmath.mpf(10) ** -35


@settings(max_examples=60, deadline=None)
@given(a=st.floats(0.1, 5), b=st.floats(0.1, 5), dc=st.floats(0.1, 5), z=st.floats(-50, 0.9))
def test_hyp2f1_property_vs_mpmath(a, b, dc, z):
    c = a + dc
    ref = float(mpmath.hyp2f1(a, b, c, z))
    assert special.hyp2f1(a, b, c, z) == pytest.approx(ref, rel=1e-10)


def test_gamma_functions():
    assert special.log_gamma_real(10.5) == pytest.approx(float(mpmath.loggamma(10.5)), rel=1e-14)
    for re_, im in ((0.5, 1.0), (2.5, -3.0), (4.0, 10.0)):
        ref = float(abs(mpmath.gamma(mpmath.mpc(re_, im))))
        assert special.gamma_abs_complex(re_, im) == pytest.approx(ref, rel=1e-12)
    assert special.gamma_ratio([3.5], [1.5]) == pytest.approx(2.5 * 1.5, rel=1e-14)


def test_normal_functions():
    assert special.normal_cdf(1.0) == pytest.approx(0.8413447460685429, rel=1e-15)
    assert special.normal_sf(40.0) == pytest.approx(float(mpmath.ncdf(-40)), rel=1e-12)
    for x in (5.0, 25.0, 35.0, 100.0):
        ref = float(mpmath.log(mpmath.ncdf(-x)))
        assert special.log_normal_sf(x) == pytest.approx(ref, rel=1e-12)
    assert special.normal_quantile(0.975) == pytest.approx(1.959963984540054, rel=1e-14)


@pytest.mark.parametrize("nu", [1, 2, 3, 4, 6.5])
def test_student_cdf_and_quantile(nu):
    for x in (-3.0, 0.0, 0.7, 12.0):
        assert special.student_cdf(x, nu) == pytest.approx(sp.stdtr(nu, x), rel=1e-12)
    for u in (1e-6, 0.01, 0.3, 0.5, 0.99):
        q = special.student_quantile(u, nu)
        assert special.student_cdf(q, nu) == pytest.approx(u, rel=1e-10)


def test_student4_far_tail():
    ref = float(1 - mpmath.quad(lambda t: mpmath.gamma(2.5) / (mpmath.sqrt(4 * mpmath.pi) * mpmath.gamma(2))
                                * (1 + t * t / 4) ** -2.5, [-mpmath.inf, 0, 1e3]))
    assert special.student4_sf(1e3) == pytest.approx(ref, rel=1e-8)


def test_assoc_legendre_vs_mpmath():
    for L, M, q in ((1.5, 0.5, 0.3), (2.2, -0.7, -0.4), (0.5, 0.25, 0.8)):
        ref = float(mpmath.legenp(L, M, q, type=2))
        assert special.assoc_legendre(L, M, q) == pytest.approx(ref, rel=1e-11)
