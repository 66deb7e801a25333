import math

import pytest
from hypothesis import given, strategies as st

from hybridbm import (ModelParams, ParameterError, Regime, classify_market, derive_nu,
                      from_hyperbolic, to_hyperbolic)


def test_nu_from_parameters():
    assert derive_nu(ModelParams(mu2=1.5, sigma2=1.0)) == 4.0
    assert ModelParams(mu2=0.0, sigma2=2.0).nu == 1.0
    assert ModelParams.from_nu(-2.0, sigma2=0.5).nu == pytest.approx(-2.0, abs=1e-15)


def test_nu_undefined_without_sigma2():
    with pytest.raises(ParameterError, match="pure arithmetic"):
        derive_nu(ModelParams(sigma2=0.0))


@pytest.mark.parametrize("kwargs", [dict(sigma1=0.0), dict(sigma2=-1.0), dict(rho=1.5),
                                    dict(mu1=math.nan)])
def test_invalid_parameters(kwargs):
    with pytest.raises(ParameterError):
        ModelParams(**kwargs)


@pytest.mark.parametrize("nu,regime,momentum", [
    (4.0, Regime.VarianceStable, False),
    (2.0, Regime.GaussianVarianceBoundary, False),
    (1.0, Regime.VarianceExplosive, False),
    (-0.5, Regime.VarianceExplosive, True),
])
def test_classification(nu, regime, momentum):
    state = classify_market(ModelParams.from_nu(nu))
    assert state.regime is regime
    assert state.momentum_dominated is momentum


def test_classification_scales_and_dict():
    state = classify_market(ModelParams(mu2=1.5, sigma1=2.0, sigma2=1.0))
    d = state.to_dict()
    assert d["nu"] == 4.0 and d["regime"] == "VarianceStable"
    assert state.timescale == 1.0 and state.price_scale == 0.5


def test_boundary_is_exact_equality():
    p = ModelParams(mu2=0.5 + 1e-15, sigma2=1.0)
    assert classify_market(p).regime is Regime.VarianceStable


def test_hyperbolic_coordinates():
    p = ModelParams(sigma1=2.0, sigma2=0.5)
    h = to_hyperbolic(3.0, p, t=4.0)
    assert h.u == pytest.approx(math.asinh(0.75))
    assert h.z == pytest.approx(h.u / 0.5)
    assert h.tau == pytest.approx(1.0)


@given(x=st.floats(-1e6, 1e6), s1=st.floats(0.01, 10), s2=st.floats(0.01, 10))
def test_hyperbolic_round_trip(x, s1, s2):
    p = ModelParams(sigma1=s1, sigma2=s2)
    back = from_hyperbolic(to_hyperbolic(x, p).z, p)
    assert back == pytest.approx(x, rel=1e-9, abs=1e-9 * s1 / s2)


@given(nu=st.floats(-10, 10), s2=st.floats(0.05, 5))
def test_from_nu_inverts_derive_nu(nu, s2):
    assert ModelParams.from_nu(nu, sigma2=s2).nu == pytest.approx(nu, abs=1e-12)
