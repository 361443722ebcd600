import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from corrqsl import ModelParams, kernel_closed_form, kernel_quadrature
from corrqsl.kernels import _closed_form_loop, _closed_form_numpy, kernel_arrays, prefactors
from corrqsl.special import gamma

from helpers import model_params, rng


def test_origin_values():
    k = kernel_closed_form(ModelParams(), 0.0)
    assert k.r == 0.0 and k.phi == 0.0 and k.r_dot == 0.0 and k.s_dot == 0.0
    assert k.s == pytest.approx(-0.5 * gamma(0.01), rel=1e-14)


def test_reference_point():
    # r(1) = 4 alpha Gamma(5) (1 - cos(5 pi/4) 2^{-5/2}) = 1.08 exactly
    assert kernel_closed_form(ModelParams(), 1.0).r == pytest.approx(1.08, rel=1e-14)


def test_closed_form_matches_quadrature_random():
    g = rng(101)
    worst = 0.0
    for _ in range(500):
        p = ModelParams(alpha=g.uniform(0, 0.2), mu=g.uniform(0.05, 8.0), v=g.uniform(0.005, 2.0),
                        omega_c=g.uniform(0.5, 2.0))
        t = g.uniform(0, 20)
        cf, q = kernel_closed_form(p, t), kernel_quadrature(p, t)
        worst = max(worst, abs(cf.r - q.r), abs(cf.s - q.s), abs(cf.phi - q.phi))
    assert worst < 1e-6


def test_derivatives_central_difference():
    g = rng(102)
    checked = 0
    for _ in range(200):
        p = ModelParams(alpha=g.uniform(0, 0.2), mu=g.uniform(0.05, 8.0), v=g.uniform(0.005, 2.0),
                        omega_c=g.uniform(0.5, 2.0))
        t = g.uniform(0, 20)
        h = 1e-5 * max(1.0, t)
        t = max(t, h)
        lo, hi, mid = kernel_closed_form(p, t - h), kernel_closed_form(p, t + h), kernel_closed_form(p, t)
        for name in ("r", "s", "phi"):
            exact = getattr(mid, name + "_dot")
            fd = (getattr(hi, name) - getattr(lo, name)) / (2 * h)
            # rounding floor of the difference quotient; skip where it alone exceeds the tolerance
            floor = 4 * np.finfo(float).eps * max(abs(getattr(hi, name)), abs(getattr(lo, name))) / (2 * h)
            if abs(exact) > 1e-8 and floor < 1e-5 * abs(exact):
                assert abs(fd - exact) <= 1e-4 * abs(exact), (p, t, name)
                checked += 1
    assert checked > 400


@settings(max_examples=100, deadline=None)
@given(model_params(), st.floats(0.0, 20.0), st.floats(1.0, 3.0))
def test_r_non_decreasing_in_alpha(p, t, factor):
    a = kernel_closed_form(p, t).r
    b = kernel_closed_form(p.with_(alpha=min(0.2, p.alpha * factor)), t).r
    assert b >= a


@settings(max_examples=100, deadline=None)
@given(model_params(), st.floats(0.0, 50.0))
def test_r_non_negative(p, t):
    assert kernel_closed_form(p, t).r >= 0.0


@settings(max_examples=100, deadline=None)
@given(model_params(mu_min=1.0))
def test_long_time_limits(p):
    # the tails decay like (omega_c t)^{-mu} and ^{-chi}, so mu, chi >= 1 is needed at t = 1e4
    t = 1e4 / p.omega_c
    k = kernel_closed_form(p, t)
    r_inf = 4 * p.omega_c**p.mu * p.alpha * gamma(p.mu)
    assert k.r == pytest.approx(r_inf, rel=1e-3, abs=1e-300)
    if p.chi >= 1.0:
        assert abs(k.phi) <= 1e-3 * math.sqrt(p.alpha) * gamma(p.chi) * p.omega_c**p.chi + 1e-300


def test_small_time_has_no_cancellation():
    p = ModelParams(mu=5.0)
    t = 1e-6
    # r ~ 2 alpha Gamma(mu+2) t^2 for small t
    expect = 2 * p.alpha * gamma(p.mu + 2) * t**2
    assert kernel_closed_form(p, t).r == pytest.approx(expect, rel=1e-9)


def test_numba_and_numpy_agree():
    p = ModelParams(mu=3.7, v=0.3, omega_c=1.3)
    t = np.linspace(0, 40, 2001)
    args = (t, p.mu, p.chi, p.omega_c, prefactors(p))
    np.testing.assert_allclose(_closed_form_loop(*args), _closed_form_numpy(*args), rtol=1e-13, atol=1e-14)


def test_arrays_shape():
    out = kernel_arrays(ModelParams(), np.linspace(0, 1, 7))
    assert out.shape == (6, 7)


def test_negative_time_rejected():
    with pytest.raises(ValueError):
        kernel_closed_form(ModelParams(), -1.0)
