import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import special

from nonlocal_lab import gentrig
from nonlocal_lab.errors import DomainError
from nonlocal_lab.gentrig import PQParams

# 30-digit values from mpmath quadrature of the defining integral
PI_2_4 = 2.62205755429211979270327677344  # the lemniscate constant
PI_2_3 = 2.804364210650908506050077181

GRID_P = (1.5, 2.0, 3.0)
GRID_Q = (1.2, 2.0, 3.0, 4.0)


def beta_oracle(p, q, s):
    """F_{p,q}(s) as an incomplete beta function (w = t**q)."""
    a, b = 1.0 / q, 1.0 - 1.0 / p
    return special.betainc(a, b, np.asarray(s) ** q) * special.beta(a, b) / q


params_st = st.builds(PQParams, st.floats(1.2, 4.0), st.floats(1.05, 12.0))


# --- pi_{p,q} -------------------------------------------------------------

def test_pi_gamma_reduces_to_pi():
    assert gentrig.pi_pq_gamma(PQParams(2, 2)) == pytest.approx(math.pi, abs=1e-15)


def test_pi_gamma_q1_is_four():
    assert gentrig.pi_pq_gamma(PQParams(2, 1)) == pytest.approx(4.0, abs=1e-14)


def test_pi_gamma_lemniscate():
    assert gentrig.pi_pq_gamma(PQParams(2, 4)) == pytest.approx(PI_2_4, abs=1e-14)
    assert gentrig.pi_pq_gamma(PQParams(2, 3)) == pytest.approx(PI_2_3, abs=1e-14)


def test_pi_p_equals_p_closed_form():
    for p in (1.5, 3.0, 5.0):
        expect = 2 * math.pi / (p * math.sin(math.pi / p))
        assert gentrig.pi_pq_gamma(PQParams(p, p)) == pytest.approx(expect, rel=1e-14)


@pytest.mark.parametrize("p, q, exact", [(2, 2, math.pi), (2, 1, 4.0), (2, 4, PI_2_4)])
def test_pi_quadrature_examples(p, q, exact):
    assert abs(gentrig.pi_pq_quadrature(PQParams(p, q), 1e-10) - exact) <= 1e-10


@pytest.mark.parametrize("p", GRID_P)
@pytest.mark.parametrize("q", GRID_Q)
def test_pi_gamma_and_quadrature_agree(p, q):
    params = PQParams(p, q)
    assert abs(gentrig.pi_pq_gamma(params) - gentrig.pi_pq_quadrature(params)) <= 1e-8


@given(params_st)
def test_pi_routes_agree_randomly(params):
    assert gentrig.pi_pq_quadrature(params) == pytest.approx(
        gentrig.pi_pq_gamma(params), abs=1e-8)


@pytest.mark.parametrize("p, q", [(1.0, 2.0), (0.5, 2.0), (2.0, 0.0), (2.0, -1.0),
                                  (math.nan, 2.0), (2.0, math.inf)])
def test_invalid_params(p, q):
    with pytest.raises(DomainError):
        PQParams(p, q)


def test_epsilon_must_exceed_minus_one():
    with pytest.raises(DomainError):
        PQParams.from_epsilon(-1.0)
    assert PQParams.from_epsilon(0.5) == PQParams(2.0, 2.5)


# --- F_{p,q} --------------------------------------------------------------

def test_F_arcsine_values():
    params = PQParams(2, 2)
    assert gentrig.F_pq(params, 1.0) == pytest.approx(math.pi / 2, abs=1e-12)
    assert gentrig.F_pq(params, 0.5) == pytest.approx(math.pi / 6, abs=1e-12)
    assert gentrig.F_pq(params, 0.0) == 0.0


def test_F_q1_closed_form():
    s = np.linspace(0.0, 1.0, 101)
    np.testing.assert_allclose(gentrig.F_pq(PQParams(2, 1), s),
                               2 * (1 - np.sqrt(1 - s)), atol=1e-12)


@pytest.mark.parametrize("p, q", [(2, 1.1), (2, 3), (1.5, 1.2), (3, 4), (2, 12), (2, 52)])
def test_F_matches_incomplete_beta(p, q):
    s = np.linspace(0.0, 1.0, 201)
    np.testing.assert_allclose(gentrig.F_pq(PQParams(p, q), s), beta_oracle(p, q, s),
                               atol=1e-10, rtol=0)


def test_F_strictly_increasing():
    s = np.linspace(0.0, 1.0, 400)
    for q in (1.1, 2.0, 12.0):
        assert np.all(np.diff(gentrig.F_pq(PQParams(2, q), s)) > 0)


@pytest.mark.parametrize("s", [-0.1, 1.0000001, math.nan])
def test_F_domain(s):
    with pytest.raises(DomainError):
        gentrig.F_pq(PQParams(2, 2), s)


def test_F_shape_preserved():
    s = np.full((3, 4), 0.3)
    assert gentrig.F_pq(PQParams(2, 3), s).shape == (3, 4)
    assert isinstance(gentrig.F_pq(PQParams(2, 3), 0.3), float)


# --- sin / cos --------------------------------------------------------------

def test_sin_reduces_to_sine():
    th = np.linspace(-2 * math.pi, 2 * math.pi, 1000)
    s, c = gentrig.sin_cos_pq(PQParams(2, 2), th)
    assert np.max(np.abs(s - np.sin(th))) <= 1e-8
    assert np.max(np.abs(c - np.cos(th))) <= 1e-8


def test_sin_q1_closed_form():
    th = np.linspace(0.0, 2.0, 201)
    params = PQParams(2, 1)
    np.testing.assert_allclose(gentrig.sin_pq(params, th), th - th ** 2 / 4, atol=1e-12)
    np.testing.assert_allclose(gentrig.cos_pq(params, th), 1 - th / 2, atol=1e-10)


@given(params_st)
def test_sin_is_one_at_quarter_period(params):
    assert gentrig.sin_pq(params, gentrig.quarter_period(params)) == pytest.approx(1.0, abs=1e-12)


def test_cos_at_zero():
    assert gentrig.cos_pq(PQParams(2, 2), 0.0) == 1.0
    assert gentrig.cos_pq(PQParams(2, 5), 0.0) == 1.0


@given(params_st, st.floats(-50, 50))
def test_identity(params, theta):
    s, c = gentrig.sin_cos_pq(params, theta)
    assert abs(abs(c) ** params.p + abs(s) ** params.q - 1) <= 1e-8
    assert -1 <= s <= 1 and -1 <= c <= 1


@given(params_st, st.floats(-30, 30))
def test_periodic(params, theta):
    per = 2 * gentrig.pi_pq_gamma(params)
    assert gentrig.sin_pq(params, theta + per) == pytest.approx(
        gentrig.sin_pq(params, theta), abs=1e-9)


@given(params_st, st.floats(-30, 30))
def test_odd_exactly(params, theta):
    assert gentrig.sin_pq(params, -theta) == -gentrig.sin_pq(params, theta)
    assert gentrig.cos_pq(params, -theta) == gentrig.cos_pq(params, theta)


@given(params_st, st.floats(0, 10))
def test_reflection_about_quarter_period(params, theta):
    pi_pq = gentrig.pi_pq_gamma(params)
    assert gentrig.sin_pq(params, pi_pq - theta) == pytest.approx(
        gentrig.sin_pq(params, theta), abs=1e-9)


@pytest.mark.parametrize("q", [1.1, 2.0, 3.0, 12.0])
def test_monotone_on_quarter_period(q):
    params = PQParams(2, q)
    th = np.linspace(0.0, gentrig.quarter_period(params), 500)
    assert np.all(np.diff(gentrig.sin_pq(params, th)) > 0)


@pytest.mark.parametrize("p, q", [(2, 1.1), (2, 1.5), (2, 3), (1.5, 2.5), (3, 4), (2, 12)])
def test_cos_is_derivative_of_sin(p, q):
    params = PQParams(p, q)
    hp = gentrig.quarter_period(params)
    th = np.linspace(-3 * hp, 3 * hp, 241)
    # stay clear of quarter-period multiples, where q < 2 kinks the derivative
    th = th[np.abs((th / hp) - np.round(th / hp)) > 0.02]
    h = 1e-5
    fd = (gentrig.sin_pq(params, th + h) - gentrig.sin_pq(params, th - h)) / (2 * h)
    assert np.max(np.abs(fd - gentrig.cos_pq(params, th))) <= 1e-6


def test_sin_is_inverse_of_F():
    params = PQParams(2, 3.7)
    s = np.linspace(0.0, 1.0, 77)
    np.testing.assert_allclose(gentrig.sin_pq(params, beta_oracle(2, 3.7, s)), s, atol=1e-11)


def test_evaluate_record():
    ev = gentrig.evaluate(PQParams(2, 2), math.pi / 6)
    assert ev.sin_value == pytest.approx(0.5, abs=1e-12)
    assert ev.quarter_period == pytest.approx(math.pi / 2)


def test_sin_rejects_nonfinite():
    with pytest.raises(DomainError):
        gentrig.sin_pq(PQParams(2, 2), math.inf)


def test_concurrent_evaluation_is_consistent():
    from concurrent.futures import ThreadPoolExecutor
    params = PQParams(2, 2.7)
    th = np.linspace(-5, 5, 200)
    ref = gentrig.sin_pq(params, th)
    with ThreadPoolExecutor(8) as pool:
        outs = list(pool.map(lambda _: gentrig.sin_pq(params, th), range(16)))
    for out in outs:
        np.testing.assert_array_equal(out, ref)
