"""Generalized trigonometric functions sin_{p,q} and cos_{p,q}.

``sin_{p,q}`` is the inverse of

    F_{p,q}(s) = integral_0^s (1 - t**q)**(-1/p) dt,    0 <= s <= 1,

on the quarter period ``[0, pi_{p,q}/2]``, continued to the real line the
same way the ordinary sine is: reflected about the quarter period, negated
on the second half period and tiled with period ``2*pi_{p,q}``.  With this
convention ``|cos|**p + |sin|**q == 1`` and ``cos`` is the derivative of
``sin``.  At ``p = q = 2`` everything reduces to the familiar functions.

All functions accept scalars or arrays and return the same kind.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from . import quadrature
from .errors import ConvergenceError, DomainError

QUAD_TOL = 1e-10
INVERT_TOL = 1e-12
MAX_NEWTON = 100
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class PQParams:
    """Exponent pair of the generalized functions; needs ``p > 1``, ``q > 0``."""

    p: float
    q: float

    def __post_init__(self):
        if not (math.isfinite(self.p) and self.p > 1):
            raise DomainError(f"p must be a finite number > 1, got {self.p!r}")
        if not (math.isfinite(self.q) and self.q > 0):
            raise DomainError(f"q must be a finite number > 0, got {self.q!r}")

    @classmethod
    def from_epsilon(cls, eps: float) -> "PQParams":
        """The pair ``(2, 2 + eps)`` used for the non-linear Born rule."""
        if not (math.isfinite(eps) and eps > -1):
            raise DomainError(f"epsilon must be > -1, got {eps!r}")
        return cls(2.0, 2.0 + eps)

    @property
    def split(self) -> float:
        # t where t**q == 1/2; left of it the integrand is bounded by 2**(1/p)
        return 0.5 ** (1.0 / self.q)

    @property
    def stretch(self) -> float:
        # exponent r in 1 - t = u**r that cancels the (1-t)**(-1/p) blow-up
        return self.p / (self.p - 1.0)


@dataclass(frozen=True)
class GenTrigEval:
    theta: float
    sin_value: float
    cos_value: float
    quarter_period: float


def _as_output(x, like_scalar: bool):
    return float(x) if like_scalar else x


@lru_cache(maxsize=1024)
def _pi_gamma_cached(p: float, q: float) -> float:
    a, b = 1 - 1 / p, 1 / q
    try:
        return 2.0 * math.gamma(a) * math.gamma(b) / (q * math.gamma(a + b))
    except OverflowError:
        lg = math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)
        return 2.0 * math.exp(lg) / q


def pi_pq_gamma(params: PQParams) -> float:
    """Closed form 2 Γ(1-1/p) Γ(1/q) / (q Γ(1-1/p+1/q))."""
    return _pi_gamma_cached(params.p, params.q)


def quarter_period(params: PQParams) -> float:
    return 0.5 * pi_pq_gamma(params)


HEAD_POWER = 3


def _head_integrand(params: PQParams):
    """Integrand in v after substituting t = v**3.

    Non-integer q makes t**q non-smooth at t = 0; in v that term becomes
    v**(3q), smooth enough for Gauss-Kronrod panels not to pile up at 0.
    """
    p, q, m = params.p, params.q, HEAD_POWER

    def f(v):
        return m * v ** (m - 1) * (1.0 - v ** (m * q)) ** (-1.0 / p)

    return f


def _tail_integrand(params: PQParams):
    """Integrand in u after substituting 1 - t = u**r.

    (1 - t**q) = (1 - t) g(t) with g(1) = q; the Jacobian r u**(r-1) cancels
    (1-t)**(-1/p) exactly, leaving the bounded function r g(t)**(-1/p).
    """
    p, q, r = params.p, params.q, params.stretch

    def f(u):
        w = u ** r
        with np.errstate(invalid="ignore", divide="ignore"):
            g = -np.expm1(q * np.log1p(-w)) / w
        g = np.where(w > 0, g, q)
        return r * g ** (-1.0 / p)

    return f


def _head(params: PQParams, s, tol):
    v = np.asarray(s, dtype=float) ** (1.0 / HEAD_POWER)
    return quadrature.integrate_batch(_head_integrand(params), 0.0, v, tol)[0]


def _tail(params: PQParams, s, tol):
    """integral_{split}^{s} of the original integrand, for s >= split."""
    r = params.stretch
    u_hi = (1.0 - params.split) ** (1.0 / r)
    u_lo = np.maximum(1.0 - s, 0.0) ** (1.0 / r)
    return quadrature.integrate_batch(_tail_integrand(params), u_lo, u_hi, tol)[0]


def _F_unchecked(params: PQParams, s: np.ndarray, tol: float) -> np.ndarray:
    split = params.split
    out = _head(params, np.minimum(s, split), 0.5 * tol)
    upper = s > split
    if np.any(upper):
        out[upper] += _tail(params, s[upper], 0.5 * tol)
    return out


def F_pq(params: PQParams, s, tol: float = QUAD_TOL):
    """Incomplete integral F_{p,q}(s) for s in [0, 1]."""
    scalar = np.ndim(s) == 0
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    if np.any(~((s_arr >= 0) & (s_arr <= 1))):
        raise DomainError("F_pq is defined for 0 <= s <= 1")
    out = _F_unchecked(params, s_arr, tol)
    return _as_output(out[0], True) if scalar else out.reshape(np.shape(s))


def pi_pq_quadrature(params: PQParams, tol: float = QUAD_TOL) -> float:
    """2 F_{p,q}(1) by adaptive quadrature, independent of the Gamma form."""
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    return 2.0 * float(_F_unchecked(params, np.array([1.0]), 0.5 * tol)[0])


_GUESS_NODES = 48


@lru_cache(maxsize=256)
def _guess_spline(p: float, q: float) -> CubicHermiteSpline:
    """Cubic Hermite interpolant of sin_{p,q} on the quarter period.

    Only a starting point for Newton.  Nodes are clustered toward s = 1,
    where the inverse flattens out.
    """
    params = PQParams(p, q)
    s = np.sin(0.5 * np.pi * np.linspace(0.0, 1.0, _GUESS_NODES))
    s[-1] = 1.0
    theta = _F_unchecked(params, s, 1e-13)
    theta[-1] = quarter_period(params)
    slope = np.maximum(1.0 - s ** q, 0.0) ** (1.0 / p)
    return CubicHermiteSpline(theta, s, slope)


def _invert(params: PQParams, theta: np.ndarray, quad_tol: float,
            invert_tol: float) -> np.ndarray:
    """Solve F(s) = theta for theta in [0, quarter period].

    Newton steps (F' is known in closed form) kept inside a shrinking
    bracket [lo, hi]; any step that leaves the bracket becomes a bisection.
    """
    p, q = params.p, params.q
    hp = quarter_period(params)
    s = np.zeros_like(theta)
    s[theta >= hp] = 1.0
    active = np.flatnonzero((theta > 0) & (theta < hp))
    if active.size == 0:
        return s
    t = theta[active]
    lo = np.zeros_like(t)
    hi = np.ones_like(t)
    x = np.clip(_guess_spline(p, q)(t), 0.0, 1.0)
    for _ in range(MAX_NEWTON):
        resid = _F_unchecked(params, x, quad_tol) - t
        below = resid < 0
        lo = np.where(below, x, lo)
        hi = np.where(below, hi, x)
        slope_inv = np.maximum(1.0 - x ** q, 0.0) ** (1.0 / p)
        step = resid * slope_inv
        x_new = x - step
        outside = (x_new < lo) | (x_new > hi)
        x_new = np.where(outside, 0.5 * (lo + hi), x_new)
        x_new = np.where(resid == 0, x, x_new)
        moved = np.abs(x_new - x)
        x = x_new
        # below a couple of ulps the iteration can only chatter
        floor = np.maximum(invert_tol, 4.0 * _EPS * x)
        done = (moved <= floor) | (hi - lo <= floor) | (resid == 0)
        if np.all(done):
            s[active] = x
            return s
        # freeze converged entries so later passes only touch the rest
        s[active[done]] = x[done]
        keep = ~done
        active, t, lo, hi, x = active[keep], t[keep], lo[keep], hi[keep], x[keep]
    raise ConvergenceError(
        f"sin_pq inversion did not converge in {MAX_NEWTON} steps "
        f"for p={p}, q={q}")


def _reduce(params: PQParams, theta: np.ndarray):
    """Fold theta onto [0, quarter period].

    Returns (folded angle, sign of sin, sign of cos).  Odd symmetry is exact
    because the fold works on |theta|.
    """
    pi_pq = pi_pq_gamma(params)
    hp = 0.5 * pi_pq
    sin_sign = np.where(theta < 0, -1.0, 1.0)
    a = np.mod(np.abs(theta), 2.0 * pi_pq)
    second_half = a >= pi_pq
    a = np.where(second_half, a - pi_pq, a)
    descending = a > hp
    a = np.where(descending, pi_pq - a, a)
    sin_sign = np.where(second_half, -sin_sign, sin_sign)
    cos_sign = np.where(second_half != descending, -1.0, 1.0)
    return a, sin_sign, cos_sign


def sin_cos_pq(params: PQParams, theta, quad_tol: float = QUAD_TOL,
               invert_tol: float = INVERT_TOL):
    """Return ``(sin_{p,q}(theta), cos_{p,q}(theta))`` together."""
    scalar = np.ndim(theta) == 0
    th = np.atleast_1d(np.asarray(theta, dtype=float))
    if not np.all(np.isfinite(th)):
        raise DomainError("theta must be finite")
    flat = th.ravel()
    a, s_sign, c_sign = _reduce(params, flat)
    mag = _invert(params, a, quad_tol, invert_tol)
    sin_v = s_sign * mag
    cos_v = c_sign * np.maximum(1.0 - mag ** params.q, 0.0) ** (1.0 / params.p)
    if scalar:
        return float(sin_v[0]), float(cos_v[0])
    return sin_v.reshape(th.shape), cos_v.reshape(th.shape)


def sin_pq(params: PQParams, theta, quad_tol: float = QUAD_TOL,
           invert_tol: float = INVERT_TOL):
    return sin_cos_pq(params, theta, quad_tol, invert_tol)[0]


def cos_pq(params: PQParams, theta, quad_tol: float = QUAD_TOL,
           invert_tol: float = INVERT_TOL):
    """Derivative of sin_pq, evaluated as ±(1 - |sin|**q)**(1/p)."""
    return sin_cos_pq(params, theta, quad_tol, invert_tol)[1]


def evaluate(params: PQParams, theta: float, quad_tol: float = QUAD_TOL,
             invert_tol: float = INVERT_TOL) -> GenTrigEval:
    s, c = sin_cos_pq(params, float(theta), quad_tol, invert_tol)
    return GenTrigEval(float(theta), s, c, quarter_period(params))
