"""Coincidence probabilities and the correlation E_eps(theta).

The coincidence amplitude is phi = sin_{2,2+eps}(theta) and its conjugate is
phi_bar = cos_{2,2+eps}(theta).  Generalized trigonometry fixes
``phi_bar**2 + |phi|**(2+eps) = 1``, while the modified Born rule assigns
``p(a=b) = phi**2`` and ``p(a!=b) = |phi_bar|**(2+eps)``; the two only agree at
eps = 0.  :class:`Convention` picks how the pair is made to sum to one.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import gentrig
from .errors import DomainError

TAYLOR_VALID_EPS = 0.1


class Convention(str, enum.Enum):
    PAPER_LITERAL = "paper-literal"
    IDENTITY_CONSISTENT = "identity-consistent"
    RENORMALIZED = "renormalized"

    @classmethod
    def parse(cls, value: "str | Convention") -> "Convention":
        if isinstance(value, Convention):
            return value
        # accepts "paper-literal", "paper_literal", "PaperLiteral", ...
        key = str(value).strip().lower().replace("_", "").replace("-", "")
        for conv in cls:
            if conv.value.replace("-", "") == key:
                return conv
        raise DomainError(
            f"unknown convention {value!r}; choose one of "
            + ", ".join(c.value for c in cls))

    def __str__(self) -> str:
        return self.value


DEFAULT_CONVENTION = Convention.PAPER_LITERAL


@dataclass(frozen=True)
class ProbabilityPair:
    """``p_same`` = p(a=b), ``p_diff`` = p(a!=b).

    ``defect`` is the normalization gap ``|phi**2 + |phi_bar|**(2+eps) - 1|``
    of the raw Born assignment.  It is reported in every convention.
    """

    p_same: np.ndarray | float
    p_diff: np.ndarray | float
    defect: np.ndarray | float


def check_epsilon(eps: float) -> float:
    eps = float(eps)
    if not (math.isfinite(eps) and eps > -1):
        raise DomainError(f"epsilon must be > -1, got {eps!r}")
    return eps


def amplitudes(eps: float, theta, quad_tol=gentrig.QUAD_TOL,
               invert_tol=gentrig.INVERT_TOL):
    """``(phi, phi_bar)`` = (sin, cos)_{2,2+eps} at theta."""
    params = gentrig.PQParams.from_epsilon(check_epsilon(eps))
    return gentrig.sin_cos_pq(params, theta, quad_tol, invert_tol)


def probabilities(eps: float, theta, conv=DEFAULT_CONVENTION,
                  quad_tol=gentrig.QUAD_TOL,
                  invert_tol=gentrig.INVERT_TOL) -> ProbabilityPair:
    conv = Convention.parse(conv)
    s, c = amplitudes(eps, theta, quad_tol, invert_tol)
    q = 2.0 + eps
    s2 = np.square(s)
    cq = np.abs(c) ** q
    defect = np.abs(s2 + cq - 1.0)
    if conv is Convention.PAPER_LITERAL:
        same, diff = s2, 1.0 - s2
    elif conv is Convention.IDENTITY_CONSISTENT:
        same, diff = np.abs(s) ** q, np.square(c)
    else:
        total = s2 + cq
        same, diff = s2 / total, cq / total
    if np.ndim(theta) == 0:
        return ProbabilityPair(float(same), float(diff), float(defect))
    return ProbabilityPair(same, diff, defect)


def correlation(eps: float, theta, conv=DEFAULT_CONVENTION,
                quad_tol=gentrig.QUAD_TOL, invert_tol=gentrig.INVERT_TOL):
    """E_eps(theta) = p(a=b) - p(a!=b); equals -cos(2 theta) at eps = 0."""
    pair = probabilities(eps, theta, conv, quad_tol, invert_tol)
    return pair.p_same - pair.p_diff


def unnormalized_correlation(eps: float, theta, quad_tol=gentrig.QUAD_TOL,
                             invert_tol=gentrig.INVERT_TOL):
    """``phi**2 - |phi_bar|**(2+eps)`` with no normalization applied.

    This is the quantity the first-order expansion in eps approximates.
    """
    s, c = amplitudes(eps, theta, quad_tol, invert_tol)
    return np.square(s) - np.abs(c) ** (2.0 + eps)


def _xlog_x2(x):
    # x**2 log|x| with the x -> 0 limit 0
    ax = np.abs(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.square(ax) * np.log(ax)
    return np.where(ax > 0, out, 0.0)


def correlation_taylor(eps: float, theta, quad_tol=gentrig.QUAD_TOL,
                       invert_tol=gentrig.INVERT_TOL):
    """First-order small-eps form ``phi**2 - phi_bar**2 - eps phi_bar**2 log|phi_bar|``.

    Meant for ``|eps| <= 0.1``; larger values are evaluated anyway and the
    caller decides whether the result means anything.
    """
    s, c = amplitudes(eps, theta, quad_tol, invert_tol)
    out = np.square(s) - np.square(c) - eps * _xlog_x2(c)
    return float(out) if np.ndim(theta) == 0 else out
