"""Residual check of the generalized-sine eigenfunctions.

For phi(x) = A sin_{2,q}(k x) with q = 2 + eps and k = n pi_{2,q}, the
generalized identity gives phi'' = -(q/2) k**2 A**(-eps) |phi|**eps phi, so
phi solves

    phi'' + c |phi|**eps phi = 0,    phi(0) = phi(1) = 0,

exactly when c = k**2 (q/2) A**(-eps).  The residual is measured with
central second differences on a uniform grid; with the right coupling it
shrinks as the grid is refined and with any other coupling it does not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import born, gentrig
from .errors import DomainError

# sin_pq has to be far more accurate than h**2 for the second differences
QUAD_TOL = 1e-14
INVERT_TOL = 1e-15
NODE_CUTOFF = 1e-6


@dataclass(frozen=True)
class EigenSolution:
    n: int
    epsilon: float
    amplitude: float
    x: np.ndarray
    values: np.ndarray

    @property
    def grid_size(self) -> int:
        return self.x.size

    @property
    def wavenumber(self) -> float:
        return self.n * gentrig.pi_pq_gamma(gentrig.PQParams.from_epsilon(self.epsilon))


@dataclass(frozen=True)
class ResidualReport:
    l_inf: float
    l2: float
    coupling_used: float
    grid_size: int
    excluded: int = 0


def _check(n: int, eps: float, amplitude: float):
    if int(n) != n or n < 1:
        raise DomainError(f"mode index n must be a positive integer, got {n!r}")
    if not (math.isfinite(amplitude) and amplitude > 0):
        raise DomainError(f"amplitude must be positive, got {amplitude!r}")
    return int(n), born.check_epsilon(eps), float(amplitude)


def build_eigenfunction(n: int, eps: float, amplitude: float = 1.0,
                        M: int = 256, quad_tol: float = QUAD_TOL,
                        invert_tol: float = INVERT_TOL) -> EigenSolution:
    """Sample ``A sin_{2,2+eps}(n pi_{2,2+eps} x)`` at M points on [0, 1]."""
    n, eps, amplitude = _check(n, eps, amplitude)
    if M < 64:
        raise DomainError(f"grid size M must be at least 64, got {M!r}")
    params = gentrig.PQParams.from_epsilon(eps)
    k = n * gentrig.pi_pq_gamma(params)
    x = np.linspace(0.0, 1.0, M)
    values = amplitude * gentrig.sin_pq(params, k * x, quad_tol, invert_tol)
    return EigenSolution(n, eps, amplitude, x, values)


def coupling_for(n: int, eps: float, amplitude: float = 1.0) -> float:
    """c = (n pi_{2,q})**2 (q/2) A**(-eps), q = 2 + eps."""
    n, eps, amplitude = _check(n, eps, amplitude)
    k = n * gentrig.pi_pq_gamma(gentrig.PQParams.from_epsilon(eps))
    return k * k * (1.0 + 0.5 * eps) * amplitude ** (-eps)


def printed_coupling(n: int, eps: float, amplitude: float = 1.0) -> float:
    """The alternative relation (n pi_{2,q})**4 / |A|**2, for comparison only.

    It differs from :func:`coupling_for` even in the linear case, where it
    gives pi**4 instead of pi**2.
    """
    n, eps, amplitude = _check(n, eps, amplitude)
    k = n * gentrig.pi_pq_gamma(gentrig.PQParams.from_epsilon(eps))
    return k ** 4 / amplitude ** 2


def residual(sol: EigenSolution, c: float) -> ResidualReport:
    """Norms of phi'' + c |phi|**eps phi over the interior grid points.

    For eps < 0 the non-linear term blows up at the nodes, so points with
    ``|phi| < NODE_CUTOFF`` are dropped and counted in ``excluded``.
    """
    m = sol.grid_size
    if m < 64:
        raise DomainError(f"grid size must be at least 64, got {m}")
    h = 1.0 / (m - 1)
    phi = sol.values
    inner = phi[1:-1]
    second = (phi[2:] - 2.0 * inner + phi[:-2]) / (h * h)
    with np.errstate(divide="ignore", invalid="ignore"):
        nonlin = c * np.abs(inner) ** sol.epsilon * inner
    r = second + nonlin
    keep = np.ones(r.size, dtype=bool)
    if sol.epsilon < 0:
        keep = np.abs(inner) >= NODE_CUTOFF
    r = r[keep]
    l_inf = float(np.max(np.abs(r))) if r.size else 0.0
    l2 = float(math.sqrt(h * float(np.dot(r, r))))
    return ResidualReport(l_inf=l_inf, l2=l2, coupling_used=float(c),
                          grid_size=m, excluded=int(np.count_nonzero(~keep)))


def convergence_orders(norms) -> np.ndarray:
    """log2 ratios of successive norms from a grid-doubling study."""
    v = np.asarray(norms, dtype=float)
    return np.log2(v[:-1] / v[1:])


def doubling_study(n: int, eps: float, amplitude: float = 1.0,
                   sizes=(256, 512, 1024, 2048), coupling_scale: float = 1.0):
    """Residual reports on successively doubled grids."""
    c = coupling_scale * coupling_for(n, eps, amplitude)
    return [residual(build_eigenfunction(n, eps, amplitude, m), c) for m in sizes]
