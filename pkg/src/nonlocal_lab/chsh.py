"""Bell-CHSH functional under the modified Born rule, and its maximization.

The four correlation angles are differences of four detector settings, so
``theta_a'b' = theta_ab' + theta_a'b - theta_ab`` always holds.  Treating the
four angles as free parameters would let every term reach +-1 and give 4 at
any eps, including the linear case.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import optimize

from . import born, gentrig
from .born import Convention

THREADS_ENV = "NONLOCAL_LAB_THREADS"


@dataclass(frozen=True)
class MeasurementSettings:
    alpha: float
    alpha_prime: float
    beta: float
    beta_prime: float

    def angles(self) -> np.ndarray:
        """(theta_ab, theta_ab', theta_a'b, theta_a'b')."""
        return np.array([
            self.beta - self.alpha,
            self.beta_prime - self.alpha,
            self.beta - self.alpha_prime,
            self.beta_prime - self.alpha_prime,
        ])

    def wrapped(self, period: float) -> "MeasurementSettings":
        return MeasurementSettings(*(float(np.mod(v, period)) for v in (
            self.alpha, self.alpha_prime, self.beta, self.beta_prime)))

    def shifted(self, offset: float) -> "MeasurementSettings":
        return MeasurementSettings(self.alpha + offset, self.alpha_prime + offset,
                                   self.beta + offset, self.beta_prime + offset)


@dataclass(frozen=True)
class SearchConfig:
    grid_n: int = 48
    refine_tol: float = 1e-9
    multistart: int = 8
    max_iter: int = 4000
    quad_tol: float = gentrig.QUAD_TOL
    invert_tol: float = gentrig.INVERT_TOL

    def __post_init__(self):
        if self.grid_n < 8:
            raise ValueError("grid_n must be at least 8")
        if self.multistart < 1:
            raise ValueError("multistart must be at least 1")
        if not (self.refine_tol > 0 and self.quad_tol > 0 and self.invert_tol > 0):
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class BellResult:
    value: float
    settings: MeasurementSettings
    epsilon: float
    convention: Convention
    evaluations: int
    converged: bool
    grid_value: float = field(default=float("nan"))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["convention"] = self.convention.value
        return d


@dataclass(frozen=True)
class SweepRecord:
    epsilon: float
    max_bell: float
    conjecture: float
    relative_deviation: float
    converged: bool = True


def pi_eps(eps: float) -> float:
    """pi_{2,2+eps}; the generalized circle has period twice this."""
    return gentrig.pi_pq_gamma(gentrig.PQParams.from_epsilon(born.check_epsilon(eps)))


def conjecture_bound(eps: float) -> float:
    """4 / 2**((1+eps)/(2+eps)); 2 sqrt 2 at eps = 0, 4 at eps = -1."""
    eps = float(eps)
    if not (math.isfinite(eps) and eps >= -1):
        raise ValueError(f"epsilon must be >= -1, got {eps!r}")
    return 4.0 / 2.0 ** ((1.0 + eps) / (2.0 + eps))


def canonical_settings(eps: float) -> MeasurementSettings:
    """Optimal linear-case settings, stretched onto the generalized circle.

    At eps = 0 these give 2 sqrt 2 with E(theta) = -cos 2 theta.
    """
    scale = pi_eps(eps) / math.pi
    return MeasurementSettings(0.0, 0.75 * math.pi * scale,
                               0.375 * math.pi * scale, 1.625 * math.pi * scale)


def bell_value(eps: float, settings: MeasurementSettings,
               conv=born.DEFAULT_CONVENTION,
               quad_tol: float = gentrig.QUAD_TOL,
               invert_tol: float = gentrig.INVERT_TOL) -> float:
    theta = np.mod(settings.angles(), 2.0 * pi_eps(eps))
    e = born.correlation(eps, theta, conv, quad_tol, invert_tol)
    return float(e[0] + e[1] + e[2] - e[3])


def grid_values(correlation_table: np.ndarray) -> np.ndarray:
    """B on the uniform grid alpha = 0, (alpha', beta, beta') = k * step.

    ``correlation_table[k]`` holds E(k * step) for one full period; every
    angle difference is again a multiple of step, so the table suffices.
    Axes are (alpha', beta, beta').
    """
    e = np.asarray(correlation_table)
    n = e.size
    i, j, k = np.ogrid[:n, :n, :n]
    return e[j] + e[k] + e[(j - i) % n] - e[(k - i) % n]


def _seed_cells(grid: np.ndarray, n: int, count: int) -> list[int]:
    """Best cells in descending order, skipping neighbours of chosen ones.

    Adjacent cells (periodic, Chebyshev distance 1) almost always lie in the
    same basin, and on plateaus they tie, so they add no information.
    """
    order = np.argsort(-grid, kind="stable")
    chosen: list[int] = []
    picked = []
    for flat in order:
        cell = np.array(np.unravel_index(flat, (n, n, n)))
        near = False
        for other in picked:
            d = np.abs(cell - other) % n
            if np.all(np.minimum(d, n - d) <= 1):
                near = True
                break
        if not near:
            chosen.append(int(flat))
            picked.append(cell)
            if len(chosen) == count:
                break
    return chosen


def maximize_bell(eps: float, conv=born.DEFAULT_CONVENTION,
                  cfg: SearchConfig | None = None) -> BellResult:
    """Grid scan followed by multi-start Nelder-Mead refinement.

    alpha is gauge-fixed to 0.  The ``cfg.multistart`` best grid cells seed
    independent simplex runs; the best refined point wins.
    """
    cfg = cfg or SearchConfig()
    conv = Convention.parse(conv)
    eps = born.check_epsilon(eps)
    full = 2.0 * pi_eps(eps)
    n = cfg.grid_n
    step = full / n
    table = born.correlation(eps, np.arange(n) * step, conv,
                             cfg.quad_tol, cfg.invert_tol)
    grid = grid_values(table).ravel()
    order = _seed_cells(grid, n, cfg.multistart)
    grid_best = float(grid[order[0]])

    def objective(x):
        s = MeasurementSettings(0.0, x[0], x[1], x[2])
        return -bell_value(eps, s, conv, cfg.quad_tol, cfg.invert_tol)

    # every run starts at its seed, so the first one already beats grid_best
    best_value, best_x, best_ok = -math.inf, None, False
    evaluations = n ** 3
    for flat in order:
        x0 = np.array(np.unravel_index(flat, (n, n, n)), dtype=float) * step
        simplex = np.vstack([x0, x0 + np.eye(3) * (0.5 * step)])
        res = optimize.minimize(
            objective, x0, method="Nelder-Mead",
            options={"initial_simplex": simplex, "xatol": 1e-10,
                     "fatol": cfg.refine_tol, "maxiter": cfg.max_iter,
                     "maxfev": 4 * cfg.max_iter})
        evaluations += int(res.nfev)
        if -res.fun > best_value:
            best_value, best_x, best_ok = float(-res.fun), res.x, bool(res.success)
    settings = MeasurementSettings(0.0, *map(float, best_x)).wrapped(full)
    return BellResult(value=best_value, settings=settings, epsilon=eps,
                      convention=conv, evaluations=evaluations,
                      converged=best_ok, grid_value=grid_best)


def _sweep_point(args) -> SweepRecord:
    eps, conv, cfg = args
    res = maximize_bell(eps, conv, cfg)
    bound = conjecture_bound(eps)
    return SweepRecord(epsilon=eps, max_bell=res.value, conjecture=bound,
                       relative_deviation=abs(res.value - bound) / res.value,
                       converged=res.converged)


def worker_count(n_jobs: int) -> int:
    cap = os.environ.get(THREADS_ENV)
    limit = os.cpu_count() or 1
    if cap:
        try:
            limit = max(1, int(cap))
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be an integer, got {cap!r}")
    return max(1, min(limit, n_jobs))


def sweep(eps_grid, conv=born.DEFAULT_CONVENTION,
          cfg: SearchConfig | None = None,
          workers: int | None = None) -> list[SweepRecord]:
    """One independent maximization per eps, returned in ascending eps order."""
    cfg = cfg or SearchConfig()
    conv = Convention.parse(conv)
    eps_sorted = sorted(born.check_epsilon(e) for e in eps_grid)
    jobs = [(e, conv, cfg) for e in eps_sorted]
    workers = worker_count(len(jobs)) if workers is None else workers
    if workers <= 1 or len(jobs) <= 1:
        return [_sweep_point(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sweep_point, jobs))
