"""Cross-Entropy minimization over a box.

Each iteration draws a population from independent per-dimension Gaussians
truncated to the bounds, keeps the lowest-cost elite fraction, and moves
the sampling mean and standard deviation toward the elite statistics with
smoothing ``alpha``.

Sample ``k`` of iteration ``i`` draws from its own generator seeded with
``(seed, i, k, attempt)``, so results do not depend on how evaluations are
scheduled across workers.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CEConfig:
    lower: tuple[float, ...] = (0.0, 0.0)
    upper: tuple[float, ...] = (1.0, 1.0)
    population: int = 75
    elite_fraction: float = 0.1
    alpha: float = 0.8
    max_iter: int = 25
    tol: float = 1e-3  # stop once every std is below tol * (upper - lower)
    seed: int = 0
    max_rejections: int = 100
    max_retries: int = 5

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=float)
        hi = np.asarray(self.upper, dtype=float)
        if lo.shape != hi.shape or lo.ndim != 1 or lo.size == 0:
            raise ConfigError("lower and upper must be equal-length 1-D bounds")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi)) and np.all(lo < hi)):
            raise ConfigError("bounds must be finite with lower < upper")
        if self.population < 2:
            raise ConfigError("population must be at least 2")
        if not 0 < self.elite_fraction <= 0.5:
            raise ConfigError("elite fraction must lie in (0, 0.5]")
        if not 0 < self.alpha <= 1:
            raise ConfigError("alpha must lie in (0, 1]")
        if self.max_iter < 1:
            raise ConfigError("max_iter must be at least 1")
        object.__setattr__(self, "lower", tuple(float(v) for v in lo))
        object.__setattr__(self, "upper", tuple(float(v) for v in hi))

    @property
    def n_elite(self) -> int:
        return max(1, math.ceil(self.elite_fraction * self.population - 1e-9))


@dataclass
class IterationRecord:
    iteration: int
    mean: np.ndarray
    std: np.ndarray
    best_J: float
    elite_threshold: float


@dataclass
class CEResult:
    x_best: np.ndarray
    J_best: float
    history: list[IterationRecord] = field(default_factory=list)
    iterations: int = 0
    reason: str = ""
    samples: np.ndarray | None = None  # every evaluated point, (n, dim)
    values: np.ndarray | None = None

    def trace_columns(self) -> dict[str, np.ndarray]:
        cols = {"iteration": np.array([h.iteration for h in self.history])}
        dim = len(self.x_best)
        for d in range(dim):
            cols[f"mean_{d}"] = np.array([h.mean[d] for h in self.history])
        for d in range(dim):
            cols[f"std_{d}"] = np.array([h.std[d] for h in self.history])
        cols["best_J"] = np.array([h.best_J for h in self.history])
        cols["elite_threshold"] = np.array([h.elite_threshold for h in self.history])
        return cols


def _draw(rng, mean, std, lo, hi, max_rejections):
    x = np.empty_like(mean)
    for d in range(mean.size):
        for _ in range(max_rejections):
            v = rng.normal(mean[d], std[d])
            if lo[d] <= v <= hi[d]:
                break
        else:
            v = min(max(v, lo[d]), hi[d])
        x[d] = v
    return x


def optimize(
    objective: Callable[[np.ndarray], float],
    config: CEConfig = CEConfig(),
    workers: int = 1,
    map_fn: Callable | None = None,
) -> CEResult:
    """Minimize ``objective`` over the box in ``config``.

    ``map_fn(func, iterable)`` may be supplied to schedule evaluations; by
    default a thread pool of ``workers`` threads is used when ``workers > 1``.
    """
    lo = np.array(config.lower)
    hi = np.array(config.upper)
    width = hi - lo
    mean = 0.5 * (lo + hi)
    std = 0.5 * width
    n_elite = config.n_elite

    def evaluate_sample(args):
        iteration, k, mean, std = args
        err = None
        for attempt in range(config.max_retries + 1):
            rng = np.random.default_rng([config.seed, iteration, k, attempt])
            x = _draw(rng, mean, std, lo, hi, config.max_rejections)
            try:
                value = float(objective(x))
            except Exception as exc:  # noqa: BLE001 - any objective failure triggers a resample
                err = exc
                log.warning("objective failed at %s (attempt %d): %s", x, attempt, exc)
                continue
            if math.isnan(value):
                err = FloatingPointError(f"objective returned NaN at {x}")
                continue
            return x, value
        raise RuntimeError(f"objective failed {config.max_retries + 1} times for sample {k}") from err

    pool = None
    if map_fn is None:
        if workers > 1:
            pool = ThreadPoolExecutor(max_workers=workers)
            map_fn = pool.map
        else:
            map_fn = map

    best_x, best_J = mean.copy(), math.inf
    history: list[IterationRecord] = []
    all_x, all_J = [], []
    reason = "max_iter"
    try:
        for it in range(config.max_iter):
            jobs = [(it, k, mean.copy(), std.copy()) for k in range(config.population)]
            results = list(map_fn(evaluate_sample, jobs))
            X = np.array([r[0] for r in results])
            J = np.array([r[1] for r in results])
            all_x.append(X)
            all_J.append(J)
            order = np.argsort(J, kind="stable")
            elite = X[order[:n_elite]]
            if J[order[0]] < best_J:
                best_J = float(J[order[0]])
                best_x = X[order[0]].copy()
            mean = config.alpha * elite.mean(axis=0) + (1.0 - config.alpha) * mean
            std = config.alpha * elite.std(axis=0) + (1.0 - config.alpha) * std
            history.append(IterationRecord(it, mean.copy(), std.copy(), best_J, float(J[order[n_elite - 1]])))
            if np.all(std < config.tol * width):
                reason = "converged"
                break
    finally:
        if pool is not None:
            pool.shutdown()

    return CEResult(
        x_best=best_x,
        J_best=best_J,
        history=history,
        iterations=len(history),
        reason=reason,
        samples=np.concatenate(all_x),
        values=np.concatenate(all_J),
    )


def grid_search(objective, lower: Sequence[float], upper: Sequence[float], n: int = 51):
    """Exhaustive evaluation on an ``n``-point-per-axis grid (2-D); returns ``(axes, values)``."""
    axes = [np.linspace(a, b, n) for a, b in zip(lower, upper)]
    values = np.empty((n, n))
    for i, a in enumerate(axes[0]):
        for j, b in enumerate(axes[1]):
            values[i, j] = objective(np.array([a, b]))
    return axes, values
