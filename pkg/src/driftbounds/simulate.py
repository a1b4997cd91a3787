"""Trajectory-average estimators and empirical checks of the certified bounds.

Random streams: replication ``i`` (and run ``k`` inside a median) draws from
``SeedSequence(seed, spawn_key=(i, k))``, the same derivation numpy uses for
``SeedSequence.spawn``. Estimates therefore do not depend on how replications
are distributed across threads.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy.stats import binomtest

from .errors import DomainError
from .models import ChainModel


def stream(seed: int, key: Sequence[int] = ()) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(key)))


def _kahan_walk(model: ChainModel, t: int, n: int, rng: np.random.Generator) -> float:
    x = model.x0
    for _ in range(t):
        x = model.step(x, rng)
    total = 0.0
    comp = 0.0
    for i in range(n):
        if i:
            x = model.step(x, rng)
        y = float(model.f_fn(x)) - comp
        s = total + y
        comp = (s - total) - y
        total = s
    return total / n


def run_one_walk(model: ChainModel, t: int, n: int, seed: int, key: Sequence[int] = ()) -> float:
    """Average of ``f(X_i)`` for ``i = t .. t+n-1`` along one trajectory from ``model.x0``."""
    if t < 0 or n < 1:
        raise DomainError(f"need t >= 0 and n >= 1, got t={t}, n={n}")
    rng = stream(seed, key)
    if model.path is None:
        return _kahan_walk(model, t, n, rng)
    xs = model.path(model.x0, t + n, rng)
    return math.fsum(np.asarray(model.f_fn(xs[t:]), dtype=float)) / n


def run_ma(model: ChainModel, t: int, n: int, m: int, seed: int, key: Sequence[int] = ()) -> float:
    """Median of ``m`` independent one-walk estimates; run ``k`` uses ``key + (k,)``."""
    if m < 1 or m % 2 == 0:
        raise DomainError(f"m must be an odd positive integer, got {m}")
    key = tuple(key)
    ests = [run_one_walk(model, t, n, seed, key + (k,)) for k in range(m)]
    return float(np.median(ests))


def _replicate(model, t, n, m, reps, seed, threads) -> np.ndarray:
    def one(i):
        return run_ma(model, t, n, m, seed, (i,))

    if threads <= 1:
        return np.array([one(i) for i in range(reps)])
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return np.array(list(pool.map(one, range(reps))))


@dataclass(frozen=True)
class CoverageResult:
    coverage: float
    hits: int
    reps: int
    wilson_ci: Tuple[float, float]

    @property
    def half_width(self) -> float:
        return (self.wilson_ci[1] - self.wilson_ci[0]) / 2


def wilson_interval(hits: int, reps: int, confidence: float = 0.95) -> Tuple[float, float]:
    ci = binomtest(hits, reps).proportion_ci(confidence_level=confidence, method="wilson")
    return float(ci.low), float(ci.high)


def coverage_experiment(model: ChainModel, t: int, n: int, m: int, eps: float,
                        reps: int, seed: int, threads: int = 1) -> CoverageResult:
    """Fraction of replications with ``|estimate - I| <= eps``, with a 95% Wilson interval."""
    if model.exact_i is None:
        raise DomainError("coverage needs a model with a known exact_i")
    if reps < 1:
        raise DomainError("reps must be >= 1")
    if math.isinf(eps) and eps > 0:
        hits = reps
    else:
        est = _replicate(model, t, n, m, reps, seed, threads)
        hits = int(np.count_nonzero(np.abs(est - model.exact_i) <= eps))
    return CoverageResult(hits / reps, hits, reps, wilson_interval(hits, reps))


@dataclass(frozen=True)
class MseResult:
    mse: float
    std_err: float
    reps: int


def empirical_mse(model: ChainModel, t: int, n: int, reps: int, seed: int,
                  threads: int = 1) -> MseResult:
    if model.exact_i is None:
        raise DomainError("empirical MSE needs a model with a known exact_i")
    sq = (_replicate(model, t, n, 1, reps, seed, threads) - model.exact_i) ** 2
    se = float(sq.std(ddof=1) / math.sqrt(reps)) if reps > 1 else math.nan
    return MseResult(float(sq.mean()), se, reps)
