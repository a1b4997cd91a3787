"""Cost minimisation over the free parameters: gamma, gamma_r, a and the small set.

Every search here is deterministic: fixed grids, fixed golden-section
brackets, ties broken toward the smaller coordinate.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import baxendale as bx
from .bounds import (
    DEFAULT_A,
    Schedule,
    _one_walk,
    _terms,
    schedule_ma,
    schedule_one_walk,
)
from .drift import Deterministic, DriftParams, FunctionNorms, StartSpec, transform_r
from .errors import DomainError
from .numerics import scan_then_golden

GRID_DELTA = 1e-6


@dataclass
class GammaFit:
    gamma: float
    gamma_r: float
    schedule: Schedule
    probes: List[Tuple[float, float, int]] = field(default_factory=list, repr=False)


@dataclass
class SmallSetFit:
    d: float
    objective_value: float
    schedule: Optional[Schedule] = None


@dataclass
class LevelFit:
    a: float
    schedule: Schedule
    probes: List[Tuple[float, int]] = field(default_factory=list, repr=False)


class Objective(enum.Enum):
    MIN_RHO2 = "min_rho2"
    MIN_TOTAL_COST = "min_total_cost"


def gamma_grid(rho: float, points: int = 400, delta: float = GRID_DELTA) -> np.ndarray:
    """Points in ``(rho + delta, 1 - delta)``, log-spaced in the distance to ``rho``."""
    hi = 1 - delta - rho
    if hi <= delta:
        raise DomainError(f"rho={rho} leaves no room for gamma")
    return rho + np.geomspace(delta, hi, points)


def _m_values(params: DriftParams, gammas: Sequence[float], cls: bx.ChainClass) -> List[float]:
    out = []
    for g in gammas:
        try:
            out.append(bx.big_m(params, float(g), cls))
        except (DomainError, OverflowError, ZeroDivisionError):
            out.append(math.inf)
    return out


def optimize_gammas(
    params_v: DriftParams,
    params_vr: DriftParams,
    chain_class: bx.ChainClass,
    norms: FunctionNorms,
    r: float,
    eps: float,
    alpha: float,
    start: StartSpec,
    points: int = 400,
    refine: int = 10,
) -> GammaFit:
    """Product-grid search for the cheapest one-walk schedule over ``(gamma, gamma_r)``.

    A coarse log grid is followed by one pass at ``refine`` times the
    resolution between the incumbent's grid neighbours.
    """
    rho_v = bx.rho(params_v, chain_class)
    rho_r = bx.rho(params_vr, chain_class)
    det = isinstance(start, Deterministic)
    probes: List[Tuple[float, float, int]] = []
    # pi_v * fc / (eps^2 alpha) is shared by every grid point.
    base = norms.fc_norm_2p / (eps ** 2 * alpha)

    def search(gs, grs):
        ms = _m_values(params_v, gs, chain_class)
        mrs = _m_values(params_vr, grs, chain_class)
        best = None
        for g, m in zip(gs, ms):
            if not math.isfinite(m):
                continue
            for gr, mr in zip(grs, mrs):
                if not math.isfinite(mr):
                    continue
                common = base * (1 + 2 * mr * gr / (1 - gr))
                b, c, ct = _terms(common, norms.pi_v, m, g, start)
                t, n = _one_walk(b, c, ct, g, det)
                cost = t + n
                probes.append((float(g), float(gr), cost))
                key = (cost, g, gr)
                if best is None or key < best:
                    best = key
        if best is None:
            raise DomainError("no finite-cost grid point")
        return best

    gs = gamma_grid(rho_v, points)
    grs = gamma_grid(rho_r, points)
    _, g0, gr0 = search(gs, grs)

    def neighbours(grid, x):
        i = int(np.searchsorted(grid, x))
        lo = grid[i - 1] if i > 0 else grid[0]
        hi = grid[i + 1] if i + 1 < len(grid) else grid[-1]
        return np.linspace(lo, hi, 2 * refine + 1)

    _, g1, gr1 = search(neighbours(gs, g0), neighbours(grs, gr0))
    g1, gr1 = float(g1), float(gr1)
    sched = schedule_one_walk(
        norms,
        bx.certificate(params_v, g1, chain_class),
        bx.certificate(params_vr, gr1, chain_class),
        r, eps, alpha, start,
    )
    return GammaFit(g1, gr1, sched, probes)


def cost_at(params_v, params_vr, chain_class, norms, r, eps, alpha, start,
            gamma: float, gamma_r: float) -> int:
    """Total one-walk cost at a fixed ``(gamma, gamma_r)``."""
    return schedule_one_walk(
        norms,
        bx.certificate(params_v, gamma, chain_class),
        bx.certificate(params_vr, gamma_r, chain_class),
        r, eps, alpha, start,
    ).total_cost


def optimize_small_set(
    theta: float,
    eps: float = 0.1,
    alpha: float = 0.1,
    setting: int = 2,
    chain_class: bx.ChainClass = bx.ChainClass.REVERSIBLE_POSITIVE,
    objective: Objective = Objective.MIN_RHO2,
    r: float = 2.0,
    d_max: float = 10.0,
    tol: float = 1e-5,
    gamma_points: int = 60,
) -> SmallSetFit:
    """Small-set radius ``d`` of the contracting-normals chain minimising the objective.

    ``MIN_RHO2`` minimises the rate certified for ``V**(1/r)``; ``MIN_TOTAL_COST``
    minimises the gamma-optimised one-walk cost from ``x0 = 0``.
    """
    from .models import cn_drift_params, cn_norms

    if not abs(theta) < 1:
        raise DomainError(f"|theta| must be < 1, got {theta}")

    def rho2(d: float) -> float:
        try:
            return bx.rho(transform_r(cn_drift_params(theta, d), r), chain_class)
        except DomainError:
            return math.inf

    def cost(d: float) -> float:
        try:
            p = cn_drift_params(theta, d)
            fit = optimize_gammas(p, transform_r(p, r), chain_class, cn_norms(theta, d, setting),
                                  r, eps, alpha, Deterministic(1.0), points=gamma_points, refine=4)
        except DomainError:
            return math.inf
        return float(fit.schedule.total_cost)

    fn = rho2 if objective is Objective.MIN_RHO2 else cost
    lo = 1.0 + 1e-6
    d = scan_then_golden(fn, lo, d_max, tol=tol, points=64 if fn is rho2 else 16)
    sched = None
    if objective is Objective.MIN_TOTAL_COST:
        p = cn_drift_params(theta, d)
        sched = optimize_gammas(p, transform_r(p, r), chain_class, cn_norms(theta, d, setting),
                                r, eps, alpha, Deterministic(1.0)).schedule
    return SmallSetFit(d=d, objective_value=fn(d), schedule=sched)


def optimize_a(
    params_v: DriftParams,
    params_vr: DriftParams,
    chain_class: bx.ChainClass,
    norms: FunctionNorms,
    r: float,
    eps: float,
    alpha: float,
    start: StartSpec,
    gamma: float,
    gamma_r: float,
    tol: float = 1e-5,
) -> LevelFit:
    """Per-run level ``a`` minimising the median-of-averages cost ``m (t + n)``.

    The cost jumps whenever ``m`` changes, so a coarse scan precedes the
    golden-section refinement; the conventional ``a = 0.11969`` is always probed.
    """
    if not 0 < alpha < 0.5:
        raise DomainError(f"median trick needs alpha < 1/2, got {alpha}")
    cert_v = bx.certificate(params_v, gamma, chain_class)
    cert_vr = bx.certificate(params_vr, gamma_r, chain_class)
    probes: List[Tuple[float, int]] = []

    def cost(a: float) -> float:
        c = schedule_ma(norms, cert_v, cert_vr, r, eps, alpha, start, a).total_cost
        probes.append((a, c))
        return float(c)

    lo, hi = alpha, 0.5
    a_star = scan_then_golden(cost, lo + 1e-9, hi - 1e-9, tol=tol, points=64)
    candidates = [a_star, DEFAULT_A] if lo < DEFAULT_A < hi else [a_star]
    for a in candidates:
        cost(a)
    best_a, _ = min(probes, key=lambda p: (p[1], p[0]))
    return LevelFit(best_a, schedule_ma(norms, cert_v, cert_vr, r, eps, alpha, start, best_a), probes)

