"""Small deterministic 1-D solvers shared by the constants and optimizer code."""
from __future__ import annotations

import math
from typing import Callable

from scipy import optimize

from .errors import ConvergenceError

_INV_PHI = (math.sqrt(5) - 1) / 2


def bisect(fn: Callable[[float], float], lo: float, hi: float, maxiter: int = 200) -> float:
    """Root of ``fn`` on ``[lo, hi]``, assuming ``fn(lo) < 0 < fn(hi)``."""
    try:
        return optimize.bisect(fn, lo, hi, xtol=1e-300, rtol=4 * 2.2205e-16, maxiter=maxiter)
    except RuntimeError as exc:
        raise ConvergenceError(str(exc)) from exc


def golden_min(fn: Callable[[float], float], lo: float, hi: float, tol: float) -> float:
    """Golden-section minimiser of ``fn`` on ``[lo, hi]`` down to bracket width ``tol``."""
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(500):
        if b - a <= tol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = fn(d)
    else:
        raise ConvergenceError("golden-section search did not reach tolerance")
    return c if fc <= fd else d


def scan_then_golden(fn: Callable[[float], float], lo: float, hi: float,
                     tol: float, points: int = 64) -> float:
    """Coarse grid scan, then golden section inside the best cell's neighbours.

    Guards against local minima when unimodality is not known.
    """
    xs = [lo + (hi - lo) * (i + 1) / (points + 1) for i in range(points)]
    vals = [fn(x) for x in xs]
    best = min(range(points), key=lambda i: (vals[i], i))
    a = xs[best - 1] if best > 0 else lo
    b = xs[best + 1] if best < points - 1 else hi
    x = golden_min(fn, a, b, tol)
    return x if fn(x) <= vals[best] else xs[best]
