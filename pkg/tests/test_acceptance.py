"""Acceptance criteria, one test each, at their stated tolerances.

Every test prints a single ``CRITERION k: PASS|FAIL`` line (also collected
into the terminal summary) before asserting.
"""
import math
import random
import time

import numpy as np
import pytest

from driftbounds import baxendale as bx
from driftbounds.bounds import DEFAULT_A, MseInputs, median_runs, mse_bound, schedule_ma, schedule_one_walk
from driftbounds.drift import Deterministic, DriftParams, NuConcentratedOnC, NuUnknown, transform_r
from driftbounds.models import CN_CERTIFIED_CLASS, cn_drift_params, cn_norms, contracting_normals
from driftbounds.optimizer import cost_at, optimize_gammas, optimize_small_set
from driftbounds.simulate import coverage_experiment, empirical_mse

from conftest import ACCEPTANCE_LINES, D, GAMMA, GAMMA_R, THETA

SEED = 42
X0 = Deterministic(1.0)


def rel(x, want):
    return abs(x / want - 1)


def report(k, checks, elapsed, limit=None):
    """checks: list of (label, ok). Prints and records one line; returns overall ok."""
    ok = all(c for _, c in checks)
    timing = f"{elapsed:.2f}s"
    if limit is not None:
        in_time = elapsed < limit
        ok &= in_time
        timing += f" (< {limit:g}s {'ok' if in_time else 'EXCEEDED'})"
    failed = [label for label, c in checks if not c]
    detail = "; ".join(label for label, _ in checks)
    line = f"CRITERION {k}: {'PASS' if ok else 'FAIL'} [{timing}] {detail}"
    if failed:
        line += " || failing: " + "; ".join(failed)
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok


def fresh_certs():
    bx._regime.cache_clear()
    p = cn_drift_params(THETA, D)
    pr = transform_r(p, 2)
    return p, pr


def test_criterion_1_constants():
    t0 = time.perf_counter()
    p, pr = fresh_certs()
    rho = bx.rho(p, CN_CERTIFIED_CLASS)
    rho2 = bx.rho(pr, CN_CERTIFIED_CLASS)
    m = bx.big_m(p, GAMMA, CN_CERTIFIED_CLASS)
    m2 = bx.big_m(pr, GAMMA_R, CN_CERTIFIED_CLASS)
    el = time.perf_counter() - t0
    checks = [
        (f"rho={rho:.6f} vs .895 (rel {rel(rho, .895):.2%} <= 0.5%)", rel(rho, .895) <= 5e-3),
        (f"rho2={rho2:.6f} vs .899 (rel {rel(rho2, .899):.2%} <= 0.5%)", rel(rho2, .899) <= 5e-3),
        (f"M(.915)={m:.6g} vs 3.64e4 (rel {rel(m, 3.64e4):.2%} <= 2%)", rel(m, 3.64e4) <= 0.02),
        (f"M2(.971)={m2:.6g} vs 748 (rel {rel(m2, 748):.2%} <= 2%)", rel(m2, 748) <= 0.02),
    ]
    assert report(1, checks, el, 1.0)


def test_criterion_2_setting2_schedules():
    t0 = time.perf_counter()
    p, pr = fresh_certs()
    cv, cr = bx.certificate(p, GAMMA, CN_CERTIFIED_CLASS), bx.certificate(pr, GAMMA_R, CN_CERTIFIED_CLASS)
    norms = cn_norms(THETA, D, 2)
    checks = []
    for alpha, n_want, t_want in ((0.1, 1.01e8, 229), (1e-3, 1.01e10, None), (1e-5, 1.01e12, None)):
        s = schedule_one_walk(norms, cv, cr, 2, 0.1, alpha, X0)
        checks.append((f"alpha={alpha:g}: n={s.n} (rel {rel(s.n, n_want):.2%})", rel(s.n, n_want) <= 0.02))
        if t_want is not None:
            checks.append((f"alpha={alpha:g}: t={s.t} vs {t_want}", s.t == t_want))
    assert report(2, checks, time.perf_counter() - t0, 1.0)


def test_criterion_3_setting1_schedules():
    t0 = time.perf_counter()
    p, pr = fresh_certs()
    cv, cr = bx.certificate(p, GAMMA, CN_CERTIFIED_CLASS), bx.certificate(pr, GAMMA_R, CN_CERTIFIED_CLASS)
    norms = cn_norms(THETA, D, 1)
    ow = schedule_one_walk(norms, cv, cr, 2, 0.1, 0.1, X0)
    ma = schedule_ma(norms, cv, cr, 2, 0.1, 1e-3, X0, DEFAULT_A)
    checks = [
        (f"one-walk t={ow.t} vs 218", ow.t == 218),
        (f"one-walk n={ow.n} (rel {rel(ow.n, 6.46e9):.2%})", rel(ow.n, 6.46e9) <= 0.02),
        (f"MA m={ma.m} vs 15", ma.m == 15),
        (f"MA n={ma.n} (rel {rel(ma.n, 5.40e9):.2%})", rel(ma.n, 5.40e9) <= 0.02),
        (f"MA total={ma.total_cost} (rel {rel(ma.total_cost, 8.10e10):.2%})", rel(ma.total_cost, 8.10e10) <= 0.02),
    ]
    assert report(3, checks, time.perf_counter() - t0, 1.0)


def test_criterion_4_median_counts():
    t0 = time.perf_counter()
    m3, m5 = median_runs(DEFAULT_A, 1e-3), median_runs(DEFAULT_A, 1e-5)
    checks = [(f"m(1e-3)={m3} vs 15", m3 == 15), (f"m(1e-5)={m5} vs 27", m5 == 27)]
    assert report(4, checks, time.perf_counter() - t0)


def test_criterion_5_optimizer():
    t0 = time.perf_counter()
    fit_d = optimize_small_set(THETA)
    p, pr = fresh_certs()
    norms = cn_norms(THETA, D, 2)
    fit = optimize_gammas(p, pr, CN_CERTIFIED_CLASS, norms, 2, 0.1, 0.1, X0)
    ref = cost_at(p, pr, CN_CERTIFIED_CLASS, norms, 2, 0.1, 0.1, X0, GAMMA, GAMMA_R)
    checks = [
        (f"d={fit_d.d:.6f} vs 1.6226 +- 1e-3", abs(fit_d.d - D) <= 1e-3),
        (f"optimized cost {fit.schedule.total_cost} at ({fit.gamma:.5f}, {fit.gamma_r:.5f}) <= {ref}",
         fit.schedule.total_cost <= ref),
    ]
    assert report(5, checks, time.perf_counter() - t0, 60.0)


@pytest.mark.slow
def test_criterion_6_empirical_coverage():
    t0 = time.perf_counter()
    model = contracting_normals(THETA, D, x0=0.0, exact_i=0.0)
    checks = []
    for (n, m, reps, floor) in ((811, 1, 1000, .88), (3248, 1, 10_000, .995), (726, 7, 2000, .993)):
        res = coverage_experiment(model, 0, n, m, 0.1, reps, SEED, threads=4)
        lo, hi = res.wilson_ci
        checks.append((f"(m={m}, n={n}, reps={reps}) coverage={res.coverage:.4f} "
                       f"wilson=[{lo:.4f}, {hi:.4f}] >= {floor}", res.coverage >= floor))
    assert report(6, checks, time.perf_counter() - t0, 120.0)


@pytest.mark.slow
def test_criterion_7_mse_soundness_grid():
    t0 = time.perf_counter()
    p, pr = fresh_certs()
    cv, cr = bx.certificate(p, GAMMA, CN_CERTIFIED_CLASS), bx.certificate(pr, GAMMA_R, CN_CERTIFIED_CLASS)
    norms = cn_norms(THETA, D, 2)
    model = contracting_normals(THETA, D, x0=0.0, exact_i=0.0)
    checks = []
    for t in (0, 10, 100):
        for n in (100, 1000, 10_000):
            emp = empirical_mse(model, t, n, 2000, SEED + 1000 * t + n, threads=4)
            bound = mse_bound(MseInputs(norms, cv, cr, 2, X0, n=n, t=t))
            checks.append((f"(t={t}, n={n}) mse={emp.mse:.3g} <= {bound:.3g}", emp.mse <= bound))
    assert report(7, checks, time.perf_counter() - t0)


def _random_params(rng):
    lam = rng.uniform(0.05, 0.95)
    k = rng.uniform(lam + 0.01, 10)
    bt = rng.uniform(0.01, 0.99)
    atomic = rng.random() < 0.5
    return DriftParams(bt, lam, k, bt if atomic else rng.uniform(0.01, bt),
                       NuConcentratedOnC() if atomic else NuUnknown())


def _xn(x0, theta, n, reps, gen):
    x = np.full(reps, x0, dtype=float)
    s = math.sqrt(1 - theta * theta)
    for _ in range(n):
        x = theta * x + s * gen.standard_normal(reps)
    return x


def test_criterion_8_self_consistency():
    t0 = time.perf_counter()
    rng = random.Random(SEED)
    worst = 0.0
    for _ in range(100):
        beta = rng.uniform(0.01, 1.0)
        big_r = 1 + rng.uniform(1e-3, 5)
        big_l = 1 + rng.uniform(1e-3, 1e3)
        u = bx.solve_r1_offset(beta, big_r, big_l)
        worst = max(worst, bx.r1_residual(beta, big_r, big_l, u))

    moments_ok, worst_z = True, 0.0
    gen = np.random.default_rng(SEED)
    for n in (1, 2, 3):
        a = _xn(1.5, 0.6, n, 200_000, gen)
        b = _xn((-1) ** n * 1.5, -0.6, n, 200_000, gen)
        for k in (1, 2, 3, 4):
            se = math.sqrt(((a ** k).var() + (b ** k).var()) / a.size)
            z = abs((a ** k).mean() - (b ** k).mean()) / se
            worst_z = max(worst_z, z)
            moments_ok &= z <= 4

    tried = ordered = 0
    while tried < 50:
        params = _random_params(rng)
        try:
            pos = bx.rho(params, bx.ChainClass.REVERSIBLE_POSITIVE)
            rev = bx.rho(params, bx.ChainClass.REVERSIBLE)
        except Exception:  # parameter set outside the nonatomic domain (alpha_1 <= 0)
            continue
        tried += 1
        ordered += pos <= rev
    checks = [
        (f"solve_r1 worst residual {worst:.2e} <= 1e-10", worst <= 1e-10),
        (f"symmetry moments worst |z|={worst_z:.2f} <= 4", moments_ok),
        (f"rho_pos <= rho_rev on {ordered}/{tried} sets", ordered == tried),
    ]
    assert report(8, checks, time.perf_counter() - t0)
