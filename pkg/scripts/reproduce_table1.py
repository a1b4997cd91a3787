"""Certified (t, n) and median-of-averages schedules for the contracting-normals chain.

Prints one row per (setting, alpha, estimator) at either the rounded reference
gammas or the optimised ones, and optionally writes the rows as CSV.
"""
import argparse

from driftbounds import baxendale as bx
from driftbounds.bounds import DEFAULT_A, schedule_ma, schedule_one_walk
from driftbounds.cli import CSV_COLUMNS, rows_to_csv
from driftbounds.drift import Deterministic, transform_r
from driftbounds.models import CN_CERTIFIED_CLASS, cn_drift_params, cn_norms
from driftbounds.optimizer import optimize_gammas


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--theta", type=float, default=0.5)
    ap.add_argument("--d", type=float, default=1.6226)
    ap.add_argument("--eps", type=float, default=0.1)
    ap.add_argument("--alphas", type=float, nargs="+", default=[0.1, 1e-3, 1e-5])
    ap.add_argument("--optimize", action="store_true", help="optimise (gamma, gamma_r) instead of .915/.971")
    ap.add_argument("--out", help="CSV output path")
    args = ap.parse_args()

    p = cn_drift_params(args.theta, args.d)
    pr = transform_r(p, 2)
    start = Deterministic(1.0)
    g, gr = 0.915, 0.971
    if args.optimize:
        fit = optimize_gammas(p, pr, CN_CERTIFIED_CLASS, cn_norms(args.theta, args.d, 2), 2, args.eps, 0.1, start)
        g, gr = fit.gamma, fit.gamma_r
    cv = bx.certificate(p, g, CN_CERTIFIED_CLASS)
    cr = bx.certificate(pr, gr, CN_CERTIFIED_CLASS)
    print(f"rho={cv.rho:.6f} rho_r={cr.rho:.6f} gamma={g:.6f} M={cv.m_const:.6g} gamma_r={gr:.6f} M_r={cr.m_const:.6g}")

    rows = []
    for setting in (1, 2):
        norms = cn_norms(args.theta, args.d, setting)
        for alpha in args.alphas:
            ow = schedule_one_walk(norms, cv, cr, 2, args.eps, alpha, start)
            rows.append(dict(setting=setting, alpha=alpha, algorithm="one_walk", m=ow.m, t=ow.t, n=ow.n,
                             total_cost=ow.total_cost))
            if alpha < 0.5:
                ma = schedule_ma(norms, cv, cr, 2, args.eps, alpha, start, DEFAULT_A)
                rows.append(dict(setting=setting, alpha=alpha, algorithm="ma", m=ma.m, t=ma.t, n=ma.n,
                                 total_cost=ma.total_cost))

    print(f"{'set':>3} {'alpha':>7} {'alg':>8} {'m':>3} {'t':>4} {'n':>14} {'total':>16}")
    for r in rows:
        print(f"{r['setting']:>3} {r['alpha']:>7g} {r['algorithm']:>8} {r['m']:>3} {r['t']:>4} "
              f"{r['n']:>14.4e} {r['total_cost']:>16.4e}")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(rows_to_csv(rows, CSV_COLUMNS + ["setting"]))


if __name__ == "__main__":
    main()
