"""Empirical coverage of one-walk and median-of-averages estimators for the AR(1) chain.

The certified run lengths are far too long to simulate, so this checks
the short "reality" lengths at which the estimators already achieve the
target coverage.
"""
import argparse

from driftbounds.models import contracting_normals
from driftbounds.simulate import coverage_experiment

POINTS = [(0, 811, 1, 1000), (0, 3248, 1, 10_000), (0, 726, 7, 2000)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--theta", type=float, default=0.5)
    ap.add_argument("--eps", type=float, default=0.1)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--threads", type=int, default=4)
    args = ap.parse_args()

    model = contracting_normals(args.theta, 1.6226, x0=0.0, exact_i=0.0)
    print(f"{'t':>4} {'n':>6} {'m':>3} {'reps':>6} {'coverage':>9}  wilson 95%")
    for t, n, m, reps in POINTS:
        res = coverage_experiment(model, t, n, m, args.eps, reps, args.seed, args.threads)
        lo, hi = res.wilson_ci
        print(f"{t:>4} {n:>6} {m:>3} {reps:>6} {res.coverage:>9.4f}  [{lo:.4f}, {hi:.4f}]")


if __name__ == "__main__":
    main()
