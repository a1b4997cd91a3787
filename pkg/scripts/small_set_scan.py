"""Certified rates as a function of the small-set radius d, and the optimal d per theta."""
import argparse

import numpy as np

from driftbounds import baxendale as bx
from driftbounds.drift import transform_r
from driftbounds.errors import DomainError
from driftbounds.models import CN_CERTIFIED_CLASS, cn_drift_params
from driftbounds.optimizer import optimize_small_set


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--thetas", type=float, nargs="+", default=[0.0, 0.25, 0.5, 0.75, -0.5])
    ap.add_argument("--grid", type=int, default=12)
    args = ap.parse_args()

    ds = np.linspace(1.1, 4.0, args.grid)
    print("theta  d*        rho2(d*)   | rho2 over d =", " ".join(f"{d:.2f}" for d in ds))
    for theta in args.thetas:
        fit = optimize_small_set(theta)
        vals = []
        for d in ds:
            try:
                vals.append(bx.rho(transform_r(cn_drift_params(theta, d), 2), CN_CERTIFIED_CLASS))
            except DomainError:
                vals.append(float("nan"))
        print(f"{theta:5.2f}  {fit.d:.6f}  {fit.objective_value:.6f}  |", " ".join(f"{v:.3f}" for v in vals))


if __name__ == "__main__":
    main()
