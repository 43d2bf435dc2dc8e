"""Log-log slope of Cov(X_n, Y_n) over n for cross-persistent and short-memory pairs.

    python scripts/scaling.py --R 2000
"""
import argparse

import numpy as np

from rctest.montecarlo import process_spec, run_scaling_check

CASES = [
    ("arfima d=0.4 (circulant)", "arfima", 0.4, {"method": "circulant"}, 1.8),
    ("arfima d=0.4 (truncated MA)", "arfima", 0.4, {}, 1.8),
    ("ar1 theta=0.5", "ar1", 0.5, {}, 1.0),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--R", type=int, default=2000)
    ap.add_argument("--rho", type=float, default=0.9)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    ns = np.unique(np.round(np.geomspace(100, 10_000, 9)).astype(int))
    for label, kind, par, opts, expected in CASES:
        res = run_scaling_check(process_spec(kind, par, args.rho, int(ns.max()), **opts), ns, args.R, args.seed)
        print(f"{label:30s} slope {res.slope:.3f}  (expected {expected})")


if __name__ == "__main__":
    main()
