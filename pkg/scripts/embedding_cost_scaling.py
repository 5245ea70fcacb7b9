#!/usr/bin/env python3
"""Measure how planning and sampling cost grow with the embedding order.

Times build_plan and simulate separately over a dyadic grid of m, prints
the fitted log-log slopes, and writes the raw timings as CSV.
"""
from __future__ import annotations

import argparse
import csv
import time

import numpy as np

from mfbm import SimulationConfig, build_plan, load_params, simulate
from mfbm.params import MfbmParams


def default_params() -> MfbmParams:
    return MfbmParams(
        H=np.array([0.3, 0.7]),
        sigma=np.ones(2),
        rho=np.array([[1.0, 0.3], [0.3, 1.0]]),
        eta=np.zeros((2, 2)),
    )


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--params", default=None, help="parameter JSON (default: built-in bivariate set)")
    ap.add_argument("--min-order", type=int, default=10, help="smallest log2 m")
    ap.add_argument("--max-order", type=int, default=16, help="largest log2 m")
    ap.add_argument("--replicates", type=int, default=4)
    ap.add_argument("--rounds", type=int, default=3, help="timing rounds, best kept")
    ap.add_argument("--out", default="embedding_cost.csv")
    args = ap.parse_args()

    params = load_params(args.params) if args.params else default_params()
    orders = [2**k for k in range(args.min_order, args.max_order + 1)]
    build_best = {m: np.inf for m in orders}
    sample_best = {m: np.inf for m in orders}
    plans = {}
    # interleave rounds so a load spike cannot distort one end of the grid
    for _ in range(args.rounds):
        for m in orders:
            cfg = SimulationConfig(n=m // 2, m=m, replicates=args.replicates)
            t0 = time.perf_counter()
            plans[m] = build_plan(params, cfg)
            build_best[m] = min(build_best[m], time.perf_counter() - t0)
            t0 = time.perf_counter()
            simulate(plans[m], cfg)
            sample_best[m] = min(sample_best[m], time.perf_counter() - t0)

    rows = [
        [m, build_best[m], sample_best[m], build_best[m] + sample_best[m]]
        for m in orders
    ]
    with open(args.out, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["m", "build_seconds", "sample_seconds", "total_seconds"])
        writer.writerows(rows)
    logs = np.log(orders)
    for label, series in (
        ("build", build_best),
        ("sample", sample_best),
        ("total", {m: build_best[m] + sample_best[m] for m in orders}),
    ):
        slope = np.polyfit(logs, np.log([series[m] for m in orders]), 1)[0]
        print(f"{label} slope: {slope:.3f}")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
