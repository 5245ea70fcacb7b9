#!/usr/bin/env python3
"""Trace admissibility boundaries over the cross-coefficient plane.

Writes one CSV of (rho, eta') boundary points per Hurst pair plus a
summary CSV of the special-case correlation ceilings, ready to plot.
"""
from __future__ import annotations

import argparse
import csv
from pathlib import Path

from mfbm import SpecialCase, admissible_boundary, max_correlation


def parse_pairs(text: str) -> list[tuple[float, float]]:
    pairs = []
    for chunk in text.split(";"):
        h1, h2 = (float(v) for v in chunk.split(","))
        pairs.append((h1, h2))
    return pairs


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument(
        "--pairs",
        default="0.1,0.8;0.3,0.7;0.5,0.5",
        help="semicolon-separated h1,h2 pairs",
    )
    ap.add_argument("--points", type=int, default=361, help="points per curve")
    ap.add_argument("--out-dir", default="admissible_region", help="output directory")
    args = ap.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary = []
    for h1, h2 in parse_pairs(args.pairs):
        curve = admissible_boundary(h1, h2, n_points=args.points)
        name = out_dir / f"boundary_h{h1:g}_h{h2:g}.csv"
        with open(name, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["rho", "eta_prime"])
            writer.writerows(curve.tolist())
        summary.append(
            [
                h1,
                h2,
                max_correlation(h1, h2, SpecialCase.WELL_BALANCED),
                max_correlation(h1, h2, SpecialCase.CAUSAL),
            ]
        )
        print(f"wrote {name} ({args.points} points)")
    with open(out_dir / "ceilings.csv", "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["h1", "h2", "well_balanced_max", "causal_max"])
        writer.writerows(summary)
    print(f"wrote {out_dir / 'ceilings.csv'}")


if __name__ == "__main__":
    main()
