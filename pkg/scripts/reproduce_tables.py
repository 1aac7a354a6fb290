"""Write every experiment table at its reference configuration.

    python scripts/reproduce_tables.py --out-dir results
"""
from __future__ import annotations

import argparse
from pathlib import Path

from vilenkin.experiments import main

RUNS = {
    "kernel_growth_walsh17": ["kernel-growth", "--base", "2", "--resolution", "17", "--a-max", "8"],
    "fejer_bound_walsh11": ["fejer-bound", "--base", "2", "--resolution", "11", "--n-max", "2048"],
    "fejer_bound_23_n9": ["fejer-bound", "--base", "2,3", "--resolution", "9", "--n-max", "2048"],
    "fejer_bound_34_n7": ["fejer-bound", "--base", "3,4", "--resolution", "7", "--n-max", "2048"],
    "divergence_strict_walsh12": ["divergence", "--base", "2", "--resolution", "12", "--mode", "strict"],
    "divergence_relaxed_walsh14": ["divergence", "--base", "2", "--resolution", "14", "--mode", "relaxed",
                                   "--k-max", "5"],
    "sharpness_walsh17": ["sharpness", "--base", "2", "--resolution", "17", "--nk-range", "1..8",
                          "--phi", "sqrt-log"],
    "maximal_ratio_walsh8": ["maximal-ratio", "--base", "2", "--resolution", "8", "--samples", "100",
                             "--seed", "9"],
    "maximal_ratio_23_n5": ["maximal-ratio", "--base", "2,3", "--resolution", "5", "--samples", "100",
                            "--seed", "9"],
    "maximal_ratio_34_n4": ["maximal-ratio", "--base", "3,4", "--resolution", "4", "--samples", "100",
                            "--seed", "9"],
    "maximal_trend_walsh": ["maximal-trend", "--base", "2", "--resolution", "14", "--nk-range", "8..14",
                            "--samples", "6", "--seed", "0"],
}


def parse_args():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out-dir", type=Path, default=Path("results"))
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--only", nargs="*", choices=sorted(RUNS), help="subset of runs")
    return p.parse_args()


def run_all():
    args = parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    status = 0
    for name in args.only or RUNS:
        path = args.out_dir / f"{name}.{args.format}"
        code = main([*RUNS[name], "--format", args.format, "--out", str(path)])
        print(f"{name}: exit {code} -> {path}")
        status = max(status, code)
    return status


if __name__ == "__main__":
    raise SystemExit(run_all())
