#!/usr/bin/env python3
"""Merge-cost study on random-runs inputs.

Desk scale by default (n = 10^6, mean run length 1000, 50 seeds); pass
--full for the original scale (n = 10^7, mean run length 3000), which needs
a few GB of RAM and a few minutes.  Reports, per algorithm, the mean merge
cost divided by n*lg(n/w) (the cost of a hypothetical mergesort that starts
from runs of length w and ignores existing order) and compares the adaptive
methods against n*lg(r̂).
"""

import argparse
import math
import sys
import time

import numpy as np

from runsort import Metrics, SortConfig, SORTERS, random_runs, run_profile
from runsort.bench import ExperimentSpec, run_experiment, write_csv

ALGOS = ("peeksort", "powersort", "top-down", "bottom-up",
         "alpha-stack", "alpha-merge")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--full", action="store_true",
                    help="n=10^7, mean 3000 (paper scale) instead of desk scale")
    ap.add_argument("--n", type=int, default=None)
    ap.add_argument("--mean-len", type=int, default=None)
    ap.add_argument("--seeds", type=int, default=None)
    ap.add_argument("--min-run-len", type=int, default=24)
    ap.add_argument("--out", default=None, help="optional CSV path")
    args = ap.parse_args()

    if args.full:
        n, mean_len, seeds = 10**7, 3000, 10
    else:
        n, mean_len, seeds = 10**6, 1000, 50
    n = args.n or n
    mean_len = args.mean_len or mean_len
    seeds = args.seeds or seeds
    w = args.min_run_len

    spec = ExperimentSpec(
        algorithms=ALGOS,
        generator="random-runs",
        n=n,
        mean_len=mean_len,
        seeds=tuple(range(1, seeds + 1)),
        min_run_len=w,
        merge_kind="bitonic",
    )
    t0 = time.time()
    rows, profiles = run_experiment(spec)
    if args.out:
        write_csv(rows, args.out)

    norm = n * math.log2(n / w)
    r_hat = float(np.mean([p.r for _, p in profiles]))
    print(f"random-runs: n={n:,}  mean run length={mean_len}  seeds={seeds}  "
          f"w={w}  ({time.time() - t0:.1f}s)")
    print(f"normalizer n*lg(n/w) = {norm:.3e};  mean detected runs r̂ = {r_hat:.0f};"
          f"  n*lg(r̂) = {n * math.log2(r_hat):.3e}")
    print(f"{'algorithm':>12}  {'mean merge cost':>16}  {'normalized':>10}  "
          f"{'mean time [ms]':>14}")
    for algo in ALGOS:
        sel = [r for r in rows if r.algo == algo]
        cost = float(np.mean([r.merge_cost for r in sel]))
        ms = float(np.mean([r.time_ns for r in sel])) / 1e6
        print(f"{algo:>12}  {cost:16.3e}  {cost / norm:10.4f}  {ms:14.1f}")
    power_cost = float(np.mean([r.merge_cost for r in rows
                                if r.algo == "powersort"]))
    verdict = "<" if power_cost < n * math.log2(r_hat) else ">="
    print(f"\npowersort mean merge cost {power_cost:.3e} {verdict} "
          f"n*lg(r̂) = {n * math.log2(r_hat):.3e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
