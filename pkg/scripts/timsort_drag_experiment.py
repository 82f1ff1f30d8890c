#!/usr/bin/env python3
"""Merge costs on the adversarial drag profile.

The input's run lengths follow the recursive halving profile that forces
ratio-based stack rules into unbalanced merges; run lengths are scaled by 32
so cutoff-based methods cannot hide them.  Desk scale is n = 2^20; pass
--full for n = 2^24.
"""

import argparse
import math
import sys
import time

import numpy as np

from runsort import Metrics, SORTERS, SortConfig, run_profile, timsort_drag

ALGOS = ("peeksort", "powersort", "top-down", "bottom-up",
         "alpha-stack", "alpha-merge")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--full", action="store_true", help="n=2^24 instead of 2^20")
    ap.add_argument("--log2-n", type=int, default=None)
    ap.add_argument("--min-run-len", type=int, default=24)
    args = ap.parse_args()

    log2n = args.log2_n or (24 if args.full else 20)
    n = 1 << log2n
    w = args.min_run_len
    base = timsort_drag(n, run_scale=32)
    prof = run_profile(base)
    norm = n * math.log2(n / w)
    print(f"drag profile: n=2^{log2n}  r={prof.r}  normalizer n*lg(n/w)={norm:.3e}")
    print(f"{'algorithm':>12}  {'merge cost':>12}  {'normalized':>10}  "
          f"{'time [ms]':>10}")
    cfg = SortConfig(min_run_len=w, merge_kind="bitonic")
    for algo in ALGOS:
        a = base.copy()
        m = Metrics()
        t0 = time.time()
        SORTERS[algo](a, cfg, m)
        ms = (time.time() - t0) * 1e3
        assert bool(np.all(a[:-1] <= a[1:]))
        print(f"{algo:>12}  {m.merge_cost:12d}  {m.merge_cost / norm:10.4f}  "
              f"{ms:10.1f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
