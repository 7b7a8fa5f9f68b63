#!/usr/bin/env python3
"""Wall-clock benchmarks for the two exact samplers.

Example:
    python scripts/bench_samplers.py --sizes 100 1000 10000 --r 100 --reps 3
"""

import argparse
import sys
import time

import numpy as np

from splitdrift.samplers import (
    ModelParams,
    sample_backward,
    sample_forward,
    sample_forward_batch,
)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=(100, 1_000, 10_000))
    ap.add_argument("--r", type=float, default=100.0)
    ap.add_argument("--reps", type=int, default=3)
    ap.add_argument("--batch", type=int, default=0,
                    help="also time a vectorized forward batch of this size")
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    sample_backward(ModelParams(50, 1.0), rng)  # warm the jit kernel

    print(f"r = {args.r}, best of {args.reps} (seconds per sample)")
    print(f"{'n':>8} {'forward':>10} {'backward':>10}")
    for n in args.sizes:
        params = ModelParams(n, args.r)
        best = {}
        for name, fn in (("forward", sample_forward), ("backward", sample_backward)):
            times = []
            for _ in range(args.reps):
                t0 = time.perf_counter()
                fn(params, rng)
                times.append(time.perf_counter() - t0)
            best[name] = min(times)
        print(f"{n:>8} {best['forward']:>10.3f} {best['backward']:>10.3f}")

    if args.batch:
        n = args.sizes[0]
        params = ModelParams(n, args.r)
        t0 = time.perf_counter()
        sample_forward_batch(params, args.batch, rng)
        dt = time.perf_counter() - t0
        print(f"forward batch: {args.batch} draws at n={n} in {dt:.2f}s "
              f"({dt / args.batch * 1e6:.1f} us/draw)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
