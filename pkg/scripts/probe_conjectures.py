#!/usr/bin/env python3
"""Empirical probes of two open asymptotic questions in the intermediate
regime (1 << r << n):

  * does #CC / r approach a constant as n grows (with r = n^alpha fixed)?
  * does clique_number * r / n approach a constant?

Neither is asserted anywhere in the test suite; this script just prints the
trend tables so the numbers can be eyeballed across scales.

Example:
    python scripts/probe_conjectures.py --alpha 0.5 --sizes 1000 3000 10000 \
        --replicates 50 --seed 1
"""

import argparse
import sys

import numpy as np

from splitdrift.graph import connected_components, summarize
from splitdrift.samplers import ModelParams, sample_backward


def _substream(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=[seed, index]))


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, default=0.5,
                    help="r = n**alpha (keep 0 < alpha < 1 for the regime)")
    ap.add_argument("--sizes", type=int, nargs="+",
                    default=(1_000, 3_000, 10_000))
    ap.add_argument("--replicates", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--clique-limit", type=int, default=2_000,
                    help="skip exact clique search above this n")
    args = ap.parse_args()

    print(f"r = n^{args.alpha}, {args.replicates} backward replicates per n")
    print(f"{'n':>8} {'r':>10} {'mean #CC':>10} {'#CC/r':>8} "
          f"{'sd':>8} {'mean clique':>12} {'clique*r/n':>11}")
    for n in args.sizes:
        r = float(n) ** args.alpha
        params = ModelParams(n, r)
        cc = np.empty(args.replicates)
        cliques = []
        for j in range(args.replicates):
            g = sample_backward(params, _substream(args.seed, j))
            cc[j] = connected_components(g)
            if n <= args.clique_limit:
                cliques.append(summarize(g, clique_limit=n).clique_number)
        cq = float(np.mean(cliques)) if cliques else float("nan")
        print(f"{n:>8} {r:>10.1f} {cc.mean():>10.1f} {cc.mean() / r:>8.3f} "
              f"{cc.std(ddof=1) / r:>8.3f} {cq:>12.2f} {cq * r / n:>11.3f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
