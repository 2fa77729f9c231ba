"""Solve many random connected graphs and compare against the blossom oracle.

    python3 scripts/exactness_sweep.py --count 200 --n-min 10 --n-max 60
"""

import argparse
import random
import sys
from collections import Counter

import networkx as nx

from congest_matching.driver import isqrt_ceil, solve_traced
from congest_matching.graph import Graph
from congest_matching.oracle import max_matching


def random_connected(rng, n_min, n_max, ps):
    while True:
        n = rng.randint(n_min, n_max)
        h = nx.gnp_random_graph(n, rng.choice(ps), seed=rng.randrange(1 << 30))
        if h.number_of_edges() and nx.is_connected(h):
            return Graph.from_edge_list(n, sorted(h.edges()))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--n-min", type=int, default=10)
    ap.add_argument("--n-max", type=int, default=60)
    ap.add_argument("--p", type=float, nargs="+", default=[0.1, 0.2, 0.4])
    ap.add_argument("--variant", default="hybrid")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = random.Random(args.seed)
    mismatches, deficits = 0, Counter()
    for i in range(args.count):
        g = random_connected(rng, args.n_min, args.n_max, args.p)
        tr = solve_traced(g, i, args.variant)
        best = len(max_matching(g))
        if len(tr.matching) != best:
            mismatches += 1
            print(f"mismatch: instance {i} n={g.n} got {len(tr.matching)} want {best}")
        deficit = best - tr.size_after_a
        deficits[deficit] += 1
        if deficit > isqrt_ceil(tr.s_hat):
            print(f"deficit bound broken on instance {i}: {deficit}")
    print(f"{args.count} instances, {mismatches} mismatches")
    print("deficit after phase A:", dict(sorted(deficits.items())))
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
