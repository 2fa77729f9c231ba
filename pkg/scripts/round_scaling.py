"""Total rounds against s_max for each schedule variant on the structured families.

    python3 scripts/round_scaling.py --family long-path --sizes 16 32 64 128
    python3 scripts/round_scaling.py --family blossom-chain --out rounds.jsonl
"""

import argparse
import sys
import time

from congest_matching.congest import SimConfig
from congest_matching.driver import VARIANTS
from congest_matching.experiment import describe, fit_exponents, run_instance, write_jsonl
from congest_matching.generators import blossom_chain, long_path

FAMILIES = {
    # both families are parameterized here by their maximum matching size
    "long-path": (lambda s: long_path(s - 1)[0], "k", lambda s: s - 1),
    "blossom-chain": (lambda s: blossom_chain(s // 4)[0], "k", lambda s: s // 4),
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--family", choices=sorted(FAMILIES), default="long-path")
    ap.add_argument("--sizes", type=int, nargs="+", default=[16, 32, 64, 128])
    ap.add_argument("--variants", nargs="+", choices=VARIANTS, default=list(VARIANTS))
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", help="also write JSON lines here")
    args = ap.parse_args(argv)

    make, _, param = FAMILIES[args.family]
    records = []
    print(f"{'variant':<12} {'s_max':>6} {'total':>10} {'active':>8} {'idle':>10} {'sec':>6}")
    for variant in args.variants:
        for s in args.sizes:
            g = make(s)
            t0 = time.perf_counter()
            rec = run_instance(g, describe(args.family, param(s)), args.seed, variant,
                               SimConfig(seed=args.seed))
            active = rec["rounds_sim"] + rec["rounds_charged"]
            print(f"{variant:<12} {rec['s_max']:>6} {rec['rounds_total']:>10} {active:>8} "
                  f"{rec['rounds_idle']:>10} {time.perf_counter() - t0:>6.1f}")
            records.append(rec)
    fits = fit_exponents(records)
    for fit in fits:
        print(f"{fit['variant']:<12} exponent {fit['exponent']:.3f} over {fit['points']} sizes")
    if args.out:
        with open(args.out, "w") as fh:
            write_jsonl(records + fits, fh)
    return 0


if __name__ == "__main__":
    sys.exit(main())
