"""Command line entry point: ``run``, ``experiment`` and ``generate``."""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from typing import Optional

from .congest import SimConfig
from .driver import VARIANTS
from .errors import MatchingError
from .experiment import ExperimentSpec, describe, run_experiment, run_instance, write_jsonl
from .generators import KINDS, generate
from .graph import format_edge_list, format_matching, parse_edge_list


def _add_instance_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kind", choices=KINDS, help="instance family")
    p.add_argument("--n", type=int, help="node count (gnp, cycle, two-free)")
    p.add_argument("--p", type=float, help="edge probability (gnp, two-free)")
    p.add_argument("--k", type=int, help="size parameter (long-path, blossom-chain)")
    p.add_argument("--name", help="fixture name (kind=fixture)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--graph-file", help="read an edge list instead of generating")
    p.add_argument("--out", help="output path (default: standard output)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="congest-matching",
        description="Simulated CONGEST maximum matching with round accounting.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="solve one instance and print its record")
    _add_instance_flags(run_p)
    run_p.add_argument("--variant", choices=VARIANTS, default="hybrid")
    run_p.add_argument("--bandwidth-c", type=int, default=4)
    run_p.add_argument("--max-rounds", type=int)
    run_p.add_argument("--trace", help="write one line per message to this file")

    exp_p = sub.add_parser("experiment", help="run a JSON experiment spec")
    exp_p.add_argument("spec", help="path to the JSON spec")
    exp_p.add_argument("--out", help="output path (default: standard output)")

    gen_p = sub.add_parser("generate", help="write an instance as an edge list")
    _add_instance_flags(gen_p)
    gen_p.add_argument("--matching-out", help="also write the family's matching here")
    return parser


def _load_instance(parser, args):
    if args.graph_file:
        with open(args.graph_file) as fh:
            return parse_edge_list(fh.read()), None, f"file:{args.graph_file}"
    if args.kind is None:
        parser.error("either --kind or --graph-file is required")
    try:
        g, m = generate(args.kind, n=args.n, p=args.p, k=args.k, seed=args.seed,
                        name=args.name)
    except (ValueError, KeyError, FileNotFoundError) as exc:
        parser.error(str(exc))
    size = args.n if args.kind in ("gnp", "cycle", "two-free") else args.k
    return g, m, describe(args.kind, size, args.p, args.seed, args.name)


@contextlib.contextmanager
def _output(path: Optional[str]):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def _cmd_run(parser, args) -> int:
    g, _, instance = _load_instance(parser, args)
    if not g.is_connected():
        parser.error("the input graph must be connected")
    try:
        SimConfig(bandwidth_c=args.bandwidth_c).budget(g.id_space)
    except ValueError as exc:
        parser.error(str(exc))
    with contextlib.ExitStack() as stack:
        trace = stack.enter_context(open(args.trace, "w")) if args.trace else None
        cfg = SimConfig(bandwidth_c=args.bandwidth_c, max_rounds=args.max_rounds,
                        seed=args.seed, trace=trace)
        try:
            record = run_instance(g, instance, args.seed, args.variant, cfg)
        except MatchingError as exc:
            print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
            return 1
    with _output(args.out) as out:
        write_jsonl([record], out)
    return 0


def _cmd_experiment(parser, args) -> int:
    try:
        spec = ExperimentSpec.load(args.spec)
    except (OSError, ValueError, TypeError) as exc:
        parser.error(f"bad experiment spec: {exc}")
    with _output(args.out) as out:
        run_experiment(spec, out)
    return 0


def _cmd_generate(parser, args) -> int:
    g, m, _ = _load_instance(parser, args)
    with _output(args.out) as out:
        out.write(format_edge_list(g))
    if args.matching_out and m is not None:
        with open(args.matching_out, "w") as fh:
            fh.write(format_matching(m))
    return 0


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"run": _cmd_run, "experiment": _cmd_experiment,
               "generate": _cmd_generate}[args.command]
    return handler(parser, args)


if __name__ == "__main__":
    sys.exit(main())
