"""Batch runs over instance families, written as JSON lines."""

from __future__ import annotations

import json
import math
import statistics
from dataclasses import dataclass, field
from typing import Iterable, Optional, TextIO

from .congest import SimConfig
from .driver import VARIANTS, solve
from .generators import generate
from .graph import Graph
from .oracle import max_matching

RECORD_FIELDS = ("instance", "n", "m", "s_max", "matching", "rounds_sim",
                 "rounds_charged", "messages", "max_bits", "trace_hash",
                 "variant", "seed")

SIZE_PARAM = {"gnp": "n", "cycle": "n", "two-free": "n",
              "long-path": "k", "blossom-chain": "k"}


@dataclass
class ExperimentSpec:
    kind: str
    sizes: list = field(default_factory=list)
    seeds: list = field(default_factory=lambda: [0])
    variants: list = field(default_factory=lambda: ["hybrid"])
    p: Optional[float] = None
    name: Optional[str] = None
    bandwidth_c: int = 4
    max_rounds: Optional[int] = None
    oracle_limit: int = 2000

    def __post_init__(self):
        bad = [v for v in self.variants if v not in VARIANTS]
        if bad:
            raise ValueError(f"unknown variants {bad}")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentSpec":
        known = set(cls.__dataclass_fields__)
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown spec keys {sorted(extra)}")
        return cls(**data)

    @classmethod
    def load(cls, path: str) -> "ExperimentSpec":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def describe(kind: str, size=None, p=None, seed=None, name=None) -> str:
    if kind == "fixture":
        return f"fixture:{name}"
    parts = [kind]
    if size is not None:
        parts.append(f"{SIZE_PARAM.get(kind, 'size')}={size}")
    if p is not None:
        parts.append(f"p={p}")
    if kind in ("gnp", "two-free") and seed is not None:
        parts.append(f"seed={seed}")
    return ",".join(parts)


def run_instance(g: Graph, instance: str, seed: int, variant: str, cfg: SimConfig,
                 oracle_limit: int = 2000) -> dict:
    """Solve one graph and build its report record."""
    m, report = solve(g, seed, variant, cfg)
    if g.n <= oracle_limit:
        s_max = len(max_matching(g))
        status = "ok" if s_max == len(m) else "mismatch"
    else:
        s_max, status = None, "oracle-skipped"
    record = {"instance": instance, "n": g.n, "m": g.m, "s_max": s_max,
              "matching": len(m), "oracle": status, "variant": variant, "seed": seed}
    record.update(report.summary())
    return record


def run_spec(spec: ExperimentSpec) -> list:
    records = []
    sizes = spec.sizes if spec.kind != "fixture" else [None]
    for size in sizes:
        for seed in spec.seeds:
            kwargs = {"seed": seed, "p": spec.p, "name": spec.name}
            if size is not None:
                kwargs[SIZE_PARAM[spec.kind]] = size
            g, _ = generate(spec.kind, **kwargs)
            instance = describe(spec.kind, size, spec.p, seed, spec.name)
            for variant in spec.variants:
                cfg = SimConfig(bandwidth_c=spec.bandwidth_c, max_rounds=spec.max_rounds,
                                seed=seed)
                records.append(run_instance(g, instance, seed, variant, cfg,
                                            spec.oracle_limit))
    return records


def fit_exponents(records: Iterable[dict]) -> list:
    """Log-log slope of total rounds against ``s_max`` per variant."""
    by_variant: dict = {}
    for r in records:
        if r.get("s_max"):
            by_variant.setdefault(r["variant"], []).append(r)
    fits = []
    for variant, rows in sorted(by_variant.items()):
        xs = [math.log(r["s_max"]) for r in rows]
        ys = [math.log(max(r["rounds_total"], 1)) for r in rows]
        if len(set(xs)) < 2:
            continue
        slope, intercept = statistics.linear_regression(xs, ys)
        fits.append({"fit": "rounds_total~s_max", "variant": variant,
                     "exponent": slope, "intercept": intercept, "points": len(rows)})
    return fits


def write_jsonl(rows: Iterable[dict], out: TextIO) -> None:
    for row in rows:
        out.write(json.dumps(row, sort_keys=True) + "\n")


def run_experiment(spec: ExperimentSpec, out: TextIO) -> list:
    records = run_spec(spec)
    write_jsonl(records, out)
    write_jsonl(fit_exponents(records), out)
    return records


__all__ = ["ExperimentSpec", "RECORD_FIELDS", "describe", "fit_exponents",
           "run_experiment", "run_instance", "run_spec", "write_jsonl"]
