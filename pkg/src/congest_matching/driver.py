"""Maximum matching driver: preprocessing followed by phases A and B.

Preprocessing computes a maximal matching ``M*`` with a randomized proposal
algorithm and broadcasts ``ŝ = 2|M*|``. Phase A runs wrapper A with
``ℓ_i = ⌈2ŝ/(ŝ-i)⌉`` for ``i = 1 .. ŝ-⌈√ŝ⌉``; phase B runs wrapper B
``⌈√ŝ⌉`` times.

The schedule is oblivious: every iteration owns a fixed slot of rounds
derived from its ℓ. Nodes that finish early wait out the slot, which is
booked as idle time. Skipped work never shortens the schedule, so
``rounds_elapsed`` always reflects the full schedule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .cap import cap, cap_round_bound
from .congest import NodeProgram, RoundReport, SimConfig, charge, idle, run
from .errors import BudgetExceeded, ContractViolation, MatchingError
from .graph import Graph, Matching, Walk, augment_along, is_augmenting
from .linear import linear_augpath, linear_round_bound
from .mvpart import part
from .protocols import echo_sum, flood_min

VARIANTS = ("hybrid", "square-only", "linear-only")

PROPOSE, ACCEPT, MATCHED = 0, 1, 2


# ---------------------------------------------------------- maximal matching

class _ProposalMatching(NodeProgram):
    """Three-round phases: propose, accept the lowest proposing edge, announce."""

    def setup(self, view):
        super().setup(view)
        self.active = set(view.ports)
        self.proposal: Optional[int] = None
        self.offers: list = []
        self.mate_port: Optional[int] = None

    def send(self, rnd):
        step = rnd % 3
        if step == 1:
            self.proposal, self.offers = None, []
            if not self.active:
                self.halt(None)
                return {}
            if self.view.rng.random() < 0.5:
                self.proposal = self.view.rng.choice(sorted(self.active))
                return {self.proposal: (PROPOSE,)}
            return {}
        if step == 2:
            if self.proposal is None and self.offers:
                self.mate_port = min(self.offers)
                return {self.mate_port: (ACCEPT,)}
            return {}
        if self.mate_port is not None:
            self.halt(self.mate_port)
            return {e: (MATCHED,) for e in self.active if e != self.mate_port}
        return {}

    def receive(self, rnd, inbox):
        step = rnd % 3
        for e, msg in inbox.items():
            if msg[0] == PROPOSE and e in self.active:
                self.offers.append(e)
            elif msg[0] == ACCEPT and e == self.proposal:
                self.mate_port = e
            elif msg[0] == MATCHED:
                self.active.discard(e)
        if step == 0 and self.mate_port is None and not self.active:
            self.halt(None)


def maximal_matching(g: Graph, seed: int, report: RoundReport,
                     cfg: Optional[SimConfig] = None, phase: str = "maximal") -> Matching:
    """Randomized distributed maximal matching (output checked for maximality)."""
    cfg = cfg or SimConfig()
    cfg = SimConfig(cfg.bandwidth_c, cfg.bandwidth_bits, cfg.max_rounds, seed, cfg.trace)
    outs, _ = run(g, lambda v: _ProposalMatching(), cfg, report=report, phase=phase)
    eids = {e for v, e in outs.items() if e is not None}
    for e in eids:
        u, w = g.endpoints(e)
        if outs[u] != e or outs[w] != e:
            raise ContractViolation(f"endpoints of edge {e} disagree on the matching")
    m = Matching.from_edge_ids(g, eids)
    if not m.is_maximal_in(g):
        raise ContractViolation("proposal algorithm returned a non-maximal matching")
    return m


def compute_s_hat(g: Graph, m: Matching, report: RoundReport,
                  cfg: Optional[SimConfig] = None, phase: str = "s_hat") -> int:
    """``2|M|`` learned by every node through an echo from the maximum id."""
    cfg = cfg or SimConfig()
    values = {v: int(m.is_matched(v) and v < m.mate(v)) for v in g.nodes}
    return 2 * echo_sum(g, values, cfg, report, phase)


# ------------------------------------------------------------------ schedule

def isqrt_ceil(x: int) -> int:
    r = math.isqrt(x)
    return r if r * r == x else r + 1


@dataclass
class Schedule:
    s_hat: int
    variant: str = "hybrid"

    @property
    def b_length(self) -> int:
        # every augmenting path has length at most 2|M|+1 <= 2ŝ+1
        return 2 * self.s_hat + 1

    def a_lengths(self) -> list:
        s = self.s_hat
        if self.variant == "hybrid":
            return [-(-2 * s // (s - i)) for i in range(1, s - isqrt_ceil(s) + 1)]
        if self.variant == "square-only":
            return [-(-2 * s // (s - i)) for i in range(1, s)] + [self.b_length]
        return []

    def b_iterations(self) -> int:
        if self.variant == "hybrid":
            return isqrt_ceil(self.s_hat)
        if self.variant == "linear-only":
            return self.s_hat
        return 0

    @staticmethod
    def slot_a(ell: int) -> int:
        return 2 * ell + ell + cap_round_bound(ell)

    def slot_b(self) -> int:
        ell = self.b_length
        return 2 * ell + ell + linear_round_bound(2 * self.s_hat + 2)

    def total_slots(self) -> int:
        return (sum(self.slot_a(ell) for ell in self.a_lengths())
                + self.b_iterations() * self.slot_b())


# ------------------------------------------------------------------ wrappers

def _with_context(exc: MatchingError, label: str) -> MatchingError:
    exc.phase = label
    if exc.args:
        exc.args = (f"[{label}] {exc.args[0]}",) + exc.args[1:]
    return exc


def _elect(pg: Graph, m: Matching, bound: int, cfg, report) -> tuple[int, int]:
    free = m.unmatched(pg)
    outs = flood_min(pg, {v: v for v in free}, bound, cfg, report, "elect")
    f = outs[free[0]]
    if any(outs[v] != f for v in free):
        raise ContractViolation("unmatched nodes of a part disagree on the primary")
    gnode = next(v for v in free if v != f)
    return f, gnode


def wrapper_a(g: Graph, m: Matching, ell: int, report: RoundReport,
              cfg: Optional[SimConfig] = None, prefix: str = "A") -> list[Walk]:
    """PART(ℓ) followed by CAP in every part, the parts running side by side."""
    cfg = cfg or SimConfig()
    sub = RoundReport()
    partition = part(g, m, ell, sub)
    reports, paths = [], []
    for i in range(len(partition)):
        pg = partition.subgraph(g, i)
        rp = RoundReport()
        f, gnode = _elect(pg, m, ell, cfg, rp)
        paths.append(cap(pg, m, f, gnode, ell, rp, cfg))
        reports.append(rp)
    sub.merge_parallel(reports)
    report.absorb(sub, prefix)
    return paths


def wrapper_b(g: Graph, m: Matching, s_hat: int, report: RoundReport,
              cfg: Optional[SimConfig] = None, prefix: str = "B") -> list[Walk]:
    """PART(2ŝ+1) followed by the linear construction in every part."""
    cfg = cfg or SimConfig()
    ell = Schedule(s_hat).b_length
    sub = RoundReport()
    partition = part(g, m, ell, sub)
    reports, paths = [], []
    for i in range(len(partition)):
        pg = partition.subgraph(g, i)
        if pg.n > 2 * len(m.restrict(pg)) + 2:
            raise ContractViolation("part has more than two unmatched nodes")
        rp = RoundReport()
        f, gnode = _elect(pg, m, ell, cfg, rp)
        paths.append(linear_augpath(pg, m, f, gnode, rp, cfg))
        reports.append(rp)
    sub.merge_parallel(reports)
    report.absorb(sub, prefix)
    return paths


def _apply(g: Graph, m: Matching, paths: list) -> Matching:
    seen: set = set()
    for p in paths:
        if seen & set(p.nodes):
            raise ContractViolation("returned augmenting paths share a node")
        seen |= set(p.nodes)
        if not is_augmenting(g, m, p):
            raise ContractViolation(f"walk {p.nodes} is not augmenting")
    for p in paths:
        m = augment_along(m, p)
    return m


# -------------------------------------------------------------------- solve

@dataclass
class IterationRecord:
    phase: str
    index: int
    ell: int
    found: int
    size: int
    rounds: int
    skipped: bool = False


@dataclass
class SolveTrace:
    matching: Matching
    report: RoundReport
    s_hat: int
    initial_size: int
    size_after_a: int
    variant: str
    iterations: list = field(default_factory=list)


def _slot(report: RoundReport, sub: RoundReport, label: str, slot: int) -> int:
    used = sub.rounds_elapsed
    if used > slot:
        raise BudgetExceeded(f"[{label}] used {used} rounds, slot is {slot}")
    report.absorb(sub)
    idle(report, f"{label}/wait", slot - used)
    return used


def solve_traced(g: Graph, seed: int = 0, variant: str = "hybrid",
                 cfg: Optional[SimConfig] = None) -> SolveTrace:
    """Run the full schedule and return the matching with per-iteration records."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; choose from {VARIANTS}")
    cfg = cfg or SimConfig(seed=seed)
    report = RoundReport()
    try:
        m = maximal_matching(g, seed, report, cfg, phase="pre/maximal")
        s_hat = compute_s_hat(g, m, report, cfg, phase="pre/s_hat")
    except MatchingError as exc:
        raise _with_context(exc, "pre")
    initial = len(m)
    sched = Schedule(s_hat, variant)
    records = []

    empty_at: Optional[tuple] = None  # (matching, ℓ) known to yield nothing
    for i, ell in enumerate(sched.a_lengths(), start=1):
        label = f"A{i}"
        sub = RoundReport()
        if empty_at == (m, ell):
            # PART is deterministic: same matching and ℓ give the same empty result
            charge(sub, f"{label}/PART", 2 * ell)
            paths = []
        else:
            try:
                paths = wrapper_a(g, m, ell, sub, cfg, prefix=label)
            except MatchingError as exc:
                raise _with_context(exc, label)
            m = _apply(g, m, paths)
            empty_at = None if paths else (m, ell)
        used = _slot(report, sub, label, sched.slot_a(ell))
        records.append(IterationRecord("A", i, ell, len(paths), len(m), used))
    size_after_a = len(m)

    n_b = sched.b_iterations()
    done = False
    for i in range(1, n_b + 1):
        label = f"B{i}"
        if done:
            idle(report, f"{label}/skipped", sched.slot_b())
            records.append(IterationRecord("B", i, sched.b_length, 0, len(m), 0, True))
            continue
        sub = RoundReport()
        try:
            paths = wrapper_b(g, m, s_hat, sub, cfg, prefix=label)
        except MatchingError as exc:
            raise _with_context(exc, label)
        m = _apply(g, m, paths)
        used = _slot(report, sub, label, sched.slot_b())
        records.append(IterationRecord("B", i, sched.b_length, len(paths), len(m), used))
        # an empty answer from wrapper B certifies that no augmenting path is left
        done = not paths
    return SolveTrace(m, report, s_hat, initial, size_after_a, variant, records)


def solve(g: Graph, seed: int = 0, variant: str = "hybrid",
          cfg: Optional[SimConfig] = None) -> tuple[Matching, RoundReport]:
    trace = solve_traced(g, seed, variant, cfg)
    return trace.matching, trace.report
