"""Backward construction of a shortest augmenting path in O(ℓ²) rounds.

The walk is built from ``g`` towards ``f``. The current end of the partial
path is the *target*. In odd iterations the target asks its neighbors over
unmatched edges for their even alternating distance from ``f`` in the graph
without the partial path, and extends to one whose distance is exactly the
remaining length. In even iterations the target simply hands over to its
mate. Nodes on the partial path stop participating.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .congest import NodeProgram, RoundReport, SimConfig, run
from .errors import ContractViolation, NoPathError
from .graph import INF, Graph, Matching, Walk
from .mvpart import mv
from .protocols import flood_min

REQUEST, REPLY, CHOOSE = 0, 1, 2


def cap_round_bound(ell: int) -> int:
    return 8 * ell * ell + 16


@dataclass
class CapState:
    target: int
    path: list = field(default_factory=list)
    i: int = 0

    def walk(self, g: Graph) -> Walk:
        return Walk.from_nodes(g, reversed(self.path))


class _OddStep(NodeProgram):
    """Three rounds: the target asks, neighbors answer, the target chooses.

    Input per node: ``("target", want, matched_port)`` for the target,
    otherwise the node's even alternating distance in the residual graph
    (or None). The source reports 0 so that the final step can close the
    path at ``f``.
    """

    def setup(self, view):
        super().setup(view)
        self.inp = view.input
        self.is_target = isinstance(self.inp, tuple)
        self.asked: list = []
        self.replies: dict = {}
        self.choice: Optional[int] = None

    def send(self, rnd):
        if self.is_target:
            want, matched_port = self.inp[1], self.inp[2]
            if rnd == 1:
                return {e: (REQUEST,) for e in self.view.ports if e != matched_port}
            if rnd == 3:
                ok = sorted(self.view.ports[e] for e, d in self.replies.items()
                            if d == want)
                if ok:
                    self.choice = ok[0]
                    self.halt(self.choice)
                    return {self.view.port_to(self.choice): (CHOOSE, want)}
                self.halt(None)
            return {}
        if rnd == 2 and self.asked:
            d = self.inp
            return {e: (REPLY, d) for e in self.asked}
        return {}

    def receive(self, rnd, inbox):
        for e, msg in inbox.items():
            if msg[0] == REQUEST:
                self.asked.append(e)
            elif msg[0] == REPLY:
                self.replies[e] = msg[1]
            elif msg[0] == CHOOSE:
                self.output = "chosen"
        if rnd >= 3:
            self.halted = True


class _Handover(NodeProgram):
    """One round: the target passes the token to its mate."""

    def send(self, rnd):
        inp = self.view.input
        if inp == "mate":
            return {}
        self.halted = True
        if inp is not None:
            return {inp: (CHOOSE, 0)}
        return {}

    def receive(self, rnd, inbox):
        if inbox:
            self.output = "chosen"
        self.halted = True


def cap(g: Graph, m: Matching, f: int, gnode: int, ell: int, report: RoundReport,
        cfg: Optional[SimConfig] = None, phase: str = "CAP") -> Walk:
    """Shortest augmenting path from ``f`` to ``gnode`` inside the part ``g``."""
    cfg = cfg or SimConfig()
    m = m.restrict(g)
    free = m.unmatched(g)
    if sorted(free) != sorted({f, gnode}) or f == gnode:
        raise ContractViolation(f"part must have exactly the unmatched nodes {f}, {gnode}")
    start = report.rounds_elapsed

    dist = mv(g, m, ell, f, report, phase=f"{phase}/MV")
    ell_star = dist.r(gnode, 1)
    flood_min(g, {gnode: None if ell_star == INF else int(ell_star)}, ell, cfg,
              report, f"{phase}/flood")
    if ell_star == INF:
        raise NoPathError(f"no augmenting path of length <= {ell} from {f} to {gnode}")
    ell_star = int(ell_star)

    state = CapState(target=gnode, path=[gnode])
    for i in range(1, ell_star + 1):
        state.i = i
        want = ell_star - i
        target = state.target
        on_path = set(state.path)
        if i % 2 == 1:
            h = g.induced_subgraph(set(g.nodes) - on_path)
            values = {}
            if want > 0:
                local = mv(h, m, want, f, report, phase=f"{phase}/MV")
                for v in h.nodes:
                    d = local.r(v, 0)
                    values[v] = None if d == INF else int(d)
            values[f] = 0
            inputs = dict(values)
            matched_port = g.edge_between(target, m.mate(target)) if m.is_matched(target) else None
            inputs[target] = ("target", want, matched_port)
            live = g.induced_subgraph(set(h.nodes) | {target})
            outputs, _ = run(live, lambda v: _OddStep(), cfg, inputs=inputs,
                             report=report, phase=f"{phase}/step")
            nxt = outputs[target]
            if nxt is None:
                raise ContractViolation(
                    f"no neighbor of {target} reports even distance {want}")
        else:
            nxt = m.mate(target)
            if nxt is None:
                raise ContractViolation(f"target {target} is unmatched mid-path")
            port = g.edge_between(target, nxt)
            live = g.induced_subgraph((set(g.nodes) - on_path) | {target})
            run(live, lambda v: _Handover(), cfg, inputs={target: port, nxt: "mate"},
                report=report, phase=f"{phase}/step")
        state.path.append(nxt)
        state.target = nxt

    if state.target != f:
        raise ContractViolation(f"construction ended at {state.target}, not {f}")
    walk = state.walk(g)
    used = report.rounds_elapsed - start
    if used > cap_round_bound(ell):
        raise ContractViolation(f"CAP used {used} rounds, bound {cap_round_bound(ell)}")
    return walk
