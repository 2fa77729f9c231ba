"""Small reusable node programs for bounded flooding and BFS layering, plus an echo sum."""

from __future__ import annotations

from typing import Optional

from .congest import NodeProgram, RoundReport, SimConfig, run
from .graph import Graph

EXPLORE, ECHO, RESULT = 0, 1, 2


class FloodMin(NodeProgram):
    """Spread the minimum of the non-None inputs for a fixed number of rounds.

    Every node halts after ``rounds`` rounds with the smallest value it has
    seen (None if it saw nothing). A node forwards a value only when it
    improves on what it already knew.
    """

    def __init__(self, rounds: int):
        super().__init__()
        self.rounds = rounds
        self.best: Optional[int] = None
        self.fresh = False

    def setup(self, view):
        super().setup(view)
        self.best = view.input
        self.fresh = self.best is not None
        if self.rounds <= 0:
            self.halt(self.best)

    def send(self, rnd):
        out = {}
        if self.fresh:
            out = {e: self.best for e in self.view.ports}
            self.fresh = False
        return out

    def receive(self, rnd, inbox):
        for value in inbox.values():
            if value is not None and (self.best is None or value < self.best):
                self.best = value
                self.fresh = True
        if rnd >= self.rounds:
            self.halt(self.best)


def flood_min(g: Graph, values: dict, rounds: int, cfg: SimConfig,
              report: RoundReport, phase: str) -> dict:
    """Run :class:`FloodMin`; returns each node's result."""
    if rounds <= 0:
        return {v: values.get(v) for v in g.nodes}
    outputs, _ = run(g, lambda v: FloodMin(rounds), cfg, inputs=values,
                     report=report, phase=phase)
    return outputs


class BfsDepth(NodeProgram):
    """Layered BFS from the node whose input is True; output is the depth."""

    def __init__(self):
        super().__init__()
        self.depth = None
        self.announce = False

    def setup(self, view):
        super().setup(view)
        if view.input:
            self.depth = 0
            self.announce = True

    def send(self, rnd):
        if self.announce:
            self.announce = False
            self.halt(self.depth)
            return {e: self.depth + 1 for e in self.view.ports}
        return {}

    def receive(self, rnd, inbox):
        if self.depth is None and inbox:
            self.depth = min(inbox.values())
            self.announce = True
            if len(self.view.ports) == 1:
                # the only neighbor already knows its depth
                self.halt(self.depth)


class EchoSum(NodeProgram):
    """Extinction-echo election of the maximum id plus a sum over all inputs.

    Every node starts a wave rooted at itself. A node joins any wave whose
    root beats its current one and forgets the old wave. Only the wave of
    the maximum id completes; its root learns the sum of all inputs through
    the echoes and broadcasts the total down the wave's spanning tree.
    Output at every node: ``(root, total)``.
    """

    def __init__(self):
        super().__init__()
        self.wave = None
        self.parent = None
        self.pending: set = set()
        self.children: set = set()
        self.acc = 0
        self.outbox: dict = {}
        self.echoed = False
        self.stopping = False

    def setup(self, view):
        super().setup(view)
        self._join(view.id, None)

    def _join(self, root, parent):
        self.wave, self.parent = root, parent
        self.pending = {e for e in self.view.ports if e != parent}
        self.children = set()
        self.acc = int(self.view.input or 0)
        self.echoed = False
        self.outbox = {e: (EXPLORE, root) for e in self.pending}
        self._maybe_echo()

    def _maybe_echo(self):
        if self.pending or self.echoed:
            return
        self.echoed = True
        if self.parent is None:
            self.output = (self.wave, self.acc)
            for e in self.children:
                self.outbox[e] = (RESULT, self.acc)
            self.stopping = True
        else:
            self.outbox[self.parent] = (ECHO, self.wave, self.acc)

    def send(self, rnd):
        out, self.outbox = self.outbox, {}
        if self.stopping:
            self.halted = True
        return out

    def receive(self, rnd, inbox):
        best = max((msg[1] for msg in inbox.values() if msg[0] == EXPLORE),
                   default=None)
        if best is not None and best > self.wave:
            port = min(e for e, msg in inbox.items()
                       if msg[0] == EXPLORE and msg[1] == best)
            self._join(best, port)
        for e, msg in sorted(inbox.items()):
            kind = msg[0]
            if kind == RESULT:
                self.output = (self.wave, msg[1])
                self.outbox = {c: (RESULT, msg[1]) for c in self.children}
                self.stopping = True
                return
            if msg[1] != self.wave or e not in self.pending:
                continue
            if kind == ECHO:
                self.children.add(e)
                self.acc += msg[2]
            self.pending.discard(e)
        self._maybe_echo()


def echo_sum(g: Graph, values: dict, cfg: SimConfig, report: RoundReport,
             phase: str) -> int:
    outputs, _ = run(g, lambda v: EchoSum(), cfg, inputs=values,
                     report=report, phase=phase)
    totals = {out[1] for out in outputs.values()}
    assert len(totals) == 1, totals
    return totals.pop()
