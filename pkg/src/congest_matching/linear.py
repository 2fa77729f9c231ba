"""Augmenting path in O(n) rounds through the sparse certificate.

Pipeline: full-range MV, local tree construction, LCA preprocessing, level
exchange, certificate, upcast of the certificate's edges to ``f``, a
centralized blossom search at ``f`` over those edges only, and a downcast of
the chosen edges.
"""

from __future__ import annotations

from collections import deque
from typing import Optional

from .abt import build_abt, lca_preprocess
from .certificate import END, build_certificate, exchange_levels
from .congest import NodeProgram, RoundReport, SimConfig, run
from .errors import CertificateError, ContractViolation, NoPathError
from .graph import Graph, Matching, Walk
from .mvpart import mv
from .oracle import augmenting_path_from


def linear_round_bound(n: int) -> int:
    return 16 * n + 16


class _Upcast(NodeProgram):
    """Pipelined convergecast of edge records towards the root."""

    def setup(self, view):
        super().setup(view)
        inp = view.input
        self.parent = inp["parent"]
        self.waiting = set(inp["children"])
        self.queue = deque(inp["records"])
        self.collected: list = list(inp["records"]) if self.parent is None else []

    def send(self, rnd):
        if self.parent is None:
            return {}
        if self.queue:
            return {self.parent: self.queue.popleft()}
        if not self.waiting:
            self.halt()
            return {self.parent: END}
        return {}

    def receive(self, rnd, inbox):
        for c, msg in sorted(inbox.items()):
            if msg == END:
                self.waiting.discard(c)
            elif self.parent is None:
                self.collected.append(msg)
            else:
                self.queue.append(msg)
        if self.parent is None and not self.waiting:
            self.halt(self.collected)


class _Downcast(NodeProgram):
    """The root streams the chosen edges down the tree; nodes keep incident ones."""

    def setup(self, view):
        super().setup(view)
        inp = view.input
        self.children = inp["children"]
        self.queue = deque(inp.get("items", []))
        self.root = inp["parent"] is None
        if self.root:
            self.queue.append(END)
        self.marked: list = []
        self.closed = self.root

    def send(self, rnd):
        if not self.queue:
            return {}
        item = self.queue.popleft()
        if item == END:
            self.halt(self.marked)
        return {c: item for c in self.children}

    def receive(self, rnd, inbox):
        for msg in inbox.values():
            if msg != END and self.view.id in msg:
                self.marked.append(msg)
            if self.children:
                self.queue.append(msg)
            elif msg == END:
                self.halt(self.marked)


def _solve_at_root(f: int, records: list) -> Optional[list]:
    """Blossom search on the edges the root received, restricted to declared endpoints."""
    declared = {r[0] for r in records if len(r) == 1}
    pairs, matched = [], []
    for r in records:
        if len(r) == 3:
            u, w, in_m = r
            pairs.append((u, w))
            if in_m:
                matched.append((u, w))
    covered = {x for p in matched for x in p}
    nodes = {x for p in pairs for x in p} | {f}
    keep = {x for x in nodes if x in covered or x == f or x in declared}
    edges = {}
    for i, (u, w) in enumerate(sorted(set(pairs))):
        if u in keep and w in keep:
            edges[i] = (u, w)
    h = Graph(keep, edges, derived=True)
    mh = Matching.from_pairs(h, [p for p in matched if p[0] in keep and p[1] in keep])
    walk = augmenting_path_from(h, mh, f)
    if walk is None:
        return None
    if walk.end not in declared:
        raise CertificateError(f"path from {f} ends at {walk.end}, which is not unmatched")
    return list(walk.nodes)


def linear_augpath(g: Graph, m: Matching, f: int, gnode: int, report: RoundReport,
                   cfg: Optional[SimConfig] = None, phase: str = "LIN") -> Walk:
    """An augmenting path from ``f`` to ``gnode`` using O(n) rounds."""
    cfg = cfg or SimConfig()
    m = m.restrict(g)
    if sorted(m.unmatched(g)) != sorted({f, gnode}) or f == gnode:
        raise ContractViolation(f"part must have exactly the unmatched nodes {f}, {gnode}")
    start = report.rounds_elapsed

    dist = mv(g, m, g.n, f, report, phase=f"{phase}/MV").altdist()
    if not dist.reachable(gnode):
        raise NoPathError(f"{gnode} is not reachable from {f}")
    # unreachable nodes learn so from their own MV output and sit out
    h = g.induced_subgraph([v for v in g.nodes if dist.reachable(v)])
    mh = m.restrict(h)
    t = build_abt(h, mh, f, dist)
    lca = lca_preprocess(t, h, report, cfg, phase=f"{phase}/LCA")
    levels = exchange_levels(h, mh, dist, report, cfg, f"{phase}/levels")
    cert = build_certificate(h, mh, t, lca, levels, report, cfg, phase=f"{phase}/CERT")

    kids = t.children()
    inputs = {}
    for v in h.nodes:
        records = []
        if t.parent[v] is not None:
            p = t.parent[v]
            records.append((min(v, p), max(v, p), int(t.ep(v) in mh)))
        e = cert.contributor.get(v)
        if e is not None:
            u, w = h.endpoints(e)
            records.append((u, w, int(e in mh)))
        if not mh.is_matched(v) and v != f:
            records.append((v,))
        inputs[v] = {"parent": t.ep(v), "children": [t.ep(c) for c in kids[v]],
                     "records": records}
    outs, _ = run(h, lambda v: _Upcast(), cfg, inputs=inputs, report=report,
                  phase=f"{phase}/upcast")
    path = _solve_at_root(f, outs[f])
    if path is None:
        raise CertificateError(f"certificate lost every augmenting path from {f}")
    if path[-1] != gnode:
        raise CertificateError(f"path from {f} ends at {path[-1]}, expected {gnode}")

    chosen = [(min(a, b), max(a, b)) for a, b in zip(path, path[1:])]
    down = {v: {"parent": t.ep(v), "children": [t.ep(c) for c in kids[v]]}
            for v in h.nodes}
    down[f]["items"] = chosen
    outs, _ = run(h, lambda v: _Downcast(), cfg, inputs=down, report=report,
                  phase=f"{phase}/downcast")
    marked = {p for v, got in outs.items() for p in (got or [])}
    marked |= {p for p in chosen if f in p}
    if marked != set(chosen):
        raise ContractViolation("downcast did not label exactly the chosen edges")

    walk = Walk.from_nodes(g, path)
    used = report.rounds_elapsed - start
    if used > linear_round_bound(g.n):
        raise ContractViolation(f"linear construction used {used} rounds")
    return walk
