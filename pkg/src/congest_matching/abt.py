"""Alternating base tree and the depth/LCA preprocessing on top of it.

Each node picks its parent locally from its own and its neighbors'
alternating distances, so building the tree costs no communication. The
LCA preprocessing then runs three simulated stages:

1. children announce themselves to their parents and depths flow down,
2. every node learns its root path by pipelined broadcast of ``(id, depth)``
   pairs down the tree,
3. the endpoints of every non-tree edge exchange root paths one id per
   round and read off the depth of the last common entry.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .congest import NodeProgram, RoundReport, SimConfig, run
from .errors import ContractViolation
from .graph import INF, AltDist, Graph, Matching


@dataclass
class AltBaseTree:
    root: int
    parent: dict
    parent_edge: dict
    depth: dict

    @property
    def height(self) -> int:
        return max(self.depth.values())

    def ep(self, v: int) -> Optional[int]:
        return self.parent_edge.get(v)

    @property
    def tree_edges(self) -> frozenset:
        return frozenset(e for e in self.parent_edge.values() if e is not None)

    def children(self) -> dict:
        out = {v: [] for v in self.parent}
        for v, p in self.parent.items():
            if p is not None:
                out[p].append(v)
        return out

    def subtree(self, v: int) -> set:
        kids = self.children()
        out, stack = set(), [v]
        while stack:
            x = stack.pop()
            out.add(x)
            stack.extend(kids[x])
        return out

    def root_path(self, v: int) -> tuple:
        seq = []
        while v is not None:
            seq.append(v)
            v = self.parent[v]
        return tuple(reversed(seq))

    def check(self, g: Graph, m: Matching, dist: AltDist) -> None:
        """Raise :class:`ContractViolation` unless every tree invariant holds."""
        if set(self.parent) != set(g.nodes) or self.parent[self.root] is not None:
            raise ContractViolation("tree does not span the graph from its root")
        if len(self.tree_edges) != g.n - 1:
            raise ContractViolation("tree does not have n-1 edges")
        for v, p in self.parent.items():
            if p is None:
                continue
            e = self.parent_edge[v]
            if set(g.endpoints(e)) != {v, p}:
                raise ContractViolation(f"parent edge of {v} does not reach {p}")
            gam = dist.gamma(v)
            if (e in m) != (gam == 0):
                raise ContractViolation(f"parent edge of {v} has the wrong type")
            if dist.r(v, gam) != _parent_dist(dist, p, 1 - gam) + 1:
                raise ContractViolation(f"parent of {v} is not on a shortest path")


def _parent_dist(dist: AltDist, u: int, theta: int) -> float:
    # the length-zero path makes the root a 0-alternating predecessor
    if u == dist.source and theta == 0:
        return 0
    return dist.r(u, theta)


def build_abt(g: Graph, m: Matching, f: int, dist: AltDist) -> AltBaseTree:
    """Each node keeps the lowest-id neighbor that ends one of its shortest paths."""
    parent, parent_edge = {f: None}, {f: None}
    for v in g.nodes:
        if v == f:
            continue
        gam = dist.gamma(v)
        rv = dist.r(v, gam)
        if rv == INF:
            raise ContractViolation(f"node {v} is unreachable from {f}")
        best = None
        for e in g.incident(v):
            u = g.other(e, v)
            if (e in m) != (gam == 0):
                continue
            if rv == _parent_dist(dist, u, 1 - gam) + 1 and (best is None or u < best[0]):
                best = (u, e)
        if best is None:
            raise ContractViolation(f"node {v} has no eligible parent edge")
        parent[v], parent_edge[v] = best
    depth = {}
    for v in g.nodes:
        chain = []
        x = v
        while x not in depth:
            chain.append(x)
            x = parent[x]
            if x is None:
                break
            if len(chain) > g.n:
                raise ContractViolation("parent pointers contain a cycle")
        base = -1 if x is None else depth[x]
        for y in reversed(chain):
            base += 1
            depth[y] = base
    return AltBaseTree(f, parent, parent_edge, depth)


@dataclass
class LcaTable:
    lca: dict
    root_path: dict
    depth: dict

    def __len__(self) -> int:
        return len(self.lca)


def lca_centralized(t: AltBaseTree, g: Graph) -> dict:
    out = {}
    for e in g.edge_ids():
        if e in t.tree_edges:
            continue
        u, w = g.endpoints(e)
        pu, pw = t.root_path(u), t.root_path(w)
        k = 0
        while k < min(len(pu), len(pw)) and pu[k] == pw[k]:
            k += 1
        out[e] = k - 1
    return out


NOTIFY, DEPTH = 0, 1


class _DepthProgram(NodeProgram):
    """Round 1: children notify parents. Afterwards depths flow down."""

    def setup(self, view):
        super().setup(view)
        self.parent_port = view.input
        self.children: list = []
        self.depth = 0 if self.parent_port is None else None
        self.announced = False

    def send(self, rnd):
        if rnd == 1:
            if self.parent_port is None:
                return {}
            return {self.parent_port: (NOTIFY,)}
        if self.depth is not None and not self.announced:
            self.announced = True
            self.halt((self.depth, tuple(sorted(self.children))))
            return {c: (DEPTH, self.depth + 1) for c in self.children}
        return {}

    def receive(self, rnd, inbox):
        for e, msg in inbox.items():
            if msg[0] == NOTIFY:
                self.children.append(e)
            else:
                self.depth = msg[1]
        if self.depth is not None and not self.children:
            self.halt((self.depth, ()))


class _AncestorProgram(NodeProgram):
    """Pipelined broadcast of ``(id, depth)`` pairs to every descendant."""

    def setup(self, view):
        super().setup(view)
        self.depth, self.children = view.input
        self.known = {self.depth: view.id}
        self.queue = deque([(view.id, self.depth)] if self.children else [])
        self._check()

    def _check(self):
        if len(self.known) == self.depth + 1 and not self.queue:
            self.halt(tuple(self.known[k] for k in range(self.depth + 1)))

    def send(self, rnd):
        out = {}
        if self.queue:
            item = self.queue.popleft()
            out = {c: item for c in self.children}
        self._check()
        return out

    def receive(self, rnd, inbox):
        for msg in inbox.values():
            self.known[msg[1]] = msg[0]
            if self.children:
                self.queue.append(msg)
        self._check()


class _ExchangeProgram(NodeProgram):
    """Send the root path over every non-tree edge and compare what comes back.

    Entry ``k`` travels in round ``k + 1`` together with a flag marking the
    sender's last entry. The lca depth is the index of the last agreeing
    entry.
    """

    def setup(self, view):
        super().setup(view)
        self.path, ports = view.input
        self.ports = list(ports)
        self.result: dict = {}
        self._check(0)

    def _check(self, rnd):
        if not self.ports or (rnd >= len(self.path) and len(self.result) == len(self.ports)):
            self.halt(dict(self.result))

    def send(self, rnd):
        k = rnd - 1
        if k < len(self.path):
            last = int(k == len(self.path) - 1)
            return {e: (self.path[k], last) for e in self.ports}
        return {}

    def receive(self, rnd, inbox):
        k = rnd - 1
        for e, (node, last) in inbox.items():
            if e in self.result:
                continue
            if k >= len(self.path) or self.path[k] != node:
                self.result[e] = k - 1
            elif last:
                self.result[e] = k
        self._check(rnd)


def lca_preprocess(t: AltBaseTree, g: Graph, report: RoundReport,
                   cfg: Optional[SimConfig] = None, phase: str = "LCA") -> LcaTable:
    """Simulate depth, root-path and non-tree-edge exchange stages."""
    cfg = cfg or SimConfig()
    inputs = {v: t.ep(v) for v in g.nodes}
    out1, _ = run(g, lambda v: _DepthProgram(), cfg, inputs=inputs,
                  report=report, phase=f"{phase}/depth")
    out2, _ = run(g, lambda v: _AncestorProgram(), cfg, inputs=out1,
                  report=report, phase=f"{phase}/ancestors")
    tree = t.tree_edges
    inputs3 = {v: (out2[v], [e for e in g.incident(v) if e not in tree])
               for v in g.nodes}
    out3, _ = run(g, lambda v: _ExchangeProgram(), cfg, inputs=inputs3,
                  report=report, phase=f"{phase}/exchange")
    lca = {}
    for v, table in out3.items():
        for e, k in table.items():
            if lca.setdefault(e, k) != k:
                raise ContractViolation(f"endpoints of edge {e} disagree on its lca")
    depth = {v: out1[v][0] for v in g.nodes}
    return LcaTable(lca, dict(out2), depth)
