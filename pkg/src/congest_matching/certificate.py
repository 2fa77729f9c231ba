"""Level edge sets and the sparse certificate ``H = T + F^c``.

An unmatched edge ``(u, v)`` has level ``max(r⁰(f,u), r⁰(f,v))`` and a
matched edge has level ``max(r¹(f,u), r¹(f,v))``; edges with an infinite
value have no level. For every tree node ``v`` the certificate keeps one
non-tree edge leaving the subtree ``T_v``: the minimum-lca edge of the first
level at which such an edge exists. That is exactly the level at which the
tree edge above ``v`` stops being a bridge.

On the wire an edge is named by its endpoint pair ``(u, w)`` with ``u < w``,
and ties in lca are broken by that pair. A record is
``(u, w, lca, in_matching)`` which fits four id-sized fields.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import networkx as nx

from .abt import AltBaseTree, LcaTable
from .congest import NodeProgram, RoundReport, SimConfig, run
from .errors import ContractViolation
from .graph import INF, AltDist, Graph, Matching

EMPTY = (None,)
END = (None, None)


@dataclass
class LevelSets:
    level: dict
    g: Graph = field(repr=False)
    m: Matching = field(repr=False)

    def F(self, k: int) -> set:
        if k <= 0:
            return set()
        return {e for e, lv in self.level.items() if lv == k}

    def F_upto(self, k: int) -> set:
        return {e for e, lv in self.level.items() if 1 <= lv <= k}

    @property
    def max_level(self) -> int:
        return max(self.level.values(), default=0)


def edge_level(m: Matching, e: int, u: int, v: int, dist_u, dist_v) -> float:
    theta = 1 if e in m else 0
    return max(dist_u[theta], dist_v[theta])


def compute_levels(g: Graph, m: Matching, dist: AltDist) -> LevelSets:
    level = {}
    for e, (u, v) in g.edges.items():
        k = edge_level(m, e, u, v, (dist.r(u, 0), dist.r(u, 1)),
                       (dist.r(v, 0), dist.r(v, 1)))
        if k < INF:
            level[e] = int(k)
    return LevelSets(level, g, m)


@dataclass
class SparseCertificate:
    tree_edges: frozenset
    fc: dict
    contributor: dict

    def edges(self) -> set:
        return set(self.tree_edges) | set(self.fc)

    def graph(self, g: Graph) -> Graph:
        return g.spanning_subgraph(self.edges())

    def dump(self, g: Graph) -> str:
        lines = [f"{u} {v}" for u, v in sorted(g.endpoints(e) for e in self.tree_edges)]
        lines += [f"{k} {g.endpoints(e)[0]} {g.endpoints(e)[1]}"
                  for e, k in sorted(self.fc.items(), key=lambda x: (x[1], x[0]))]
        return "\n".join(lines) + "\n"


# ------------------------------------------------------------ level exchange

class _LevelExchange(NodeProgram):
    """One round: neighbors swap ``(r⁰, r¹)`` and derive incident edge levels."""

    def setup(self, view):
        super().setup(view)
        self.mine, self.matched_port = view.input

    def send(self, rnd):
        msg = tuple(None if d == INF else int(d) for d in self.mine)
        return {e: msg for e in self.view.ports}

    def receive(self, rnd, inbox):
        out = {}
        for e, theirs in inbox.items():
            theirs = tuple(INF if d is None else d for d in theirs)
            theta = 1 if e == self.matched_port else 0
            k = max(self.mine[theta], theirs[theta])
            if k < INF:
                out[e] = int(k)
        self.halt(out)


def exchange_levels(g: Graph, m: Matching, dist: AltDist, report: RoundReport,
                    cfg: SimConfig, phase: str) -> LevelSets:
    inputs = {}
    for v in g.nodes:
        mate = m.mate(v)
        port = g.edge_between(v, mate) if mate is not None else None
        inputs[v] = ((dist.r(v, 0), dist.r(v, 1)), port)
    outs, _ = run(g, lambda v: _LevelExchange(), cfg, inputs=inputs,
                  report=report, phase=phase)
    level = {}
    for v, table in outs.items():
        for e, k in table.items():
            if level.setdefault(e, k) != k:
                raise ContractViolation(f"endpoints disagree on the level of edge {e}")
    return LevelSets(level, g, m)


# ------------------------------------------------------------------- ConstF

class _ConstF(NodeProgram):
    """Leaf-to-root minimum aggregation over a stream of levels.

    Position ``p`` of every stream refers to level ``ks[p]``. A node emits
    position ``p`` once every child has delivered position ``p`` or ended its
    stream, so different levels flow up the tree back to back. A record is
    forwarded only when it can still leave the parent's subtree.
    """

    def setup(self, view):
        super().setup(view)
        inp = view.input
        self.depth = inp["depth"]
        self.parent = inp["parent"]
        self.children = list(inp["children"])
        self.own = inp["own"]
        self.ks = inp["ks"]
        self.got = {c: [] for c in self.children}
        self.done = {c: False for c in self.children}
        self.p = 0
        self.result: dict = {}
        if self.parent is None:
            self.halt({})

    def _finished(self) -> bool:
        if not all(self.done.values()):
            return False
        last_own = max((i for i, k in enumerate(self.ks) if k in self.own), default=-1)
        last_child = max((len(v) for v in self.got.values()), default=0) - 1
        return self.p > max(last_own, last_child)

    def send(self, rnd):
        if self._finished():
            self.halt(self.result)
            return {self.parent: END}
        if not all(self.done[c] or len(self.got[c]) > self.p for c in self.children):
            return {}
        k = self.ks[self.p]
        cands = [self.own[k]] if k in self.own else []
        for c in self.children:
            if len(self.got[c]) > self.p and self.got[c][self.p] is not None:
                cands.append(self.got[c][self.p])
        self.p += 1
        best = min(cands, key=lambda r: (r[2], r[0], r[1])) if cands else None
        if best is not None and best[2] < self.depth:
            self.result[k] = best
        if best is not None and best[2] < self.depth - 1:
            return {self.parent: best}
        return {self.parent: EMPTY}

    def receive(self, rnd, inbox):
        for c, msg in inbox.items():
            if msg == END:
                self.done[c] = True
            elif msg == EMPTY:
                self.got[c].append(None)
            else:
                self.got[c].append(msg)


def _own_candidates(g, m, t, lca, levels, ks):
    wanted = set(ks)
    own: dict = {v: {} for v in g.nodes}
    for e, k in levels.level.items():
        if k not in wanted or e in t.tree_edges:
            continue
        u, w = g.endpoints(e)
        rec = (min(u, w), max(u, w), lca.lca[e], int(e in m))
        for x in (u, w):
            cur = own[x].get(k)
            if cur is None or (rec[2], rec[0], rec[1]) < (cur[2], cur[0], cur[1]):
                own[x][k] = rec
    return own


def _run_constf(g, m, t, lca, levels, ks, report, cfg, phase):
    kids = t.children()
    own = _own_candidates(g, m, t, lca, levels, ks)
    inputs = {}
    for v in g.nodes:
        inputs[v] = {
            "depth": lca.depth[v],
            "parent": t.ep(v),
            "children": [t.ep(c) for c in sorted(kids[v])],
            "own": own[v],
            "ks": ks,
        }
    outs, _ = run(g, lambda v: _ConstF(), cfg, inputs=inputs, report=report, phase=phase)
    return outs


def constf(g: Graph, t: AltBaseTree, lca: LcaTable, levels: LevelSets, k: int,
           report: RoundReport, cfg: Optional[SimConfig] = None,
           phase: str = "CONSTF") -> dict:
    """Per node: the minimum outgoing level-``k`` non-tree edge of ``T_v`` or None."""
    cfg = cfg or SimConfig()
    outs = _run_constf(g, levels.m, t, lca, levels, [k], report, cfg, phase)
    result = {}
    for v, table in outs.items():
        rec = table.get(k)
        result[v] = None if rec is None else g.edge_between(rec[0], rec[1])
    return result


def constf_centralized(g: Graph, t: AltBaseTree, lca_map: dict, levels: LevelSets,
                       k: int) -> dict:
    fk = levels.F(k) - t.tree_edges
    out = {}
    for v in g.nodes:
        sub = t.subtree(v)
        best = None
        for e in fk:
            u, w = g.endpoints(e)
            if (u in sub) != (w in sub):
                key = (lca_map[e], u, w)
                if best is None or key < best[0]:
                    best = (key, e)
        out[v] = None if best is None else best[1]
    return out


def bridges_upto(g: Graph, t: AltBaseTree, levels: LevelSets, k: int) -> set:
    """Tree edges that are bridges of ``T + F_{<=k}`` (centralized)."""
    h = nx.Graph()
    h.add_nodes_from(g.nodes)
    ids = {}
    for e in set(t.tree_edges) | levels.F_upto(k):
        u, w = g.endpoints(e)
        h.add_edge(u, w)
        ids[(min(u, w), max(u, w))] = e
    out = set()
    for u, w in nx.bridges(h):
        e = ids[(min(u, w), max(u, w))]
        if e in t.tree_edges:
            out.add(e)
    return out


def build_certificate(g: Graph, m: Matching, t: AltBaseTree, lca: LcaTable,
                      levels: LevelSets, report: RoundReport,
                      cfg: Optional[SimConfig] = None,
                      phase: str = "CERT") -> SparseCertificate:
    """Run ConstF for every level at once and keep one edge per tree node."""
    cfg = cfg or SimConfig()
    ks = list(range(1, max(g.id_space, 2)))
    outs = _run_constf(g, m, t, lca, levels, ks, report, cfg, phase)
    fc, contributor = {}, {}
    for v, table in outs.items():
        if not table:
            continue
        k = min(table)
        u, w = table[k][0], table[k][1]
        e = g.edge_between(u, w)
        fc[e] = k
        contributor[v] = e
    if len(fc) > g.n - 1:
        raise ContractViolation(f"certificate has {len(fc)} extra edges, more than n-1")
    return SparseCertificate(t.tree_edges, fc, contributor)
