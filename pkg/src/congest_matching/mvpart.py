"""Round-charged reference versions of the MV and PART subroutines.

Both are computed centrally and book ``2ℓ`` rounds to the report.

Exact alternating distances come from weighted-matching reductions rather
than path enumeration, so they scale past the enumeration oracle. For an
unmatched source ``f`` and a matched node ``x`` the shortest odd alternating
path from ``f`` to ``x`` is an augmenting ``f``-``x`` path in the graph ``K``
obtained by deleting ``mate(x)`` and every other unmatched node. Giving
matched edges weight 2 and the rest weight 1, a maximum-weight perfect
matching of ``K`` keeps as many old matching edges as possible, so it differs
from ``M`` by exactly one shortest such path.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

import networkx as nx

from .congest import RoundReport, charge
from .errors import ContractViolation
from .graph import INF, AltDist, Graph, Matching, Walk


def _two_colorable(g: Graph, keep) -> bool:
    color: dict = {}
    for s in keep:
        if s in color:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for u in g.neighbors(v):
                if u not in keep:
                    continue
                if u not in color:
                    color[u] = 1 - color[v]
                    queue.append(u)
                elif color[u] == color[v]:
                    return False
    return True


def _nx_graph(g: Graph, keep, weight) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(keep)
    for e, (u, v) in g.edges.items():
        if u in keep and v in keep:
            h.add_edge(u, v, weight=weight(e), eid=e)
    return h


class AltDistEngine:
    """Lazy exact ``r^θ(f, v)`` for one source, optionally truncated at ``limit``.

    Values above ``limit`` are reported as ``INF``. Results are cached.
    """

    def __init__(self, g: Graph, m: Matching, f: int, limit: Optional[int] = None):
        if not g.has_node(f):
            raise ContractViolation(f"source {f} is not a node")
        if m.is_matched(f):
            raise ContractViolation(f"source {f} is matched")
        self.g, self.m, self.f, self.limit = g, m, f, limit
        if limit is None:
            self.ball = set(g.nodes)
        else:
            self.ball = {v for v, d in g.bfs_distances(f).items() if d <= limit}
        self.core = {v for v in self.ball
                     if m.is_matched(v) and m.mate(v) in self.ball}
        self._cache: dict[tuple[int, int], float] = {(f, 0): INF, (f, 1): 0}
        self.bipartite = _two_colorable(g, self.ball)
        if self.bipartite:
            self._bfs_fill()

    def _bfs_fill(self) -> None:
        # Without odd cycles a node is only ever reached with one parity, so
        # the shortest alternating walk cannot repeat a node and is a path.
        g, m, f = self.g, self.m, self.f
        dist = {f: 0}
        queue = deque([f])
        while queue:
            v = queue.popleft()
            d = dist[v]
            if self.limit is not None and d >= self.limit:
                continue
            if d % 2 == 0:
                nxt = [g.other(e, v) for e in g.incident(v) if e not in m]
            else:
                nxt = [m.mate(v)]
            for u in nxt:
                if u in self.ball and u not in dist:
                    dist[u] = d + 1
                    queue.append(u)
        for v in g.nodes:
            if v == f:
                continue
            d = dist.get(v, INF)
            parity = 0 if d == INF else d % 2
            self._cache[(v, parity)] = d
            self._cache[(v, 1 - parity)] = INF

    def _cut(self, d: float) -> float:
        if self.limit is not None and d > self.limit:
            return INF
        return d

    def r(self, v: int, theta: int) -> float:
        key = (v, theta)
        if key not in self._cache:
            self._cache[key] = self._compute(v, theta)
        return self._cache[key]

    def _compute(self, v: int, theta: int) -> float:
        if v not in self.ball:
            return INF
        m = self.m
        if not m.is_matched(v):
            if theta == 0:
                return INF
            best = INF
            for u in self.g.neighbors(v):
                d = 1 if u == self.f else self.r(u, 0) + 1
                best = min(best, d)
            return self._cut(best)
        if theta == 0:
            return self._cut(self.r(m.mate(v), 1) + 1)
        return self._cut(self._odd_to_matched(v))

    def _odd_to_matched(self, x: int) -> float:
        keep = (self.core - {self.m.mate(x)}) | {self.f, x}
        h = _nx_graph(self.g, keep, lambda e: 2 if e in self.m else 1)
        best = nx.max_weight_matching(h, maxcardinality=True)
        if 2 * len(best) != len(keep):
            return INF
        kept = sum(1 for u, v in best if h[u][v]["eid"] in self.m)
        t = (len(keep) - 2) // 2 - kept
        return 2 * t + 1

    def altdist(self, nodes=None) -> AltDist:
        nodes = self.g.nodes if nodes is None else nodes
        return AltDist(self.f, {(v, t): self.r(v, t) for v in nodes for t in (0, 1)})


@dataclass
class MvOutput:
    """What every node learns from MV: its ``(θ, r)`` pairs with ``r <= ℓ``."""

    source: int
    limit: int
    engine: AltDistEngine = field(repr=False)

    def r(self, v: int, theta: int) -> float:
        return self.engine.r(v, theta)

    def at(self, v: int) -> set[tuple[int, int]]:
        return {(t, int(self.r(v, t))) for t in (0, 1) if self.r(v, t) < INF}

    def table(self) -> dict[int, set[tuple[int, int]]]:
        """Per-node pairs, omitting the source and nodes with nothing to report."""
        out = {}
        for v in self.engine.g.nodes:
            if v != self.source:
                pairs = self.at(v)
                if pairs:
                    out[v] = pairs
        return out

    def altdist(self) -> AltDist:
        return self.engine.altdist()


def mv(g: Graph, m: Matching, ell: int, f: int, report: RoundReport,
       phase: str = "MV") -> MvOutput:
    """Truncated alternating distances from ``f``; charges ``2ℓ`` rounds."""
    if ell < 0:
        raise ValueError("ℓ must be nonnegative")
    engine = AltDistEngine(g, m.restrict(g), f, limit=ell)
    charge(report, phase, 2 * ell)
    return MvOutput(f, ell, engine)


def alt_dist(g: Graph, m: Matching, f: int) -> AltDist:
    """Untruncated exact alternating distances from ``f`` (no round charge)."""
    return AltDistEngine(g, m.restrict(g), f).altdist()


# ----------------------------------------------------------- shortest paths

def _augment_gain(g: Graph, m: Matching, t: int):
    """Max-weight matching rewarding augmenting paths with at most ``t`` matched edges.

    Edge weights are ``2t+1`` plus 2 on matched edges. Relative to ``M``,
    flipping an augmenting path with ``s`` matched edges gains ``2t+1-2s``;
    every other alternating component loses weight. The returned gain is
    therefore the number of paths when ``t`` is the minimum feasible value.
    """
    base = 2 * t + 1
    h = _nx_graph(g, set(g.nodes), lambda e: base + 2 * (e in m))
    best = nx.max_weight_matching(h, maxcardinality=False)
    total = sum(h[u][v]["weight"] for u, v in best)
    gain = total - (base + 2) * len(m)
    return gain, {h[u][v]["eid"] for u, v in best}


def shortest_augmenting_paths(g: Graph, m: Matching, max_len: int) -> list[Walk]:
    """A maximum set of vertex-disjoint shortest augmenting paths of length ``<= max_len``."""
    m = m.restrict(g)
    if max_len < 1 or g.m == 0:
        return []
    hi = (max_len - 1) // 2
    gain, chosen = _augment_gain(g, m, hi)
    if gain <= 0:
        return []
    lo = 0
    while lo < hi:
        mid = (lo + hi) // 2
        gain_mid, chosen_mid = _augment_gain(g, m, mid)
        if gain_mid > 0:
            hi, gain, chosen = mid, gain_mid, chosen_mid
        else:
            lo = mid + 1
    diff = chosen.symmetric_difference(m.edge_ids)
    paths = _components_as_paths(g, m, diff)
    assert len(paths) == gain and all(p.length == 2 * hi + 1 for p in paths)
    return paths


def _components_as_paths(g: Graph, m: Matching, edge_set) -> list[Walk]:
    adj: dict[int, list[int]] = {}
    for e in edge_set:
        for x in g.endpoints(e):
            adj.setdefault(x, []).append(e)
    paths = []
    seen = set()
    for start in sorted(adj):
        if start in seen or len(adj[start]) != 1 or m.is_matched(start):
            continue
        nodes, edges = [start], []
        prev_edge = None
        cur = start
        while True:
            nxt = [e for e in adj[cur] if e != prev_edge]
            if not nxt:
                break
            prev_edge = nxt[0]
            edges.append(prev_edge)
            cur = g.other(prev_edge, cur)
            nodes.append(cur)
        seen.update(nodes)
        if nodes[0] > nodes[-1]:
            nodes, edges = nodes[::-1], edges[::-1]
        paths.append(Walk(tuple(nodes), tuple(edges)))
    return paths


# -------------------------------------------------------------------- PART

@dataclass(frozen=True)
class Part:
    nodes: frozenset
    f: int
    g: int
    path: Walk


@dataclass
class Partition:
    """Node-disjoint parts, each with exactly two unmatched nodes ``f < g``."""

    parts: list
    label: dict

    def __len__(self) -> int:
        return len(self.parts)

    def subgraph(self, g: Graph, i: int) -> Graph:
        return g.induced_subgraph(self.parts[i].nodes)

    def unassigned(self) -> list[int]:
        return sorted(v for v, lab in self.label.items() if lab is None)

    def check(self, g: Graph, m: Matching, ell: int) -> None:
        """Raise :class:`ContractViolation` if any part breaks its invariants."""
        seen: set = set()
        for i, part in enumerate(self.parts):
            if seen & part.nodes:
                raise ContractViolation(f"part {i} overlaps an earlier part")
            seen |= part.nodes
            sub = g.induced_subgraph(part.nodes)
            free = [v for v in part.nodes if not m.is_matched(v)]
            if sorted(free) != [part.f, part.g]:
                raise ContractViolation(f"part {i} has unmatched nodes {sorted(free)}")
            if any(m.mate(v) not in part.nodes for v in part.nodes if m.is_matched(v)):
                raise ContractViolation(f"part {i} splits a matched pair")
            p = part.path
            p.check_in(sub)
            if not (p.length <= ell and {p.start, p.end} == {part.f, part.g}
                    and p.is_path() and p.is_alternating(m)):
                raise ContractViolation(f"part {i} lacks a short augmenting path")
            if sub.diameter() > 8 * ell:
                raise ContractViolation(f"part {i} diameter exceeds 8ℓ")


def _grow(g: Graph, m: Matching, path: Walk, taken: set, radius: int) -> set:
    part = set(path.nodes)
    frontier = set(part)
    for _ in range(radius):
        layer = set()
        for v in sorted(frontier):
            for u in g.neighbors(v):
                if u in part or u in taken or u in layer or not m.is_matched(u):
                    continue
                w = m.mate(u)
                if w in taken or w in part:
                    continue
                layer |= {u, w}
        if not layer:
            break
        part |= layer
        frontier = layer
    return part


def part(g: Graph, m: Matching, ell: int, report: RoundReport,
         phase: str = "PART", radius: Optional[int] = None) -> Partition:
    """Peel shortest augmenting paths of length ``<= ℓ`` into disjoint parts."""
    if ell < 1:
        raise ValueError("ℓ must be at least 1")
    m = m.restrict(g)
    radius = ell if radius is None else radius
    taken: set = set()
    parts: list[Part] = []
    while True:
        rest = g.induced_subgraph(set(g.nodes) - taken)
        batch = shortest_augmenting_paths(rest, m, ell)
        if not batch:
            break
        for p in batch:
            taken |= set(p.nodes)
        for p in batch:
            r = radius
            while True:
                nodes = _grow(g, m, p, taken - set(p.nodes), r)
                if r == 0 or g.induced_subgraph(nodes).diameter() <= 8 * ell:
                    break
                r //= 2
            taken |= nodes
            a, b = sorted((p.start, p.end))
            parts.append(Part(frozenset(nodes), a, b, p))
    label = {v: None for v in g.nodes}
    for i, pt in enumerate(parts):
        for v in pt.nodes:
            label[v] = i
    charge(report, phase, 2 * ell)
    return Partition(parts, label)
