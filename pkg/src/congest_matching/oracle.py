"""Centralized ground truth.

* :func:`max_matching` is Edmonds' blossom algorithm (BFS search with
  blossom contraction, O(n^3)).
* :func:`alt_dist_exact` enumerates every simple alternating path from the
  source. It never looks at walks, so blossoms cannot fool it, but it is
  exponential and refuses graphs above ``OracleConfig.enum_node_limit``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Optional

from .errors import ContractViolation, OracleRefusal
from .graph import INF, AltDist, Graph, Matching, Walk, augment_along


@dataclass(frozen=True)
class OracleConfig:
    enum_node_limit: int = 18

    def __post_init__(self):
        if self.enum_node_limit < 4:
            raise ValueError("enum_node_limit must be at least 4")


DEFAULT_ORACLE = OracleConfig()


# ------------------------------------------------------------------ blossom

class _Blossom:
    """Index-based state for Edmonds' search on one graph."""

    def __init__(self, g: Graph, m: Matching):
        self.ids = list(g.nodes)
        self.index = {v: i for i, v in enumerate(self.ids)}
        self.adj = [sorted(self.index[u] for u in g.neighbors(v)) for v in self.ids]
        self.match = [-1] * len(self.ids)
        for u, v in m.pairs():
            if u in self.index and v in self.index:
                self.match[self.index[u]] = self.index[v]
                self.match[self.index[v]] = self.index[u]

    def _lca(self, a, b, base, parent):
        seen = [False] * len(self.ids)
        while True:
            a = base[a]
            seen[a] = True
            if self.match[a] == -1:
                break
            a = parent[self.match[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[self.match[b]]

    def _mark(self, v, b, child, base, parent, in_blossom):
        while base[v] != b:
            in_blossom[base[v]] = in_blossom[base[self.match[v]]] = True
            parent[v] = child
            child = self.match[v]
            v = parent[self.match[v]]

    def find_path(self, root: int) -> Optional[list[int]]:
        """Augmenting path from ``root`` as a list of indices, or None."""
        n = len(self.ids)
        used = [False] * n
        parent = [-1] * n
        base = list(range(n))
        used[root] = True
        queue = deque([root])
        match = self.match
        while queue:
            v = queue.popleft()
            for to in self.adj[v]:
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] != -1 and parent[match[to]] != -1):
                    cur = self._lca(v, to, base, parent)
                    in_blossom = [False] * n
                    self._mark(v, cur, to, base, parent, in_blossom)
                    self._mark(to, cur, v, base, parent, in_blossom)
                    for i in range(n):
                        if in_blossom[base[i]]:
                            base[i] = cur
                            if not used[i]:
                                used[i] = True
                                queue.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    if match[to] == -1:
                        return self._unwind(to, parent)
                    used[match[to]] = True
                    queue.append(match[to])
        return None

    def _unwind(self, end, parent):
        path = [end]
        v = end
        while True:
            pv = parent[v]
            path.append(pv)
            nxt = self.match[pv]
            if nxt == -1:
                break
            path.append(nxt)
            v = nxt
        return path

    def augment(self, path: list[int]) -> None:
        for i in range(0, len(path) - 1, 2):
            a, b = path[i], path[i + 1]
            self.match[a], self.match[b] = b, a


def augmenting_path_from(g: Graph, m: Matching, root: int) -> Optional[Walk]:
    """An augmenting path starting at the unmatched node ``root`` (or None)."""
    if m.is_matched(root):
        raise ContractViolation(f"root {root} is matched")
    state = _Blossom(g, m)
    path = state.find_path(state.index[root])
    if path is None:
        return None
    nodes = [state.ids[i] for i in reversed(path)]
    return Walk.from_nodes(g, nodes)


def max_matching(g: Graph) -> Matching:
    """Maximum-cardinality matching; deterministic for a fixed graph."""
    state = _Blossom(g, Matching())
    for i in range(len(state.ids)):
        if state.match[i] == -1:
            path = state.find_path(i)
            if path is not None:
                state.augment(path)
    pairs = {(state.ids[i], state.ids[j]) for i, j in enumerate(state.match)
             if j != -1 and i < j}
    return Matching.from_pairs(g, pairs)


def improve_to_maximum(g: Graph, m: Matching) -> Matching:
    """Grow ``m`` by augmenting paths until it is maximum."""
    changed = True
    while changed:
        changed = False
        for v in m.unmatched(g):
            if m.is_matched(v):
                continue
            p = augmenting_path_from(g, m, v)
            if p is not None:
                m = augment_along(m, p)
                changed = True
    return m


def brute_force_matching_size(g: Graph) -> int:
    """Exhaustive search over edge subsets; only sensible for tiny graphs."""
    edges = [g.endpoints(e) for e in g.edge_ids()]
    best = 0

    def rec(i, used, size):
        nonlocal best
        if size + (len(edges) - i) <= best:
            return
        if i == len(edges):
            best = max(best, size)
            return
        u, v = edges[i]
        if u not in used and v not in used:
            rec(i + 1, used | {u, v}, size + 1)
        rec(i + 1, used, size)

    rec(0, frozenset(), 0)
    return best


# ------------------------------------------------------------- enumeration

def _check_limit(g: Graph, config: OracleConfig) -> None:
    if g.n > config.enum_node_limit:
        raise OracleRefusal(
            f"{g.n} nodes exceeds the enumeration limit {config.enum_node_limit}")


def alt_dist_exact(g: Graph, m: Matching, f: int,
                   config: OracleConfig = DEFAULT_ORACLE) -> AltDist:
    """Exact ``r^θ(f, v)`` for all ``v`` by enumerating simple alternating paths."""
    _check_limit(g, config)
    if m.is_matched(f):
        raise ContractViolation(f"source {f} is matched")
    index = {v: i for i, v in enumerate(g.nodes)}
    # unmatched edges per node, and mate
    free_nbrs = {v: [g.other(e, v) for e in g.incident(v) if e not in m]
                 for v in g.nodes}
    mate = {v: m.mate(v) for v in g.nodes}
    best: dict[tuple[int, int], int] = {}
    witness: dict[tuple[int, int], tuple[int, ...]] = {}
    path = [f]

    def visit(v, mask, last_matched):
        length = len(path) - 1
        key = (v, length & 1)
        if length < best.get(key, INF):
            best[key] = length
            witness[key] = tuple(path)
        if last_matched:
            for u in free_nbrs[v]:
                bit = 1 << index[u]
                if not mask & bit:
                    path.append(u)
                    visit(u, mask | bit, False)
                    path.pop()
        else:
            u = mate[v]
            if u is not None and u in index:
                bit = 1 << index[u]
                if not mask & bit:
                    path.append(u)
                    visit(u, mask | bit, True)
                    path.pop()

    visit(f, 1 << index[f], True)
    dist = {(v, t): INF for v in g.nodes for t in (0, 1)}
    dist.update(best)
    dist[(f, 0)] = INF
    dist[(f, 1)] = 0
    witness.pop((f, 0), None)
    witness[(f, 1)] = (f,)
    return AltDist(f, dist, witness)


def preserves_reachability(h: Graph, g: Graph, m: Matching, f: int,
                           config: OracleConfig = DEFAULT_ORACLE) -> bool:
    """True iff every θ-reachable node of ``g`` stays θ-reachable in ``h``."""
    _check_limit(g, config)
    dg = alt_dist_exact(g, m.restrict(g), f, config)
    dh = alt_dist_exact(h, m.restrict(h), f, config)
    return all(dh.r(v, t) < INF for (v, t), d in dg.dist.items() if d < INF)


def shortest_augmenting_length(g: Graph, m: Matching,
                               config: OracleConfig = DEFAULT_ORACLE) -> float:
    """Length of the shortest augmenting path, by enumeration (INF if none)."""
    free = m.unmatched(g)
    best = INF
    for f in free:
        d = alt_dist_exact(g, m, f, config)
        for x in free:
            if x != f:
                best = min(best, d.r(x, 1))
    return best


def brute_force_augmenting_paths(g: Graph, m: Matching, max_len: int,
                                 config: OracleConfig = DEFAULT_ORACLE) -> list[Walk]:
    """Every augmenting path of length ``<= max_len`` (each listed once)."""
    _check_limit(g, config)
    free = set(m.unmatched(g))
    found = []

    def extend(path, last_matched):
        v = path[-1]
        if len(path) > 1 and v in free:
            if path[0] < v:
                found.append(Walk.from_nodes(g, path))
            return
        if len(path) - 1 >= max_len:
            return
        for e in g.incident(v):
            if (e in m) == last_matched:
                continue
            u = g.other(e, v)
            if u not in path:
                extend(path + [u], e in m)

    for f in sorted(free):
        extend([f], True)
    return found


def all_matchings(g: Graph):
    """Iterate over every matching of a tiny graph (test helper)."""
    edges = g.edge_ids()
    for r in range(len(edges) + 1):
        for combo in itertools.combinations(edges, r):
            ends = [x for e in combo for x in g.endpoints(e)]
            if len(ends) == len(set(ends)):
                yield Matching.from_edge_ids(g, combo)
