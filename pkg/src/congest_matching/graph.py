"""Graphs and matchings, with walks and alternating distances on top.

Node and edge identifiers are plain integers. A :class:`Graph` built from an
edge list uses dense node ids ``0..n-1`` and edge ids equal to the position
in the list; subgraphs keep the ids of the graph they were cut from.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional

from .errors import ContractViolation, StructuralError

INF = math.inf


class Graph:
    """Immutable simple undirected graph with stable integer ids.

    Graphs created with ``derived=False`` must be connected. Subgraphs
    produced by :meth:`induced_subgraph` and :meth:`spanning_subgraph` are
    flagged ``derived`` and may be disconnected.
    """

    __slots__ = ("nodes", "_edges", "_adj", "_pair", "id_space", "derived")

    def __init__(
        self,
        nodes: Iterable[int],
        edges: Mapping[int, tuple[int, int]],
        *,
        id_space: Optional[int] = None,
        derived: bool = False,
    ):
        node_list = sorted(set(nodes))
        adj: dict[int, list[int]] = {v: [] for v in node_list}
        pair: dict[tuple[int, int], int] = {}
        norm: dict[int, tuple[int, int]] = {}
        for eid in sorted(edges):
            u, v = edges[eid]
            if u == v:
                raise StructuralError(f"self-loop at node {u} (edge {eid})")
            if u not in adj or v not in adj:
                raise StructuralError(f"edge {eid} references unknown node")
            key = (u, v) if u < v else (v, u)
            if key in pair:
                raise StructuralError(f"parallel edges {pair[key]} and {eid}")
            pair[key] = eid
            norm[eid] = key
            adj[u].append(eid)
            adj[v].append(eid)
        self.nodes: tuple[int, ...] = tuple(node_list)
        self._edges = norm
        self._adj = {v: tuple(es) for v, es in adj.items()}
        self._pair = pair
        self.id_space = id_space if id_space is not None else (
            node_list[-1] + 1 if node_list else 0)
        self.derived = derived
        if not derived:
            if len(node_list) < 2:
                raise StructuralError("a network needs at least two nodes")
            if not self.is_connected():
                raise StructuralError("graph is not connected")

    @classmethod
    def from_edge_list(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "Graph":
        edges = {i: (int(u), int(v)) for i, (u, v) in enumerate(pairs)}
        return cls(range(n), edges, id_space=n)

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def m(self) -> int:
        return len(self._edges)

    @property
    def edges(self) -> Mapping[int, tuple[int, int]]:
        return self._edges

    def edge_ids(self) -> list[int]:
        return sorted(self._edges)

    def has_node(self, v) -> bool:
        return v in self._adj

    def has_edge(self, eid) -> bool:
        return eid in self._edges

    def endpoints(self, eid: int) -> tuple[int, int]:
        try:
            return self._edges[eid]
        except KeyError:
            raise StructuralError(f"unknown edge {eid}") from None

    def incident(self, v: int) -> tuple[int, ...]:
        try:
            return self._adj[v]
        except KeyError:
            raise StructuralError(f"unknown node {v}") from None

    def other(self, eid: int, v: int) -> int:
        a, b = self.endpoints(eid)
        if v == a:
            return b
        if v == b:
            return a
        raise StructuralError(f"node {v} is not an endpoint of edge {eid}")

    def neighbors(self, v: int) -> list[int]:
        return [self.other(e, v) for e in self.incident(v)]

    def degree(self, v: int) -> int:
        return len(self.incident(v))

    def edge_between(self, u: int, v: int) -> Optional[int]:
        return self._pair.get((u, v) if u < v else (v, u))

    def bfs_distances(self, source: int) -> dict[int, int]:
        dist = {source: 0}
        queue = deque([source])
        while queue:
            v = queue.popleft()
            for e in self._adj[v]:
                u = self.other(e, v)
                if u not in dist:
                    dist[u] = dist[v] + 1
                    queue.append(u)
        return dist

    def is_connected(self) -> bool:
        if not self.nodes:
            return True
        return len(self.bfs_distances(self.nodes[0])) == len(self.nodes)

    def diameter(self) -> float:
        """Largest BFS eccentricity; infinite for disconnected graphs."""
        best = 0
        for v in self.nodes:
            dist = self.bfs_distances(v)
            if len(dist) < len(self.nodes):
                return INF
            best = max(best, max(dist.values()))
        return best

    def induced_subgraph(self, keep: Iterable[int]) -> "Graph":
        keep = set(keep)
        unknown = keep.difference(self._adj)
        if unknown:
            raise StructuralError(f"unknown nodes {sorted(unknown)}")
        edges = {e: (u, v) for e, (u, v) in self._edges.items()
                 if u in keep and v in keep}
        return Graph(keep, edges, id_space=self.id_space, derived=True)

    def spanning_subgraph(self, edge_ids: Iterable[int]) -> "Graph":
        edges = {e: self.endpoints(e) for e in edge_ids}
        return Graph(self.nodes, edges, id_space=self.id_space, derived=True)

    def with_edge(self, u: int, v: int) -> "Graph":
        """Copy of the graph with one extra edge (new id ``max+1``)."""
        eid = max(self._edges, default=-1) + 1
        edges = dict(self._edges)
        edges[eid] = (u, v)
        return Graph(self.nodes, edges, id_space=self.id_space,
                     derived=self.derived)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, Graph) and self.nodes == other.nodes
                and self._edges == other._edges)

    def __hash__(self) -> int:
        return hash((self.nodes, tuple(sorted(self._edges.items()))))


def induced_subgraph(g: Graph, keep: Iterable[int]) -> Graph:
    return g.induced_subgraph(keep)


class Matching:
    """A set of pairwise non-adjacent edges with a symmetric partner map.

    Matchings are value objects: every "mutation" returns a new instance and
    re-validates the no-shared-endpoint invariant.
    """

    __slots__ = ("_edges", "_mate")

    def __init__(self, edges: Mapping[int, tuple[int, int]] = None):
        edges = dict(edges or {})
        mate: dict[int, int] = {}
        for eid, (u, v) in edges.items():
            if u == v:
                raise StructuralError(f"matching edge {eid} is a self-loop")
            for x in (u, v):
                if x in mate:
                    raise StructuralError(
                        f"node {x} is covered twice (edge {eid})")
            mate[u], mate[v] = v, u
        self._edges = edges
        self._mate = mate

    @classmethod
    def from_edge_ids(cls, g: Graph, eids: Iterable[int]) -> "Matching":
        return cls({e: g.endpoints(e) for e in eids})

    @classmethod
    def from_pairs(cls, g: Graph, pairs: Iterable[tuple[int, int]]) -> "Matching":
        edges = {}
        for u, v in pairs:
            eid = g.edge_between(u, v)
            if eid is None:
                raise StructuralError(f"({u}, {v}) is not an edge")
            edges[eid] = g.endpoints(eid)
        return cls(edges)

    @property
    def edge_ids(self) -> frozenset[int]:
        return frozenset(self._edges)

    def pairs(self) -> list[tuple[int, int]]:
        return sorted(self._edges.values())

    def size(self) -> int:
        return len(self._edges)

    def __len__(self) -> int:
        return len(self._edges)

    def __contains__(self, eid) -> bool:
        return eid in self._edges

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self._edges))

    def mate(self, v: int) -> Optional[int]:
        return self._mate.get(v)

    def is_matched(self, v: int) -> bool:
        return v in self._mate

    def unmatched(self, g: Graph) -> list[int]:
        return [v for v in g.nodes if v not in self._mate]

    def restrict(self, g: Graph) -> "Matching":
        """Matching edges that survive in the subgraph ``g``."""
        return Matching({e: p for e, p in self._edges.items() if g.has_edge(e)})

    def is_maximal_in(self, g: Graph) -> bool:
        return all(self.is_matched(u) or self.is_matched(v)
                   for u, v in g.edges.values())

    def __eq__(self, other) -> bool:
        return isinstance(other, Matching) and self._edges == other._edges

    def __hash__(self) -> int:
        return hash(frozenset(self._edges))

    def __repr__(self) -> str:
        return f"Matching({self.pairs()})"


@dataclass(frozen=True)
class Walk:
    """Alternating sequence ``v0, e1, v1, ..., el, vl`` of nodes and edges."""

    nodes: tuple[int, ...]
    edges: tuple[int, ...]

    def __post_init__(self):
        if len(self.nodes) != len(self.edges) + 1:
            raise StructuralError("a walk has exactly one more node than edges")

    @classmethod
    def from_nodes(cls, g: Graph, seq: Iterable[int]) -> "Walk":
        seq = tuple(seq)
        edges = []
        for a, b in zip(seq, seq[1:]):
            eid = g.edge_between(a, b)
            if eid is None:
                raise StructuralError(f"({a}, {b}) is not an edge")
            edges.append(eid)
        return cls(seq, tuple(edges))

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def parity(self) -> int:
        return len(self.edges) % 2

    @property
    def start(self) -> int:
        return self.nodes[0]

    @property
    def end(self) -> int:
        return self.nodes[-1]

    def is_path(self) -> bool:
        return len(set(self.nodes)) == len(self.nodes)

    def is_alternating(self, m: Matching) -> bool:
        flags = [e in m for e in self.edges]
        return all(a != b for a, b in zip(flags, flags[1:]))

    def reversed(self) -> "Walk":
        return Walk(self.nodes[::-1], self.edges[::-1])

    def check_in(self, g: Graph) -> None:
        """Raise :class:`StructuralError` unless the walk lives in ``g``."""
        for v in self.nodes:
            if not g.has_node(v):
                raise StructuralError(f"walk visits unknown node {v}")
        for i, eid in enumerate(self.edges):
            if not g.has_edge(eid):
                raise StructuralError(f"walk uses unknown edge {eid}")
            if set(g.endpoints(eid)) != {self.nodes[i], self.nodes[i + 1]}:
                raise StructuralError(
                    f"edge {eid} does not join {self.nodes[i]} and {self.nodes[i + 1]}")


def _augmenting_shape(m: Matching, p: Walk) -> bool:
    return (p.length >= 1 and p.is_path() and p.is_alternating(m)
            and not m.is_matched(p.start) and not m.is_matched(p.end))


def is_augmenting(g: Graph, m: Matching, p: Walk) -> bool:
    """True iff ``p`` is a simple alternating path joining two unmatched nodes."""
    p.check_in(g)
    return _augmenting_shape(m, p)


def augment_along(m: Matching, p: Walk) -> Matching:
    """Flip matching membership along an augmenting path."""
    if not _augmenting_shape(m, p):
        raise ContractViolation(f"walk {p.nodes} is not augmenting")
    edges = {e: uv for e, uv in m._edges.items() if e not in p.edges}
    for i, eid in enumerate(p.edges):
        if eid not in m:
            a, b = p.nodes[i], p.nodes[i + 1]
            edges[eid] = (a, b) if a < b else (b, a)
    out = Matching(edges)
    assert out.size() == m.size() + 1
    return out


@dataclass(frozen=True)
class AltDist:
    """Shortest θ-alternating path lengths from an unmatched source.

    ``dist[(v, theta)]`` is an int of parity ``theta`` or ``INF``. The source
    carries the sentinels ``r^1(f, f) = 0`` and ``r^0(f, f) = INF``.
    """

    source: int
    dist: Mapping[tuple[int, int], float]
    witnesses: Optional[Mapping[tuple[int, int], tuple[int, ...]]] = field(
        default=None, compare=False, repr=False)

    def r(self, v: int, theta: int) -> float:
        return self.dist.get((v, theta), INF)

    def r_min(self, v: int) -> float:
        return min(self.r(v, 0), self.r(v, 1))

    def gamma(self, v: int) -> int:
        r0, r1 = self.r(v, 0), self.r(v, 1)
        if r0 == INF and r1 == INF:
            return 0
        return 0 if r0 < r1 else 1

    def reachable(self, v: int) -> bool:
        return self.r_min(v) < INF

    def nodes(self) -> list[int]:
        return sorted({v for v, _ in self.dist})

    def witness(self, g: Graph, v: int, theta: int) -> Optional[Walk]:
        if self.witnesses is None:
            raise ContractViolation("this AltDist carries no witnesses")
        seq = self.witnesses.get((v, theta))
        return None if seq is None else Walk.from_nodes(g, seq)

    def truncated(self, limit: int) -> dict[int, set[tuple[int, int]]]:
        """Per-node ``{(theta, r)}`` pairs with ``r <= limit``."""
        out: dict[int, set[tuple[int, int]]] = {}
        for (v, theta), d in self.dist.items():
            if d <= limit:
                out.setdefault(v, set()).add((theta, int(d)))
        return out


# ---------------------------------------------------------------- text formats

def parse_edge_list(text: str) -> Graph:
    """Parse ``n m`` followed by ``m`` lines ``u v``."""
    rows = [ln.split() for ln in text.splitlines()
            if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 2:
        raise StructuralError("edge list must start with a line 'n m'")
    n, m = int(rows[0][0]), int(rows[0][1])
    pairs = [(int(a), int(b)) for a, b in rows[1:]]
    if len(pairs) != m:
        raise StructuralError(f"header announces {m} edges, found {len(pairs)}")
    for u, v in pairs:
        if not (0 <= u < n and 0 <= v < n):
            raise StructuralError(f"edge ({u}, {v}) outside 0..{n - 1}")
    return Graph.from_edge_list(n, pairs)


def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines += [f"{u} {v}" for _, (u, v) in sorted(g.edges.items())]
    return "\n".join(lines) + "\n"


def parse_matching(g: Graph, text: str) -> Matching:
    pairs = [tuple(int(x) for x in ln.split()) for ln in text.splitlines()
             if ln.strip() and not ln.lstrip().startswith("#")]
    return Matching.from_pairs(g, pairs)


def format_matching(m: Matching) -> str:
    return "".join(f"{u} {v}\n" for u, v in m.pairs())
