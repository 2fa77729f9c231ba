"""Deterministic instance families."""

from __future__ import annotations

import random
from typing import Optional

import networkx as nx

from . import fixtures
from .graph import Graph, Matching
from .oracle import max_matching

KINDS = ("gnp", "long-path", "cycle", "blossom-chain", "fixture", "two-free")


def gnp(n: int, p: float, seed: int) -> Graph:
    """G(n, p), with components chained by their smallest nodes so it is connected."""
    if n < 2 or not 0 <= p <= 1:
        raise ValueError("gnp needs n >= 2 and 0 <= p <= 1")
    h = nx.gnp_random_graph(n, p, seed=seed)
    comps = sorted(min(c) for c in nx.connected_components(h))
    h.add_edges_from(zip(comps, comps[1:]))
    return Graph.from_edge_list(n, sorted(h.edges()))


def long_path(k: int) -> tuple[Graph, Matching]:
    """Path on ``2k+2`` nodes whose inner edges alternate into a size-``k`` matching."""
    if k < 1:
        raise ValueError("long-path needs k >= 1")
    n = 2 * k + 2
    g = Graph.from_edge_list(n, [(i, i + 1) for i in range(n - 1)])
    return g, Matching.from_pairs(g, [(2 * i + 1, 2 * i + 2) for i in range(k)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return Graph.from_edge_list(n, [(i, (i + 1) % n) for i in range(n)])


def blossom_chain(k: int) -> tuple[Graph, Matching]:
    """``k`` six-node blossom gadgets joined by matched connector pairs.

    Gadget ``j`` uses nodes ``8j .. 8j+5`` laid out like the blossom6 fixture
    (f, a, b, c, d, g) plus a connector pair ``x = 8j+6``, ``y = 8j+7``
    attached as ``d - x - y - a'`` to the next gadget's ``a``; the last
    connector dangles. The matching covers ``ab``, ``cd`` and ``xy`` of every
    gadget, leaving one augmenting path of length 5 inside each gadget and
    no shorter one across gadgets. The maximum matching has size ``4k``.
    """
    if k < 1:
        raise ValueError("blossom-chain needs k >= 1")
    pairs, matched = [], []
    for j in range(k):
        f, a, b, c, d, g, x, y = range(8 * j, 8 * j + 8)
        pairs += [(f, a), (a, b), (b, c), (c, d), (b, d), (c, g), (d, x), (x, y)]
        if j + 1 < k:
            pairs.append((y, 8 * (j + 1) + 1))
        matched += [(a, b), (c, d), (x, y)]
    g = Graph.from_edge_list(8 * k, pairs)
    return g, Matching.from_pairs(g, matched)


def two_free(n: int, p: float, seed: int, max_tries: int = 200) -> tuple[Graph, Matching]:
    """Connected graph plus a matching with exactly two unmatched nodes.

    A perfect matching is found first; flipping a random alternating path
    that starts and ends with matching edges frees its two endpoints and
    leaves that path as an augmenting path.
    """
    if n < 2 or n % 2:
        raise ValueError("two-free needs an even n >= 2")
    rng = random.Random(seed)
    for _ in range(max_tries):
        g = gnp(n, p, rng.randrange(1 << 30))
        mstar = max_matching(g)
        if 2 * len(mstar) != n:
            continue
        start = rng.choice(g.nodes)
        walk = [start, mstar.mate(start)]
        target = rng.randint(0, n // 2 - 1)
        while len(walk) // 2 <= target:
            options = [u for u in g.neighbors(walk[-1])
                       if u not in walk and mstar.mate(u) not in walk]
            if not options:
                break
            u = rng.choice(sorted(options))
            walk += [u, mstar.mate(u)]
        flip = {g.edge_between(a, b) for a, b in zip(walk, walk[1:])}
        eids = mstar.edge_ids.symmetric_difference(flip)
        return g, Matching.from_edge_ids(g, eids)
    raise RuntimeError(f"no perfect-matching graph found in {max_tries} tries")


def generate(kind: str, *, n: Optional[int] = None, p: Optional[float] = None,
             k: Optional[int] = None, seed: int = 0,
             name: Optional[str] = None) -> tuple[Graph, Optional[Matching]]:
    """Dispatch by family name; returns ``(graph, matching or None)``."""
    if kind == "gnp":
        return gnp(_need(n, "n"), _need(p, "p"), seed), None
    if kind == "long-path":
        return long_path(_need(k, "k"))
    if kind == "cycle":
        return cycle(_need(n, "n")), None
    if kind == "blossom-chain":
        return blossom_chain(_need(k, "k"))
    if kind == "two-free":
        return two_free(_need(n, "n"), p if p is not None else 0.3, seed)
    if kind == "fixture":
        return fixtures.load(_need(name, "name"))
    raise ValueError(f"unknown kind {kind!r}; choose from {KINDS}")


def _need(value, label):
    if value is None:
        raise ValueError(f"missing parameter {label}")
    return value
