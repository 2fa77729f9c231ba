import random

from hypothesis import given, settings

from congest_matching import fixtures
from congest_matching.abt import build_abt, lca_preprocess
from congest_matching.certificate import (bridges_upto, build_certificate, compute_levels,
                                          constf, constf_centralized, exchange_levels)
from congest_matching.congest import RoundReport, SimConfig
from congest_matching.graph import INF
from congest_matching.oracle import alt_dist_exact, preserves_reachability

from _instances import instance_with_free, reachable_part, seeds


def pipeline(g, m, f, dist=None):
    dist = dist or alt_dist_exact(g, m, f)
    t = build_abt(g, m, f, dist)
    rep = RoundReport()
    lca = lca_preprocess(t, g, rep)
    levels = exchange_levels(g, m, dist, rep, SimConfig(), "levels")
    cert = build_certificate(g, m, t, lca, levels, rep)
    return t, lca, levels, cert, rep


def oracle_levels(g, m, f):
    d = alt_dist_exact(g, m, f)
    out = {}
    for e, (u, v) in g.edges.items():
        th = 1 if e in m else 0
        k = max(d.r(u, th), d.r(v, th))
        if k < INF:
            out[e] = k
    return out


def test_p4_has_no_levels():
    g, m = fixtures.load("p4")
    lv = compute_levels(g, m, alt_dist_exact(g, m, 0))
    assert lv.level == {}
    assert all(not lv.F(k) for k in range(1, 8))


def test_walktrap_levels():
    g, m = fixtures.load("walktrap")
    lv = compute_levels(g, m, alt_dist_exact(g, m, 0))
    assert lv.level == oracle_levels(g, m, 0)
    assert g.edge_between(1, 4) not in lv.level  # da: max(4, inf)
    assert g.edge_between(2, 3) not in lv.level  # bc: max(2, inf)


def test_c6_unmatched_edges_take_larger_even_distance():
    g, m = fixtures.load("c6")  # M = {12, 34}, free 0 and 5
    d = alt_dist_exact(g, m, 0)
    lv = compute_levels(g, m, d)
    assert lv.level == oracle_levels(g, m, 0)
    for e, (u, v) in g.edges.items():
        if e not in m and e in lv.level:
            assert lv.level[e] == max(d.r(u, 0), d.r(v, 0))
            assert lv.level[e] % 2 == 0


def test_distributed_levels_match_local_formula():
    g, m = fixtures.load("blossom6")
    d = alt_dist_exact(g, m, 0)
    rep = RoundReport()
    assert exchange_levels(g, m, d, rep, SimConfig(), "x").level == \
        compute_levels(g, m, d).level
    assert rep.rounds_simulated == 1


def test_blossom6_constf_matches_centralized():
    g, m = fixtures.load("blossom6")
    t, lca, levels, cert, _ = pipeline(g, m, 0)
    for k in range(1, 7):
        assert constf(g, t, lca, levels, k, RoundReport()) == \
            constf_centralized(g, t, lca.lca, levels, k)


def test_single_outgoing_edge_is_reported():
    g, m = fixtures.load("blossom6")
    t, lca, levels, _, _ = pipeline(g, m, 0)
    cd = g.edge_between(3, 4)
    k = levels.level[cd]
    out = constf(g, t, lca, levels, k, RoundReport())
    # T_c and T_d each have cd as their only outgoing level-k edge
    assert out[3] == cd and out[4] == cd


def test_internal_edge_gives_bottom():
    g, m = fixtures.load("blossom6")
    t, lca, levels, _, _ = pipeline(g, m, 0)
    cd = g.edge_between(3, 4)
    out = constf(g, t, lca, levels, levels.level[cd], RoundReport())
    # cd lies inside T_b (its lca is b at depth 2), so ep(b) stays a bridge
    assert lca.lca[cd] >= lca.depth[2]
    assert out[2] is None and out[0] is None


def test_tree_input_has_empty_certificate():
    g, m = fixtures.load("p4")
    t, _, _, cert, _ = pipeline(g, m, 0)
    assert cert.fc == {}
    assert cert.edges() == set(t.tree_edges)


def test_blossom6_certificate():
    g, m = fixtures.load("blossom6")
    t, _, _, cert, rep = pipeline(g, m, 0)
    assert len(cert.fc) <= g.n - 1
    assert preserves_reachability(cert.graph(g), g, m, 0)
    assert rep.max_bits <= rep.bandwidth
    assert cert.dump(g).splitlines()[0] == "0 1"


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_certificate_sparse_and_preserving(seed):
    g0, m0, f = instance_with_free(random.Random(seed), 3, 16)
    g, m, _ = reachable_part(g0, m0, f)
    t, lca, levels, cert, _ = pipeline(g, m, f)
    assert len(cert.fc) <= g.n - 1
    assert preserves_reachability(cert.graph(g), g, m, f)
    # reachability in the reachable part is reachability in the whole graph
    assert preserves_reachability(cert.graph(g), g0, m0, f)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_constf_and_bridges(seed):
    g0, m0, f = instance_with_free(random.Random(seed), 3, 14)
    g, m, _ = reachable_part(g0, m0, f)
    t, lca, levels, cert, _ = pipeline(g, m, f)
    for k in range(1, levels.max_level + 1):
        dist_out = constf(g, t, lca, levels, k, RoundReport())
        assert dist_out == constf_centralized(g, t, lca.lca, levels, k)
        # a tree edge is a bridge of T + F_{<=k} only while it was one at k-1
        assert bridges_upto(g, t, levels, k) <= bridges_upto(g, t, levels, k - 1)

