import math
import random

import pytest
from hypothesis import given, settings

from congest_matching import fixtures
from congest_matching.congest import RoundReport, SimConfig
from congest_matching.driver import (VARIANTS, Schedule, isqrt_ceil, maximal_matching,
                                     solve, solve_traced, wrapper_a, wrapper_b)
from congest_matching.errors import BudgetExceeded, NonTermination
from congest_matching.generators import blossom_chain, gnp, long_path
from congest_matching.graph import Graph, is_augmenting
from congest_matching.oracle import max_matching

from _instances import connected_graph, seeds


def test_maximal_matching_p2():
    g, _ = fixtures.load("p2")
    assert maximal_matching(g, 0, RoundReport()).pairs() == [(0, 1)]


def test_maximal_matching_star():
    g = Graph.from_edge_list(6, [(0, i) for i in range(1, 6)])
    m = maximal_matching(g, 3, RoundReport())
    assert len(m) == 1 and m.is_maximal_in(g)


@pytest.mark.slow
def test_maximal_matching_rounds_on_500_nodes():
    g = gnp(500, 0.02, 1)
    for seed in range(50):
        rep = RoundReport()
        m = maximal_matching(g, seed, rep)
        assert m.is_maximal_in(g)
        assert rep.rounds_elapsed <= 20 * math.log2(g.n)


def test_wrapper_a_p4():
    g, m = fixtures.load("p4")
    assert [p.nodes for p in wrapper_a(g, m, 3, RoundReport())] == [(0, 1, 2, 3)]
    assert wrapper_a(g, m, 1, RoundReport()) == []


def test_wrapper_a_twin_p4_returns_two_disjoint_paths():
    g, m = fixtures.load("twin_p4")
    paths = wrapper_a(g, m, 3, RoundReport())
    assert len(paths) == 2
    assert not set(paths[0].nodes) & set(paths[1].nodes)
    assert all(is_augmenting(g, m, p) for p in paths)


def test_wrapper_a_blossom_chain():
    g, m = blossom_chain(3)
    paths = wrapper_a(g, m, 5, RoundReport())
    assert len(paths) == 3 and all(p.length == 5 for p in paths)


@pytest.mark.parametrize("name", ["p4", "p2", "blossom6", "walktrap", "c6", "twin_p4"])
def test_wrapper_b_on_fixtures(name):
    g, m = fixtures.load(name)
    paths = wrapper_b(g, m, 2 * len(m) + 2, RoundReport())
    assert bool(paths) == (len(m) < len(max_matching(g)))
    assert all(is_augmenting(g, m, p) for p in paths)


def test_wrapper_b_on_maximum_matching_is_empty():
    g, _ = fixtures.load("c6")
    assert wrapper_b(g, max_matching(g), 6, RoundReport()) == []


@pytest.mark.parametrize("k", [4, 16])
def test_wrapper_b_long_path(k):
    g, m = long_path(k)
    rep = RoundReport()
    paths = wrapper_b(g, m, 2 * k, rep)
    assert [p.length for p in paths] == [2 * k + 1]
    assert rep.rounds_elapsed <= 3 * (4 * k + 1) + 16 * g.n + 16


@pytest.mark.parametrize("variant", VARIANTS)
@pytest.mark.parametrize("name,size", [("p4", 2), ("c6", 3), ("blossom6", 3), ("c5", 2)])
def test_solve_fixtures(name, size, variant):
    g, _ = fixtures.load(name)
    m, rep = solve(g, 1, variant)
    assert len(m) == size
    assert rep.max_bits <= rep.bandwidth


def test_solve_p4_needs_no_phase_b():
    g, _ = fixtures.load("p4")
    tr = solve_traced(g, 0)
    assert tr.size_after_a == 2


def test_schedule_lengths():
    s = Schedule(16)
    assert s.a_lengths() == [-(-32 // (16 - i)) for i in range(1, 13)]
    assert s.b_iterations() == 4 == isqrt_ceil(16)
    assert Schedule(16, "square-only").a_lengths()[-1] == 33
    assert Schedule(16, "linear-only").b_iterations() == 16
    assert Schedule(16, "linear-only").a_lengths() == []
    assert isqrt_ceil(17) == 5 and isqrt_ceil(1) == 1


def test_unknown_variant():
    g, _ = fixtures.load("p4")
    with pytest.raises(ValueError):
        solve(g, 0, "cubic")


def test_round_cap_error_names_the_phase():
    g, _ = long_path(6)
    with pytest.raises(NonTermination) as info:
        solve(g, 0, "hybrid", SimConfig(max_rounds=2))
    assert str(info.value).startswith("[pre]")
    assert info.value.phase == "pre"


def test_slots_are_fully_booked():
    g, _ = long_path(8)
    tr = solve_traced(g, 0)
    sched = Schedule(tr.s_hat, "hybrid")
    pre = tr.report.rounds_of("pre/maximal") + tr.report.rounds_of("pre/s_hat")
    assert tr.report.rounds_elapsed == pre + sched.total_slots()


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_solve_is_exact_and_deficit_bounded(seed):
    g = connected_graph(random.Random(seed), 4, 30)
    tr = solve_traced(g, seed % 1000)
    best = len(max_matching(g))
    assert len(tr.matching) == best
    assert best - tr.size_after_a <= isqrt_ceil(tr.s_hat)
    assert tr.matching.is_maximal_in(g)


def test_slot_overrun_raises_budget_exceeded(monkeypatch):
    monkeypatch.setattr(Schedule, "slot_a", staticmethod(lambda ell: 1))
    g, _ = long_path(4)
    with pytest.raises(BudgetExceeded, match=r"^\[A1\]"):
        solve(g, 0)
