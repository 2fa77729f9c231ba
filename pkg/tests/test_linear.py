import random

import pytest
from hypothesis import given, settings

from congest_matching import fixtures
from congest_matching.congest import RoundReport
from congest_matching.errors import ContractViolation
from congest_matching.generators import long_path
from congest_matching.graph import is_augmenting
from congest_matching.linear import linear_augpath, linear_round_bound

from _instances import two_free_instance, two_free_long, seeds


def test_p4():
    g, m = fixtures.load("p4")
    assert linear_augpath(g, m, 0, 3, RoundReport()).nodes == (0, 1, 2, 3)


def test_blossom6_path_is_augmenting():
    g, m = fixtures.load("blossom6")
    rep = RoundReport()
    walk = linear_augpath(g, m, 0, 5, rep)
    assert is_augmenting(g, m, walk)
    assert (walk.start, walk.end) == (0, 5)
    assert rep.rounds_elapsed <= linear_round_bound(g.n)
    assert rep.max_bits <= rep.bandwidth


def test_contract_needs_two_unmatched():
    g, m = fixtures.load("c5")
    with pytest.raises(ContractViolation):
        linear_augpath(g, m, 0, 0, RoundReport())


@pytest.mark.parametrize("k", [1, 4, 16])
def test_long_path_rounds_are_linear(k):
    g, m = long_path(k)
    rep = RoundReport()
    walk = linear_augpath(g, m, 0, g.n - 1, rep)
    assert walk.length == 2 * k + 1
    assert rep.rounds_elapsed <= linear_round_bound(g.n)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_random_instances(seed):
    g, m, f, gnode = two_free_instance(random.Random(seed), 6, 40)
    rep = RoundReport()
    walk = linear_augpath(g, m, f, gnode, rep)
    assert is_augmenting(g, m, walk) and {walk.start, walk.end} == {f, gnode}
    assert rep.rounds_elapsed <= linear_round_bound(g.n)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_random_long_instances(seed):
    g, m, f, gnode = two_free_long(random.Random(seed), 6, 30)
    walk = linear_augpath(g, m, f, gnode, RoundReport())
    assert is_augmenting(g, m, walk)
