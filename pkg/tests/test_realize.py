import pytest
from hypothesis import given, strategies as st

from oracles import all_topologies
from realstruct.core import GENERAL, WEAK_PSEUDO_METRIC, Carrier, classify_map
from realstruct.generate import Topology, topology_from_family
from realstruct.realize import TOPOLOGY_COUNTS, enumerate_topologies, realize_topology
from test_core import AB


def test_discrete():
    fam = realize_topology(Topology.discrete(AB))
    assert [d.as_strings() for d in fam] == [[["0", "1"], ["1", "1"]], [["1", "1"], ["1", "0"]]]
    assert fam.names == ["d_a", "d_b"]
    assert topology_from_family(fam) == Topology.discrete(AB)


def test_indiscrete():
    fam = realize_topology(Topology.indiscrete(AB))
    assert all(v == 0 for d in fam for row in d.values for v in row)
    assert topology_from_family(fam) == Topology.indiscrete(AB)


def test_sierpinski():
    T = Topology.from_opens(AB, [[], ["b"], ["a", "b"]])
    fam = realize_topology(T)
    assert fam[0].as_strings() == [["0", "0"], ["0", "0"]]
    assert fam[1].as_strings() == [["1", "1"], ["1", "0"]]
    assert topology_from_family(fam) == T


def test_emitted_maps_are_weak_pseudo_metrics():
    for T in enumerate_topologies(3):
        for d in realize_topology(T):
            assert classify_map(d).classification != GENERAL


def test_non_trivial_maps_are_strictly_weak():
    d = realize_topology(Topology.discrete(AB))[0]
    assert classify_map(d).classification == WEAK_PSEUDO_METRIC


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_counts_match_brute_force(n):
    tops = enumerate_topologies(n)
    assert len(tops) == TOPOLOGY_COUNTS[n]
    assert {frozenset(frozenset(A.indices()) for A in T.opens) for T in tops} == set(all_topologies(n))


def test_five_points_behind_flag():
    with pytest.raises(ValueError):
        enumerate_topologies(5)
    with pytest.raises(ValueError):
        enumerate_topologies(0)


@pytest.mark.slow
def test_five_points():
    assert len(enumerate_topologies(5, allow_large=True)) == 6942


def test_enumeration_is_sorted_and_distinct():
    tops = enumerate_topologies(3)
    keys = [T.minimal_open_masks for T in tops]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)


@given(st.sampled_from(enumerate_topologies(4)))
def test_round_trip(T):
    assert topology_from_family(realize_topology(T)) == T


def test_custom_carrier():
    car = Carrier(("x", "y"))
    assert all(T.carrier == car for T in enumerate_topologies(2, carrier=car))
    with pytest.raises(ValueError):
        enumerate_topologies(3, carrier=car)
