import pytest
from hypothesis import given, strategies as st

from oracles import open_sets_by_definition
from realstruct.core import Carrier, MapFamily, PairSet, PointSet, constant_map, discrete_metric, zero_map
from realstruct.formats import parse_instance
from realstruct.generate import (
    DeltaLocalFilter,
    MalformedFilter,
    MalformedTopology,
    Topology,
    delta_local_filter,
    is_topology,
    minimal_entourage,
    minimal_open,
    topology_from_family,
    topology_from_filter,
)
from strategies import carriers, families, pis
from test_core import AB, M


def fam(*maps):
    return MapFamily(maps[0].carrier, "P", maps)


SIERPINSKI = Topology.from_opens(AB, [[], ["b"], ["a", "b"]])
d_b = M([["1", "1"], ["1", "0"]])


class TestMinimalEntourage:
    def test_empty_family(self):
        assert minimal_entourage(MapFamily(AB, "P", ()), "a") == PairSet.full(AB)

    def test_discrete(self):
        # {d < eps} for small eps is the whole diagonal, whichever point set the threshold
        P = fam(discrete_metric(AB))
        assert minimal_entourage(P, "a").pairs() == [("a", "a"), ("b", "b")]
        assert minimal_entourage(P, "b") == minimal_entourage(P, "a")
        assert minimal_entourage(P, "a").section("a").names == ["a"]

    def test_threshold_follows_the_diagonal(self):
        P = fam(M([["0", "1"], ["1", "1"]]))
        assert minimal_entourage(P, "a").pairs() == [("a", "a")]
        assert minimal_entourage(P, "b") == PairSet.full(AB)
        assert minimal_entourage(P, "a").section("a").names == ["a"]

    def test_zero_map(self):
        F = delta_local_filter(fam(zero_map(AB)))
        assert all(m == PairSet.full(AB) for m in F.minimal_entourage)

    def test_filter_membership(self):
        F = delta_local_filter(fam(discrete_metric(AB)))
        assert F.contains(PairSet.of(AB, [("a", "a"), ("b", "b"), ("a", "b")]))
        assert not F.contains(PairSet.of(AB, [("a", "a"), ("a", "b")]))
        assert F.contains_at("b", PairSet.of(AB, [("a", "a"), ("b", "b")]))
        assert not F.contains_at("b", PairSet.of(AB, [("b", "b")]))

    def test_diagonal_point_required(self):
        with pytest.raises(MalformedFilter):
            DeltaLocalFilter(AB, (PairSet.of(AB, [("a", "b")]), PairSet.full(AB)))


class TestTopology:
    def test_discrete_metric(self):
        assert topology_from_family(fam(discrete_metric(AB))) == Topology.discrete(AB)

    def test_sierpinski(self):
        T = topology_from_family(fam(d_b))
        assert T == SIERPINSKI
        assert [A.names for A in T.opens] == [[], ["b"], ["a", "b"]]

    def test_constant_one(self):
        assert topology_from_family(fam(constant_map(AB, 1))) == Topology.indiscrete(AB)

    def test_from_filter(self):
        F_all = DeltaLocalFilter(AB, (PairSet.full(AB),) * 2)
        assert topology_from_filter(F_all) == Topology.indiscrete(AB)
        F_diag = DeltaLocalFilter(AB, (PairSet.of(AB, [("a", "a")]), PairSet.of(AB, [("b", "b")])))
        assert topology_from_filter(F_diag) == Topology.discrete(AB)
        assert topology_from_filter(delta_local_filter(fam(d_b))) == SIERPINSKI

    def test_minimal_opens(self):
        assert minimal_open(Topology.discrete(AB), "a").names == ["a"]
        assert minimal_open(Topology.indiscrete(AB), "a").names == ["a", "b"]
        assert minimal_open(SIERPINSKI, "a").names == ["a", "b"]
        assert minimal_open(SIERPINSKI, "b").names == ["b"]

    def test_is_topology_examples(self):
        X = PointSet.of(AB, ["a", "b"])
        empty = PointSet.of(AB, [])
        assert is_topology([empty, X])
        assert not is_topology([empty, PointSet.of(AB, ["a"]), PointSet.of(AB, ["b"])])
        assert not is_topology([])

    def test_from_opens_rejects_non_topology(self):
        with pytest.raises(MalformedTopology):
            Topology.from_opens(AB, [[], ["a"], ["b"]])

    def test_nesting_validated(self):
        car = Carrier(("a", "b", "c"))
        with pytest.raises(MalformedTopology):
            Topology(car, (0b011, 0b110, 0b100))

    def test_open_sets_of_three_point_chain(self):
        car = Carrier(("a", "b", "c"))
        P = parse_instance(
            '{"carrier":["a","b","c"],"maps":{"e":[["0","1","2"],["1","0","1"],["2","1","0"]],'
            '"z":[["0","0","1"],["0","0","1"],["1","1","0"]]},"families":{"Q":["z"]}}'
        ).family("Q")
        T = topology_from_family(P)
        assert [A.names for A in T.opens] == [[], ["c"], ["a", "b"], ["a", "b", "c"]]
        assert T.carrier == car


@given(st.data())
def test_generated_topology_is_a_topology_and_matches_definition(data):
    car = data.draw(carriers(1, 4))
    P = data.draw(families(car, data.draw(pis)))
    T = topology_from_family(P)
    assert is_topology(T.opens)
    assert {frozenset(A.indices()) for A in T.opens} == open_sets_by_definition(
        car.size, [d.values for d in P]
    )
    assert topology_from_filter(delta_local_filter(P)) == T


@given(st.data())
def test_minimal_open_is_smallest_open_containing_point(data):
    car = data.draw(carriers(1, 4))
    T = topology_from_family(data.draw(families(car, data.draw(pis))))
    for x in range(car.size):
        containing = [A.mask for A in T.opens if A.mask >> x & 1]
        smallest = containing[0]
        for A in containing:
            smallest &= A
        assert T.minimal_open_masks[x] == smallest


@given(st.data())
def test_adding_maps_refines(data):
    car = data.draw(carriers(1, 4))
    P = data.draw(families(car, "pseudo"))
    Q = data.draw(families(car, "pseudo", "Q"))
    assert topology_from_family(P).issubset(topology_from_family(P.union(Q)))
