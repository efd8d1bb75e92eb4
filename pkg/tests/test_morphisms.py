import random

import pytest
from hypothesis import given, settings, strategies as st

from realstruct.core import Carrier, MapFamily, constant_map, discrete_metric, zero_map
from realstruct.generate import Topology, topology_from_family
from realstruct.morphisms import (
    PointMap,
    SearchBoundExceeded,
    compose,
    continuity_oracle,
    epsilon_morphism_oracle,
    is_morphism,
    same_type_search,
)
from realstruct.preorders import PreorderKind
from realstruct.structures import KindMismatch, RealSpace
from strategies import carriers, families
from test_core import AB, M

ABC = Carrier(("a", "b", "c"))
UV = Carrier(("u", "v"))


def space(*maps, kind="topological", pi=None):
    return RealSpace.of(MapFamily(maps[0].carrier, "P", maps), kind, pi)


class TestPointMap:
    def test_from_dict(self):
        f = PointMap.from_dict(AB, UV, {"a": "v", "b": "u"})
        assert f("a") == "v" and f.to_dict() == {"a": "v", "b": "u"}

    @pytest.mark.parametrize("mapping", [{"a": "u"}, {"a": "u", "b": "x"}, {"a": "u", "b": "u", "z": "u"}])
    def test_rejects_bad_maps(self, mapping):
        with pytest.raises(ValueError):
            PointMap.from_dict(AB, UV, mapping)

    def test_compose(self):
        f = PointMap.from_dict(AB, UV, {"a": "v", "b": "u"})
        g = PointMap.from_dict(UV, AB, {"u": "a", "v": "a"})
        assert compose(g, f).to_dict() == {"a": "a", "b": "a"}


class TestIsMorphism:
    def test_identity(self):
        S = space(M([["1", "1"], ["1", "0"]]))
        assert is_morphism(PointMap.identity(AB), S, S).holds

    def test_constant_topological(self):
        SX, SY = space(zero_map(AB)), space(discrete_metric(ABC))
        assert is_morphism(PointMap.constant(AB, ABC, "b"), SX, SY).holds

    def test_identity_indiscrete_to_discrete(self):
        SX, SY = space(constant_map(AB, 1)), space(discrete_metric(AB, "d"))
        r = is_morphism(PointMap.identity(AB), SX, SY)
        assert not r.holds and r.failing_generator == "d∘id"

    def test_outside_domain(self):
        # the pullback of a weak pseudo-metric along a map missing its zero point has no zero
        d = M([["1", "1"], ["1", "0"]])
        SX = space(discrete_metric(AB), kind="topological", pi="weak")
        SY = space(d, kind="topological", pi="weak")
        r = is_morphism(PointMap.constant(AB, AB, "a"), SX, SY)
        assert not r.holds and r.outside_domain == "d∘const"

    def test_kind_mismatch(self):
        with pytest.raises(KindMismatch):
            is_morphism(PointMap.identity(AB), space(zero_map(AB)), space(zero_map(AB), kind="lipschitz"))


class TestContinuityOracle:
    def test_examples(self):
        D, I = Topology.discrete(ABC), Topology.indiscrete(AB)
        rng = random.Random(1)
        for _ in range(20):
            f = PointMap(ABC, AB, tuple(rng.randrange(2) for _ in range(3)))
            assert continuity_oracle(f, D, I)
        assert not continuity_oracle(PointMap.identity(AB), I, Topology.discrete(AB))

    @given(st.data())
    def test_matches_preimage_definition(self, data):
        X, Y = data.draw(carriers(1, 3)), data.draw(carriers(1, 3))
        TX = topology_from_family(data.draw(families(X)))
        TY = topology_from_family(data.draw(families(Y, name="Q")))
        f = PointMap(X, Y, tuple(data.draw(st.integers(0, Y.size - 1)) for _ in range(X.size)))
        opens_x = {A.mask for A in TX.opens}
        preimages_open = all(
            sum(1 << x for x in range(X.size) if B.mask >> f.assignment[x] & 1) in opens_x
            for B in TY.opens
        )
        assert continuity_oracle(f, TX, TY) == preimages_open


class TestEpsilonOracle:
    def test_identity(self):
        P = MapFamily(AB, "P", (discrete_metric(AB),))
        for kind in ("delta-local", "strong-delta-local"):
            assert epsilon_morphism_oracle(kind, PointMap.identity(AB), P, P)

    def test_collapse_to_point(self):
        PX = MapFamily(ABC, "PX", (discrete_metric(ABC),))
        PY = MapFamily(AB, "PY", (discrete_metric(AB),))
        for kind in ("delta-local", "strong-delta-local"):
            assert epsilon_morphism_oracle(kind, PointMap.constant(ABC, AB, "a"), PX, PY)

    @settings(deadline=None, max_examples=150)
    @given(st.data(), st.sampled_from(["delta-local", "strong-delta-local"]), st.sampled_from(["all", "pseudo"]))
    def test_agrees_with_is_morphism(self, data, kind, pi):
        X, Y = data.draw(carriers(1, 3)), data.draw(carriers(1, 3))
        PX, PY = data.draw(families(X, pi, "PX")), data.draw(families(Y, pi, "PY"))
        f = PointMap(X, Y, tuple(data.draw(st.integers(0, Y.size - 1)) for _ in range(X.size)))
        k = PreorderKind(kind, pi)
        assert is_morphism(f, RealSpace.of(PX, k), RealSpace.of(PY, k)).holds == \
            epsilon_morphism_oracle(k, f, PX, PY)


class TestSameType:
    def test_same_space(self):
        S = space(discrete_metric(AB))
        holds, (f, g) = same_type_search(S, S)
        assert holds and f.assignment == (0, 0)  # the first map in lexicographic order

    def test_discrete_spaces(self):
        holds, (f, g) = same_type_search(space(discrete_metric(AB)), space(discrete_metric(ABC)))
        assert holds and f.assignment == (0, 0) and g.assignment == (0, 0, 0)

    def test_singleton_and_discrete(self):
        one = Carrier(("a",))
        holds, _ = same_type_search(space(zero_map(one)), space(discrete_metric(UV)))
        assert holds

    def test_bound(self):
        S = space(discrete_metric(ABC))
        with pytest.raises(SearchBoundExceeded):
            same_type_search(S, S, bound=10)

    def test_env_bound(self, monkeypatch):
        monkeypatch.setenv("REALSTRUCT_MAX_SEARCH", "5")
        with pytest.raises(SearchBoundExceeded):
            same_type_search(space(discrete_metric(AB)), space(discrete_metric(ABC)))
