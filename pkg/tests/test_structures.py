import random
from fractions import Fraction

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from realstruct import lab
from realstruct.core import Carrier, MapFamily, PointSet, discrete_metric, scale, zero_map
from realstruct.generate import Topology, topology_from_family
from realstruct.morphisms import PointMap, is_morphism
from realstruct.structures import (
    KindMismatch,
    NotAMember,
    ProductTooLarge,
    RealSpace,
    RealStructure,
    generator_extend,
    initial_family,
    product_family,
    subspace_family,
)
from test_core import AB, M

ABC = Carrier(("a", "b", "c"))


def space(*maps, kind="topological", pi=None):
    return RealSpace.of(MapFamily(maps[0].carrier, "P", maps), kind, pi)


class TestExtend:
    def test_extend_by_generator(self):
        d = discrete_metric(AB, "d")
        S = space(d)
        E = generator_extend(S, d)
        assert E.generators.names == ["d", "d"]
        assert E.member(M([["0", "1"], ["1", "1"]])) == S.member(M([["0", "1"], ["1", "1"]]))

    def test_lipschitz_double(self):
        d = discrete_metric(ABC, "d")
        S = space(d, kind="lipschitz")
        E = generator_extend(S, scale(d, 2))
        rng = random.Random(0)
        for _ in range(100):
            p = lab.random_map(rng, ABC)
            assert S.member(p) == E.member(p)

    def test_topological_sierpinski_plus_zero(self):
        S = space(M([["1", "1"], ["1", "0"]]))
        E = generator_extend(S, zero_map(AB))
        assert topology_from_family(E.generators) == topology_from_family(S.generators)

    def test_non_member_rejected(self):
        S = space(zero_map(AB), kind="lipschitz")
        with pytest.raises(NotAMember):
            generator_extend(S, discrete_metric(AB))


class TestInitial:
    def test_identity(self):
        S = space(discrete_metric(ABC, "d"))
        I = initial_family([(PointMap.identity(ABC), S)])
        assert [d.values for d in I.generators] == [d.values for d in S.generators]

    def test_constant(self):
        d = M([["1", "2", "3"], ["2", "0", "1"], ["3", "1", "2"]], ABC)
        S = space(d)
        I = initial_family([(PointMap.constant(AB, ABC, "c"), S)])
        assert I.generators[0].values == ((2, 2), (2, 2))

    def test_maps_are_morphisms(self):
        rng = random.Random(3)
        for _ in range(50):
            X = lab.random_carrier(rng)
            targets = []
            for _ in range(rng.randint(1, 2)):
                Y = lab.random_carrier(rng)
                S = RealSpace.of(lab.random_family(rng, Y, "all", "Q"), "delta-local")
                f = PointMap(X, Y, tuple(rng.randrange(Y.size) for _ in range(X.size)), f"f{len(targets)}")
                targets.append((f, S))
            I = initial_family(targets, carrier=X)
            for f, S in targets:
                assert is_morphism(f, I, S).holds

    def test_kind_mismatch(self):
        S1, S2 = space(discrete_metric(AB)), space(discrete_metric(AB), kind="lipschitz")
        ident = PointMap.identity(AB)
        with pytest.raises(KindMismatch):
            initial_family([(ident, S1), (ident, S2)])


class TestSubspace:
    def test_whole_set(self):
        S = space(discrete_metric(ABC, "d"))
        sub = subspace_family(S, PointSet.of(ABC, ["a", "b", "c"]))
        assert sub.generators[0].values == S.generators[0].values
        assert sub.generators.names == ["d"]

    def test_discrete_restriction(self):
        sub = subspace_family(space(discrete_metric(ABC, "d")), PointSet.of(ABC, ["a", "b"]))
        assert sub.carrier == AB and sub.generators[0].values == discrete_metric(AB).values

    def test_inclusion_is_morphism(self):
        S = space(M([["0", "1", "2"], ["1", "0", "1"], ["2", "1", "0"]], ABC), kind="strong-delta-local")
        sub = subspace_family(S, PointSet.of(ABC, ["a", "c"]))
        incl = PointMap(sub.carrier, ABC, (0, 2))
        assert is_morphism(incl, sub, S).holds

    def test_empty_subset(self):
        with pytest.raises(ValueError):
            subspace_family(space(discrete_metric(AB)), PointSet.of(AB, []))


class TestProduct:
    def test_single_factor(self):
        S = space(discrete_metric(AB, "d"))
        Pr = product_family([S])
        assert Pr.carrier.elements == ("(a)", "(b)")
        assert Pr.generators[0].values == S.generators[0].values

    def test_singletons(self):
        one = Carrier(("x",))
        Pr = product_family([space(zero_map(one)), space(zero_map(one))])
        assert Pr.carrier.size == 1 and all(d.carrier.size == 1 for d in Pr.generators)

    def test_discrete_factors(self):
        Pr = product_family([space(discrete_metric(AB)), space(discrete_metric(AB))])
        assert Pr.carrier.elements == ("(a,a)", "(a,b)", "(b,a)", "(b,b)")
        assert topology_from_family(Pr.generators) == Topology.discrete(Pr.carrier)

    def test_projections_are_morphisms(self):
        S1, S2 = space(M([["1", "1"], ["1", "0"]])), space(discrete_metric(ABC))
        Pr = product_family([S1, S2])
        for k, S in enumerate((S1, S2)):
            proj = PointMap(Pr.carrier, S.carrier,
                            tuple(S.carrier.index(e.strip("()").split(",")[k]) for e in Pr.carrier.elements))
            assert is_morphism(proj, Pr, S).holds

    def test_bound(self):
        S = space(discrete_metric(ABC))
        with pytest.raises(ProductTooLarge):
            product_family([S, S, S, S], max_size=64)


class TestEstimator:
    def test_params(self):
        est = RealStructure(kind="lipschitz", pi="pseudo")
        assert est.get_params() == {"kind": "lipschitz", "pi": "pseudo"}
        assert clone(est).get_params() == est.get_params()

    def test_fit_predict(self):
        d = discrete_metric(AB, "d")
        est = RealStructure(kind="lipschitz").fit(MapFamily(AB, "P", (d,)))
        out = est.predict([scale(d, 2), zero_map(AB), M([["1", "1"], ["1", "0"]])])
        assert out.dtype == bool and out.tolist() == [True, True, False]
        assert est.n_generators_ == 1 and est.kind_.kind.value == "lipschitz"

    def test_accepts_sequences(self):
        est = RealStructure().fit([M([["1", "1"], ["1", "0"]])])
        assert est.topology_ == Topology.from_opens(AB, [[], ["b"], ["a", "b"]])
        assert np.array_equal(est.predict(zero_map(AB)), [True])

    def test_not_fitted(self):
        with pytest.raises(NotFittedError):
            RealStructure().predict([zero_map(AB)])

    def test_wrong_carrier(self):
        est = RealStructure().fit([discrete_metric(AB)])
        with pytest.raises(ValueError):
            est.predict([discrete_metric(ABC)])

    def test_extend_keeps_params(self):
        d = discrete_metric(AB, "d")
        est = RealStructure(kind="uniform").fit([d])
        ext = est.extend(scale(d, Fraction(1, 2)))
        assert ext.n_generators_ == 2 and ext.get_params() == est.get_params()
