"""Real spaces held by their generators, and initial/subspace/product spaces.

A real structure is the set of all maps absorbed by a generating family,
which is uncountable, so a ``RealSpace`` keeps only the generators and
answers membership queries.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product as cartesian
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .core import Carrier, DistMap, MapFamily, PointSet, pullback
from .generate import delta_local_filter, topology_from_family
from .preorders import Absorber, PreorderKind, check_domain
from .validation import check_family, check_map

__all__ = [
    "KindMismatch",
    "NotAMember",
    "ProductTooLarge",
    "RealSpace",
    "RealStructure",
    "generator_extend",
    "initial_family",
    "subspace_family",
    "product_family",
    "DEFAULT_PRODUCT_BOUND",
]

DEFAULT_PRODUCT_BOUND = 64


class KindMismatch(ValueError):
    pass


class NotAMember(ValueError):
    pass


class ProductTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class RealSpace:
    carrier: Carrier
    generators: MapFamily
    kind: PreorderKind

    def __post_init__(self):
        object.__setattr__(self, "kind", PreorderKind.of(self.kind))
        if self.generators.carrier != self.carrier:
            raise ValueError("generators live on another carrier")
        check_domain(self.kind, self.generators.members)

    @classmethod
    def of(cls, generators: MapFamily, kind, pi=None) -> "RealSpace":
        return cls(generators.carrier, generators, PreorderKind.of(kind, pi))

    @cached_property
    def absorber(self) -> Absorber:
        return Absorber(self.kind, self.generators, check=False)

    def member(self, d: DistMap) -> bool:
        return self.absorber.member(d)

    def absorbs(self, P: MapFamily):
        return self.absorber.decide(P)


def generator_extend(S: RealSpace, d: DistMap) -> RealSpace:
    """Add a member of the structure to its generators; the structure is unchanged."""
    if not S.member(d):
        raise NotAMember(f"map {d.name!r} is not in the structure; adding it would change it")
    return RealSpace(S.carrier, S.generators.with_member(d), S.kind)


def initial_family(targets: Sequence, carrier: Carrier | None = None, name: str = "initial") -> RealSpace:
    """Generators pulled back along every ``f_i: X -> Y_i``.

    ``targets`` is a sequence of ``(f_i, S_i)`` pairs with ``S_i`` a
    ``RealSpace`` over ``f_i.codomain``.
    """
    targets = list(targets)
    if not targets:
        raise ValueError("initial_family needs at least one target")
    kinds = {S.kind for _, S in targets}
    if len(kinds) > 1:
        raise KindMismatch(f"targets have different kinds: {sorted(map(str, kinds))}")
    (kind,) = kinds
    if carrier is None:
        carrier = targets[0][0].domain
    members = []
    for f, S in targets:
        if f.domain != carrier:
            raise ValueError(f"map {f.name!r} does not start at the common carrier")
        if f.codomain != S.carrier:
            raise ValueError(f"map {f.name!r} does not land in its target space")
        members.extend(pullback(d, f, f.name) for d in S.generators)
    return RealSpace(carrier, MapFamily(carrier, name, tuple(members)), kind)


def subspace_family(S: RealSpace, A: PointSet) -> RealSpace:
    """Structure induced on ``A`` by the inclusion; generators restricted to A x A."""
    from .morphisms import PointMap

    if A.carrier != S.carrier:
        raise ValueError("subset lives on another carrier")
    if A.mask == 0:
        raise ValueError("subspace of an empty subset")
    sub = Carrier(tuple(A.names))
    incl = PointMap(sub, S.carrier, tuple(A.indices()), name="incl")
    pulled = initial_family([(incl, S)], name=S.generators.name)
    kept = tuple(p.renamed(d.name) for p, d in zip(pulled.generators, S.generators))
    return RealSpace(sub, MapFamily(sub, S.generators.name, kept), S.kind)


def _tuple_name(parts) -> str:
    return "(" + ",".join(parts) + ")"


def product_family(spaces: Sequence[RealSpace], max_size: int = DEFAULT_PRODUCT_BOUND) -> RealSpace:
    """Initial structure for the projections of the cartesian product."""
    from .morphisms import PointMap

    spaces = list(spaces)
    if not spaces:
        raise ValueError("product of no spaces")
    kinds = {S.kind for S in spaces}
    if len(kinds) > 1:
        raise KindMismatch(f"factors have different kinds: {sorted(map(str, kinds))}")
    size = 1
    for S in spaces:
        size *= S.carrier.size
    if size > max_size:
        raise ProductTooLarge(f"product carrier would have {size} points (bound {max_size})")
    index_tuples = list(cartesian(*(range(S.carrier.size) for S in spaces)))
    carrier = Carrier(
        tuple(_tuple_name(S.carrier.elements[i] for S, i in zip(spaces, t)) for t in index_tuples)
    )
    targets = [
        (PointMap(carrier, S.carrier, tuple(t[k] for t in index_tuples), name=f"pi{k}"), S)
        for k, S in enumerate(spaces)
    ]
    return initial_family(targets, carrier=carrier, name="product")


class RealStructure(BaseEstimator):
    """Estimator view of a real structure.

    ``fit`` takes the generating family; ``predict`` answers membership for a
    sequence of maps.

    Parameters
    ----------
    kind : str
        One of the eight preorder identifiers, e.g. ``"lipschitz"``.
    pi : str or None
        Admissible maps: ``"all"``, ``"weak"`` or ``"pseudo"``. ``None``
        picks the kind's default.
    """

    def __init__(self, kind="topological", pi=None):
        self.kind = kind
        self.pi = pi

    def fit(self, P, y=None):
        P = check_family(P)
        self.kind_ = PreorderKind.of(self.kind, self.pi)
        self.space_ = RealSpace(P.carrier, P, self.kind_)
        self.absorber_ = self.space_.absorber
        self.carrier_ = P.carrier
        self.n_generators_ = len(P)
        return self

    def predict(self, maps) -> np.ndarray:
        check_is_fitted(self, "space_")
        if isinstance(maps, DistMap):
            maps = [maps]
        return np.array(
            [self.absorber_.member(check_map(d, self.carrier_)) for d in maps], dtype=bool
        )

    def absorbs(self, P):
        """``(verdict, witness)`` for whether the fitted generators absorb ``P``."""
        check_is_fitted(self, "space_")
        return self.absorber_.decide(check_family(P, self.carrier_))

    def extend(self, d: DistMap) -> "RealStructure":
        check_is_fitted(self, "space_")
        extended = generator_extend(self.space_, d)
        return type(self)(**self.get_params()).fit(extended.generators)

    @property
    def topology_(self):
        check_is_fitted(self, "space_")
        return topology_from_family(self.space_.generators)

    @property
    def filter_(self):
        check_is_fitted(self, "space_")
        return delta_local_filter(self.space_.generators)
