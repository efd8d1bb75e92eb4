"""Morphisms between real spaces, independent oracles, and same-type search."""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Mapping, Optional

from .core import Carrier, MapFamily, pullback
from .generate import Topology
from .preorders import AbsorptionWitness, Kind, PER_MEMBER, PreorderKind
from .structures import KindMismatch, RealSpace

__all__ = [
    "PointMap",
    "MorphismResult",
    "SearchBoundExceeded",
    "is_morphism",
    "continuity_oracle",
    "epsilon_morphism_oracle",
    "same_type_search",
    "compose",
    "DEFAULT_SEARCH_BOUND",
]

DEFAULT_SEARCH_BOUND = 10**6


class SearchBoundExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class PointMap:
    """A total map between carriers, stored as codomain indices."""

    domain: Carrier
    codomain: Carrier
    assignment: tuple[int, ...]
    name: str = "f"

    def __post_init__(self):
        a = tuple(self.assignment)
        object.__setattr__(self, "assignment", a)
        if len(a) != self.domain.size:
            raise ValueError(f"map {self.name!r} is not total on its domain")
        for i in a:
            if not isinstance(i, int) or not 0 <= i < self.codomain.size:
                raise ValueError(f"map {self.name!r} sends a point outside its codomain")

    @classmethod
    def from_dict(cls, domain: Carrier, codomain: Carrier, mapping: Mapping[str, str], name: str = "f") -> "PointMap":
        missing = [x for x in domain.elements if x not in mapping]
        if missing:
            raise ValueError(f"map {name!r} is partial: no image for {missing}")
        extra = [x for x in mapping if x not in domain]
        if extra:
            raise ValueError(f"map {name!r} has unknown domain points {extra}")
        images = []
        for x in domain.elements:
            y = mapping[x]
            if y not in codomain:
                raise ValueError(f"map {name!r} sends {x!r} to {y!r}, outside the codomain")
            images.append(codomain.index(y))
        return cls(domain, codomain, tuple(images), name)

    @classmethod
    def identity(cls, carrier: Carrier, name: str = "id") -> "PointMap":
        return cls(carrier, carrier, tuple(range(carrier.size)), name)

    @classmethod
    def constant(cls, domain: Carrier, codomain: Carrier, y, name: str = "const") -> "PointMap":
        return cls(domain, codomain, (codomain.resolve(y),) * domain.size, name)

    def __call__(self, x) -> str:
        return self.codomain.elements[self.assignment[self.domain.resolve(x)]]

    def to_dict(self) -> dict:
        return {x: self(x) for x in self.domain.elements}


def compose(g: PointMap, f: PointMap, name: str | None = None) -> PointMap:
    """``g ∘ f``."""
    if f.codomain != g.domain:
        raise ValueError("maps are not composable")
    return PointMap(f.domain, g.codomain, tuple(g.assignment[i] for i in f.assignment),
                    name or f"{g.name}∘{f.name}")


@dataclass(frozen=True)
class MorphismResult:
    holds: bool
    witness: AbsorptionWitness | None
    failing_generator: Optional[str] = None
    outside_domain: Optional[str] = None

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        out = {"holds": self.holds}
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        if self.failing_generator is not None:
            out["failing_generator"] = self.failing_generator
        if self.outside_domain is not None:
            out["outside_domain"] = self.outside_domain
        return out


def _check_pair(f: PointMap, SX: RealSpace, SY: RealSpace) -> None:
    if SX.kind != SY.kind:
        raise KindMismatch(f"spaces have different kinds: {SX.kind} vs {SY.kind}")
    if f.domain != SX.carrier or f.codomain != SY.carrier:
        raise ValueError(f"map {f.name!r} does not go from the first space to the second")


def is_morphism(f: PointMap, SX: RealSpace, SY: RealSpace) -> MorphismResult:
    """Decide whether the generators of SY pulled back along f are absorbed by SX."""
    _check_pair(f, SX, SY)
    pulled = MapFamily(SX.carrier, f"{SY.generators.name}∘{f.name}",
                       tuple(pullback(d, f, f.name) for d in SY.generators))
    for d in pulled:
        # a pulled-back map outside the admissible maps of X cannot be in its structure
        if not SX.kind.admits(d):
            return MorphismResult(False, None, outside_domain=d.name)
    holds, witness = SX.absorber.decide(pulled, check=False)
    failing = None
    if not holds:
        if SX.kind.kind in PER_MEMBER and witness.map is not None:
            failing = witness.map
        else:
            for d in pulled:
                if not SX.absorber.member(d, check=False):
                    failing = d.name
                    break
    return MorphismResult(holds, witness, failing)


def continuity_oracle(f: PointMap, TX: Topology, TY: Topology) -> bool:
    """Preimages of open sets are open: ``f(m_X(x)) ⊆ m_Y(f(x))`` for every x."""
    if f.domain != TX.carrier or f.codomain != TY.carrier:
        raise ValueError(f"map {f.name!r} does not match the topologies' carriers")
    a = f.assignment
    for x, m in enumerate(TX.minimal_open_masks):
        target = TY.minimal_open_masks[a[x]]
        for k in range(TX.carrier.size):
            if m >> k & 1 and not target >> a[k] & 1:
                return False
    return True


# ---------------------------------------------------------------------------
# ε-characterisations, evaluated directly on pairs with strict inequalities.


def _strict_cuts(values, threshold) -> list[Fraction]:
    """Every ε > threshold that can change a strict comparison against ``values``.

    Between two consecutive values the set ``{v < ε}`` is constant, so the
    midpoints, the values themselves and one point past the maximum cover
    every case.
    """
    above = sorted({v for v in values if v > threshold})
    points = [threshold] + above
    cuts = [(lo + hi) / 2 for lo, hi in zip(points, points[1:])]
    cuts += above
    cuts.append(points[-1] + 1)
    return sorted(set(cuts))


def _ball(maps_with_eps, n: int) -> set:
    return {
        (i, j)
        for i in range(n)
        for j in range(n)
        if all(d.values[i][j] < eps for d, eps in maps_with_eps)
    }


def _subfamilies(members):
    for r in range(len(members) + 1):
        yield from combinations(members, r)


def _exists_prebase_inside(PX: MapFamily, x: int, target: set) -> bool:
    """Some finite prebase intersection at x lies inside ``target``."""
    n = PX.carrier.size
    for G in _subfamilies(PX.members):
        candidates = [
            _strict_cuts([v for row in d.values for v in row], d.values[x][x])[:2] for d in G
        ]
        for eps in product(*candidates):
            if _ball(list(zip(G, eps)), n) <= target:
                return True
    return False


def epsilon_morphism_oracle(kind, f: PointMap, PX: MapFamily, PY: MapFamily) -> bool:
    """The ε-characterisations of morphisms for the Δ-local kinds.

    strong-delta-local: for every x, every finite subfamily G of PY and every
    choice of ε_d > d(f(x), f(x)) there are a finite subfamily of PX and
    thresholds ε' > d'(x, x) whose joint strict ball at x is mapped inside
    the strict ball of G.

    delta-local: the same, except the PX-side ball may be centred at any
    point y (the filter is a union over points). For a single generator on
    each side this is the infimum-threshold form.

    Universally quantified ε range over every cut point of a single
    pulled-back generator, and over the tightest cut of each map for joint
    subfamilies. Existentially quantified ε range over the first two cuts
    above the diagonal value (the first is already the tightest choice).
    """
    kind = PreorderKind.of(kind)
    if kind.kind not in (Kind.DELTA_LOCAL, Kind.STRONG_DELTA_LOCAL):
        raise ValueError(f"no ε-oracle for kind {kind.kind}")
    if f.domain != PX.carrier or f.codomain != PY.carrier:
        raise ValueError(f"map {f.name!r} does not match the families' carriers")
    n = PX.carrier.size
    pulled = [pullback(d, f, f.name) for d in PY.members]
    strong = kind.kind is Kind.STRONG_DELTA_LOCAL
    for x in range(n):
        for G in _subfamilies(pulled):
            if not G:
                continue
            if strong and len(G) > 1:
                # a filter contains intersections of its members
                continue
            eps_choices = [
                _strict_cuts([v for row in d.values for v in row], d.values[x][x]) for d in G
            ]
            if len(G) > 1:
                # a smaller joint ball is harder to cover, so the tightest cuts decide
                eps_choices = [cuts[:1] for cuts in eps_choices]
            for eps in product(*eps_choices):
                target = _ball(list(zip(G, eps)), n)
                centres = [x] if strong else range(n)
                if not any(_exists_prebase_inside(PX, y, target) for y in centres):
                    return False
    return True


def _maps(X: Carrier, Y: Carrier, name: str):
    for images in product(range(Y.size), repeat=X.size):
        yield PointMap(X, Y, images, name)


def search_bound() -> int:
    raw = os.environ.get("REALSTRUCT_MAX_SEARCH")
    if raw is None or raw == "":
        return DEFAULT_SEARCH_BOUND
    try:
        bound = int(raw)
    except ValueError:
        raise ValueError(f"REALSTRUCT_MAX_SEARCH must be an integer, got {raw!r}") from None
    if bound < 0:
        raise ValueError("REALSTRUCT_MAX_SEARCH must be nonnegative")
    return bound


def same_type_search(SX: RealSpace, SY: RealSpace, bound: int | None = None):
    """Exhaustive search for morphisms f: X -> Y and g: Y -> X.

    Returns ``(True, (f, g))`` with the lexicographically first morphism in
    each direction, or ``(False, None)``. Raises ``SearchBoundExceeded``
    when ``|Y|^|X| + |X|^|Y|`` exceeds the bound.
    """
    if SX.kind != SY.kind:
        raise KindMismatch(f"spaces have different kinds: {SX.kind} vs {SY.kind}")
    bound = search_bound() if bound is None else bound
    X, Y = SX.carrier, SY.carrier
    space = Y.size**X.size + X.size**Y.size
    if space > bound:
        raise SearchBoundExceeded(f"search space {space} exceeds bound {bound}")
    f = next((h for h in _maps(X, Y, "f") if is_morphism(h, SX, SY).holds), None)
    if f is None:
        return False, None
    g = next((h for h in _maps(Y, X, "g") if is_morphism(h, SY, SX).holds), None)
    if g is None:
        return False, None
    return True, (f, g)
