"""Delta-local filters and topologies generated by families of maps.

Finite-carrier reduction used throughout: for a map ``d`` and a point ``x``
the prebase sets ``{d < eps}`` with ``eps > d(x, x)`` shrink as ``eps``
decreases, and since ``d`` takes finitely many values they stabilise at
``{d <= d(x, x)}`` once ``eps`` drops below the next value above
``d(x, x)``. That set belongs to the generated filter and lies inside every
prebase set, so each principal filter is represented by its minimum:

* ``M_x = ∩_d {(x1, x2) : d(x1, x2) <= d(x, x)}`` for the filter on X x X,
* ``N(x) = ∩_d {xi : d(xi, x) <= d(x, x) and d(x, xi) <= d(x, x)}`` for the
  neighbourhood filter on X.

A set ``A`` is open iff ``N(a) ⊆ A`` for every ``a ∈ A``; the smallest open
set ``m(x)`` containing ``x`` is the closure of ``{x}`` under ``N``.

For a filter given by its minima, ``A ∈ F[a]`` iff ``M_a[a] ⊆ A``: any
superset ``A`` of ``M_a[a]`` is the section at ``a`` of
``M_a ∪ {(xi, a), (a, xi) : xi ∈ A}``, which is itself in ``F_a``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import Carrier, CarrierMismatch, DistMap, MapFamily, PairSet, PointSet, _bits

__all__ = [
    "MalformedFilter",
    "MalformedTopology",
    "DeltaLocalFilter",
    "Topology",
    "entourage_rows",
    "minimal_entourage",
    "delta_local_filter",
    "neighbourhood_masks",
    "topology_from_family",
    "topology_from_filter",
    "topology_from_neighbourhoods",
    "minimal_open",
    "is_topology",
]


class MalformedFilter(ValueError):
    pass


class MalformedTopology(ValueError):
    pass


def entourage_rows(d: DistMap, x: int) -> list[int]:
    """Rows of ``{(x1, x2) : d(x1, x2) <= d(x, x)}``."""
    v = d.scaled
    t = v[x][x]
    rows = []
    for row in v:
        mask = 0
        for j, value in enumerate(row):
            if value <= t:
                mask |= 1 << j
        rows.append(mask)
    return rows


def _entourage(P: MapFamily, x: int) -> tuple[int, ...]:
    n = P.carrier.size
    full = P.carrier.full_mask
    rows = [full] * n
    for d in P.members:
        for i, r in enumerate(entourage_rows(d, x)):
            rows[i] &= r
    return tuple(rows)


def minimal_entourage(P: MapFamily, x) -> PairSet:
    """The minimum of the filter ``F_x(P)`` on X x X."""
    i = P.carrier.resolve(x)
    return PairSet(P.carrier, _entourage(P, i))


@dataclass(frozen=True)
class DeltaLocalFilter:
    """``F = ∪_x F_x``, each principal ``F_x`` stored by its minimum ``M_x``."""

    carrier: Carrier
    minimal_entourage: tuple[PairSet, ...]

    def __post_init__(self):
        ms = tuple(self.minimal_entourage)
        object.__setattr__(self, "minimal_entourage", ms)
        if len(ms) != self.carrier.size:
            raise MalformedFilter("need one minimal entourage per point")
        for x, m in enumerate(ms):
            if m.carrier != self.carrier:
                raise CarrierMismatch("entourage lives on another carrier")
            if not m.rows[x] >> x & 1:
                raise MalformedFilter(
                    f"({self.carrier.elements[x]}, {self.carrier.elements[x]}) "
                    "is missing from its own minimal entourage"
                )

    def entourage(self, x) -> PairSet:
        return self.minimal_entourage[self.carrier.resolve(x)]

    def contains(self, U: PairSet) -> bool:
        """``U ∈ F`` iff some ``M_x ⊆ U``."""
        return any(m.issubset(U) for m in self.minimal_entourage)

    def contains_at(self, x, U: PairSet) -> bool:
        return self.entourage(x).issubset(U)


def delta_local_filter(P: MapFamily) -> DeltaLocalFilter:
    return DeltaLocalFilter(
        P.carrier,
        tuple(PairSet(P.carrier, _entourage(P, x)) for x in range(P.carrier.size)),
    )


def neighbourhood_masks(P: MapFamily) -> list[int]:
    """``N(x)`` for every x, as masks."""
    n = P.carrier.size
    out = [P.carrier.full_mask] * n
    for d in P.members:
        v = d.scaled
        for x in range(n):
            t = v[x][x]
            row = v[x]
            mask = 0
            for k in range(n):
                if row[k] <= t and v[k][x] <= t:
                    mask |= 1 << k
            out[x] &= mask
    return out


def _closure(neigh: Sequence[int]) -> tuple[int, ...]:
    n = len(neigh)
    result = []
    for x in range(n):
        reach = 1 << x
        frontier = reach
        while frontier:
            grow = 0
            for k in _bits(frontier):
                grow |= neigh[k]
            frontier = grow & ~reach
            reach |= grow
        result.append(reach)
    return tuple(result)


@dataclass(frozen=True)
class Topology:
    """A finite topology stored by its minimal open sets ``m(x)``."""

    carrier: Carrier
    minimal_open_masks: tuple[int, ...]

    def __post_init__(self):
        ms = tuple(self.minimal_open_masks)
        object.__setattr__(self, "minimal_open_masks", ms)
        if len(ms) != self.carrier.size:
            raise MalformedTopology("need one minimal open set per point")
        for x, m in enumerate(ms):
            if not m >> x & 1:
                raise MalformedTopology(f"{self.carrier.elements[x]!r} is not in its minimal open set")
            for y in _bits(m):
                if ms[y] & ~m:
                    raise MalformedTopology(
                        f"minimal open sets are not nested at "
                        f"{self.carrier.elements[y]!r} ∈ m({self.carrier.elements[x]!r})"
                    )

    @classmethod
    def from_opens(cls, carrier: Carrier, opens: Iterable) -> "Topology":
        """Build from an explicit open-set family (names or PointSets)."""
        masks = set()
        for A in opens:
            if isinstance(A, PointSet):
                if A.carrier != carrier:
                    raise CarrierMismatch("open set lives on another carrier")
                masks.add(A.mask)
            else:
                masks.add(carrier.mask_of(A))
        if not _closed_family(masks, carrier.full_mask):
            raise MalformedTopology("open sets do not form a topology")
        minimal = []
        for x in range(carrier.size):
            m = carrier.full_mask
            for A in masks:
                if A >> x & 1:
                    m &= A
            minimal.append(m)
        return cls(carrier, tuple(minimal))

    @classmethod
    def discrete(cls, carrier: Carrier) -> "Topology":
        return cls(carrier, tuple(1 << i for i in range(carrier.size)))

    @classmethod
    def indiscrete(cls, carrier: Carrier) -> "Topology":
        return cls(carrier, (carrier.full_mask,) * carrier.size)

    @property
    def minimal_open(self) -> tuple[PointSet, ...]:
        return tuple(PointSet(self.carrier, m) for m in self.minimal_open_masks)

    def is_open_mask(self, mask: int) -> bool:
        ms = self.minimal_open_masks
        return all(ms[a] & ~mask == 0 for a in _bits(mask))

    def is_open(self, A) -> bool:
        if isinstance(A, PointSet):
            if A.carrier != self.carrier:
                raise CarrierMismatch("set lives on another carrier")
            return self.is_open_mask(A.mask)
        return self.is_open_mask(self.carrier.mask_of(A))

    def open_masks(self) -> list[int]:
        """All open sets, sorted by size then by canonical index order."""
        found = {0}
        for m in self.minimal_open_masks:
            found |= {A | m for A in found}
        return sorted(found, key=_set_key)

    @property
    def opens(self) -> list[PointSet]:
        return [PointSet(self.carrier, A) for A in self.open_masks()]

    def issubset(self, other: "Topology") -> bool:
        """Every open set of ``self`` is open in ``other``."""
        if self.carrier != other.carrier:
            raise CarrierMismatch("topologies live on different carriers")
        return all(other.is_open_mask(m) for m in self.minimal_open_masks)


def _set_key(mask: int) -> tuple:
    return (bin(mask).count("1"), tuple(_bits(mask)))


def topology_from_neighbourhoods(carrier: Carrier, neigh: Sequence[int]) -> Topology:
    return Topology(carrier, _closure(neigh))


def topology_from_family(P: MapFamily) -> Topology:
    return Topology(P.carrier, _closure(neighbourhood_masks(P)))


def topology_from_filter(F: DeltaLocalFilter) -> Topology:
    neigh = [F.minimal_entourage[x].section(x).mask for x in range(F.carrier.size)]
    return Topology(F.carrier, _closure(neigh))


def minimal_open(T: Topology, x) -> PointSet:
    return PointSet(T.carrier, T.minimal_open_masks[T.carrier.resolve(x)])


def _closed_family(masks: set[int], full: int) -> bool:
    if 0 not in masks or full not in masks:
        return False
    for a in masks:
        for b in masks:
            if a | b not in masks or a & b not in masks:
                return False
    return True


def is_topology(opens: Sequence[PointSet], carrier: Carrier | None = None) -> bool:
    """Contains ∅ and X and is closed under pairwise union and intersection.

    Without an explicit ``carrier`` the family's own carrier is used; an
    empty family is never a topology.
    """
    if carrier is None:
        if not opens:
            return False
        carrier = opens[0].carrier
    for A in opens:
        if A.carrier != carrier:
            raise CarrierMismatch("open sets live on different carriers")
    return _closed_family({A.mask for A in opens}, carrier.full_mask)
