"""Weak pseudo-metrics realising a given finite topology, and topology enumeration.

For each point x let ``d_x(u, v) = 0`` when u and v both lie in ``m(x)``
and 1 otherwise. Each ``d_x`` is symmetric and vanishes at ``(x, x)``. The
triangle inequality holds because a value 1 on the left forces one endpoint
out of ``m(x)``, and that endpoint already contributes 1 on the right.

The generated topology is the original one. For a point y,
``d_x(y, y) = 0`` iff ``y ∈ m(x)``, in which case the neighbourhood of y
cut out by ``d_x`` is ``m(x)``; otherwise the threshold is 1 and it is
all of X. Hence ``N(y)`` is the intersection of the ``m(x)`` containing
y, which is ``m(y)`` by nesting, and ``m(y)`` is already closed under N.
"""
from __future__ import annotations

from .core import Carrier, DistMap, MapFamily
from .generate import Topology

__all__ = ["realize_topology", "enumerate_topologies", "MAX_ENUMERATION", "TOPOLOGY_COUNTS"]

MAX_ENUMERATION = 4
# labelled topologies on n points, n = 0..5
TOPOLOGY_COUNTS = (1, 1, 4, 29, 355, 6942)


def realize_topology(T: Topology, name: str = "realized") -> MapFamily:
    if not isinstance(T, Topology):
        raise TypeError(f"expected a Topology, got {type(T).__name__}")
    car = T.carrier
    members = []
    for x, m in enumerate(T.minimal_open_masks):
        members.append(
            DistMap.from_function(
                car,
                f"d_{car.elements[x]}",
                lambda u, v, m=m: 0 if (m >> u & 1 and m >> v & 1) else 1,
            )
        )
    return MapFamily(car, name, tuple(members))


def _default_carrier(n: int) -> Carrier:
    names = "abcdefghijklmnopqrstuvwxyz"
    return Carrier(tuple(names[i] for i in range(n)) if n <= 26 else tuple(f"x{i}" for i in range(n)))


def enumerate_topologies(n: int, carrier: Carrier | None = None, allow_large: bool = False) -> list[Topology]:
    """All labelled topologies on an n-point carrier, ordered by minimal open sets.

    Each topology corresponds to one nested assignment ``x -> m(x)``; the
    assignment is built point by point and pruned as soon as nesting breaks.
    ``n = 5`` (6942 topologies) needs ``allow_large=True``.
    """
    limit = 5 if allow_large else MAX_ENUMERATION
    if not isinstance(n, int) or isinstance(n, bool) or not 1 <= n <= limit:
        raise ValueError(f"n must be an integer in 1..{limit}, got {n!r}")
    if carrier is None:
        carrier = _default_carrier(n)
    elif carrier.size != n:
        raise ValueError("carrier size does not match n")
    full = (1 << n) - 1
    choices = [[m for m in range(full + 1) if m >> x & 1] for x in range(n)]
    found = []

    def consistent(assigned: list[int]) -> bool:
        k = len(assigned) - 1
        mk = assigned[k]
        for y, my in enumerate(assigned):
            if mk >> y & 1 and my & ~mk:
                return False
            if my >> k & 1 and mk & ~my:
                return False
        return True

    def extend(assigned: list[int]) -> None:
        if len(assigned) == n:
            found.append(tuple(assigned))
            return
        for m in choices[len(assigned)]:
            assigned.append(m)
            if consistent(assigned):
                extend(assigned)
            assigned.pop()

    extend([])
    found.sort()
    return [Topology(carrier, ms) for ms in found]
