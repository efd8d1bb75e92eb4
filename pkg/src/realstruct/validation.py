"""Input checks shared by the estimator API and the command line."""
from __future__ import annotations

from .core import Carrier, CarrierMismatch, DistMap, MapFamily

__all__ = ["check_family", "check_map", "check_same_carrier"]


def check_same_carrier(*objs) -> Carrier:
    carriers = [o.carrier for o in objs]
    for c in carriers[1:]:
        if c != carriers[0]:
            raise CarrierMismatch(f"carrier mismatch: {list(carriers[0])} vs {list(c)}")
    return carriers[0]


def check_family(P, carrier: Carrier | None = None) -> MapFamily:
    """Accept a MapFamily, a single DistMap, or a non-empty sequence of DistMaps."""
    if isinstance(P, DistMap):
        P = MapFamily(P.carrier, P.name, (P,))
    elif not isinstance(P, MapFamily):
        members = tuple(P)
        if not members:
            if carrier is None:
                raise ValueError("an empty family needs an explicit carrier")
            P = MapFamily(carrier, "P", ())
        else:
            for d in members:
                if not isinstance(d, DistMap):
                    raise TypeError(f"family members must be DistMaps, got {type(d).__name__}")
            P = MapFamily(members[0].carrier, "P", members)
    if carrier is not None and P.carrier != carrier:
        raise CarrierMismatch(f"family {P.name!r} lives on another carrier")
    return P


def check_map(d, carrier: Carrier | None = None) -> DistMap:
    if not isinstance(d, DistMap):
        raise TypeError(f"expected a DistMap, got {type(d).__name__}")
    if carrier is not None and d.carrier != carrier:
        raise CarrierMismatch(f"map {d.name!r} lives on another carrier")
    return d

