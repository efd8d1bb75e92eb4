"""JSON documents: instances, topologies and point maps.

Instance::

    {"carrier": ["a", "b"],
     "maps": {"d": [["0", "1"], ["1", "0"]]},
     "families": {"P": ["d"]}}

Rationals are strings ``"p"`` or ``"p/q"``; output is always in lowest
terms. Topology::

    {"carrier": ["a", "b"], "opens": [[], ["b"], ["a", "b"]]}

Point map::

    {"map": {"a": "u", "b": "w"}}
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping

from .core import Carrier, DistMap, MapFamily, parse_rational
from .generate import MalformedTopology, Topology

__all__ = [
    "InstanceError",
    "Instance",
    "parse_instance",
    "load_instance",
    "instance_document",
    "dumps",
    "topology_document",
    "parse_topology",
    "parse_point_map",
]


class InstanceError(ValueError):
    """A document is well-formed JSON but not a valid instance."""


def _no_duplicates(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise InstanceError(f"duplicate name {key!r}")
        out[key] = value
    return out


def _loads(text: str):
    try:
        return json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"not valid JSON: {exc}") from None


def dumps(doc) -> str:
    """Canonical text form used for every report and file we write."""
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


@dataclass(frozen=True)
class Instance:
    carrier: Carrier
    maps: Mapping[str, DistMap] = field(default_factory=dict)
    families: Mapping[str, MapFamily] = field(default_factory=dict)

    def family(self, name: str) -> MapFamily:
        try:
            return self.families[name]
        except KeyError:
            raise InstanceError(f"unknown family {name!r}") from None

    def map(self, name: str) -> DistMap:
        try:
            return self.maps[name]
        except KeyError:
            raise InstanceError(f"unknown map {name!r}") from None

    def to_document(self) -> dict:
        return instance_document(self.carrier, self.maps.values(), self.families.values())


def _carrier(doc) -> Carrier:
    names = doc.get("carrier") if isinstance(doc, dict) else None
    if not isinstance(names, list) or not names:
        raise InstanceError("'carrier' must be a non-empty list of names")
    if not all(isinstance(x, str) for x in names):
        raise InstanceError("carrier element names must be strings")
    try:
        return Carrier(tuple(names))
    except ValueError as exc:
        raise InstanceError(str(exc)) from None


def parse_instance(text: str) -> Instance:
    doc = _loads(text)
    if not isinstance(doc, dict):
        raise InstanceError("instance must be a JSON object")
    unknown = set(doc) - {"carrier", "maps", "families"}
    if unknown:
        raise InstanceError(f"unknown keys {sorted(unknown)}")
    carrier = _carrier(doc)
    n = carrier.size
    raw_maps = doc.get("maps", {})
    if not isinstance(raw_maps, dict):
        raise InstanceError("'maps' must be an object")
    maps = {}
    for name, rows in raw_maps.items():
        if not isinstance(rows, list) or len(rows) != n or any(
            not isinstance(r, list) or len(r) != n for r in rows
        ):
            raise InstanceError(f"map {name!r}: shape mismatch, expected {n}x{n}")
        try:
            values = tuple(tuple(parse_rational(v) for v in row) for row in rows)
        except ValueError as exc:
            raise InstanceError(f"map {name!r}: {exc}") from None
        maps[name] = DistMap(carrier, name, values)
    raw_families = doc.get("families", {})
    if not isinstance(raw_families, dict):
        raise InstanceError("'families' must be an object")
    families = {}
    for name, members in raw_families.items():
        if not isinstance(members, list) or not all(isinstance(m, str) for m in members):
            raise InstanceError(f"family {name!r}: members must be a list of map names")
        for m in members:
            if m not in maps:
                raise InstanceError(f"family {name!r}: unknown map {m!r}")
        families[name] = MapFamily(carrier, name, tuple(maps[m] for m in members))
    return Instance(carrier, maps, families)


def load_instance(path) -> Instance:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InstanceError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_instance(text)
    except InstanceError as exc:
        raise InstanceError(f"{path}: {exc}") from None


def instance_document(carrier: Carrier, maps, families=()) -> dict:
    """Canonical instance document; maps and families sorted by name.

    Maps referenced by a family but absent from ``maps`` are added.
    """
    all_maps = {d.name: d for d in maps}
    fams = {}
    for P in families:
        for d in P.members:
            known = all_maps.setdefault(d.name, d)
            if known.values != d.values:
                raise InstanceError(f"two different maps are named {d.name!r}")
        fams[P.name] = [d.name for d in P.members]
    return {
        "carrier": list(carrier.elements),
        "maps": {name: all_maps[name].as_strings() for name in sorted(all_maps)},
        "families": {name: fams[name] for name in sorted(fams)},
    }


def topology_document(T: Topology) -> dict:
    return {
        "carrier": list(T.carrier.elements),
        "opens": [P.names for P in T.opens],
    }


def parse_topology(text: str) -> Topology:
    doc = _loads(text)
    if not isinstance(doc, dict):
        raise InstanceError("topology must be a JSON object")
    unknown = set(doc) - {"carrier", "opens", "minimal_open"}
    if unknown:
        raise InstanceError(f"unknown keys {sorted(unknown)}")
    carrier = _carrier(doc)
    opens = doc.get("opens")
    if not isinstance(opens, list) or not all(
        isinstance(A, list) and all(isinstance(x, str) for x in A) for A in opens
    ):
        raise InstanceError("'opens' must be a list of lists of names")
    for A in opens:
        for x in A:
            if x not in carrier:
                raise InstanceError(f"open set mentions unknown element {x!r}")
    try:
        return Topology.from_opens(carrier, opens)
    except MalformedTopology as exc:
        raise InstanceError(f"malformed topology: {exc}") from None


def parse_point_map(text: str, domain: Carrier, codomain: Carrier, name: str = "f"):
    from .morphisms import PointMap

    doc = _loads(text)
    if not isinstance(doc, dict) or set(doc) != {"map"} or not isinstance(doc["map"], dict):
        raise InstanceError('point map must look like {"map": {...}}')
    try:
        return PointMap.from_dict(domain, codomain, doc["map"], name)
    except ValueError as exc:
        raise InstanceError(str(exc)) from None
