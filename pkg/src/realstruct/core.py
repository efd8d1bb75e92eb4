"""Carriers, point/pair sets and exact nonnegative rational maps on X x X.

Sets are bitmasks over the carrier's canonical index order: a ``PointSet``
is one int, a ``PairSet`` is one int per row (bit ``j`` of row ``i`` marks
the pair ``(x_i, x_j)``).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import lcm
from itertools import product
from typing import Callable, Iterable, Iterator, Sequence

__all__ = [
    "CarrierMismatch",
    "Carrier",
    "PointSet",
    "PairSet",
    "DistMap",
    "MapFamily",
    "MapClass",
    "as_rational",
    "parse_rational",
    "format_rational",
    "classify_map",
    "scale",
    "max_combine",
    "dominates",
    "pullback",
    "zero_map",
    "constant_map",
    "discrete_metric",
    "family_max",
]

Matrix = tuple[tuple[Fraction, ...], ...]

_RATIONAL = re.compile(r"^\s*(-?)(\d+)(?:\s*/\s*(-?\d+))?\s*$")


class CarrierMismatch(ValueError):
    """Two objects that must share a carrier do not."""


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` with ``p >= 0`` and ``q >= 1``."""
    if not isinstance(text, str):
        raise ValueError(f"rational must be a string, got {text!r}")
    m = _RATIONAL.match(text)
    if m is None:
        raise ValueError(f"malformed rational {text!r}")
    sign, num, den = m.groups()
    if den is not None and int(den) == 0:
        raise ValueError(f"malformed rational {text!r}: zero denominator")
    if den is not None and int(den) < 0:
        raise ValueError(f"malformed rational {text!r}: negative denominator")
    value = Fraction(int(num), int(den) if den is not None else 1)
    if sign and value != 0:
        raise ValueError(f"negative value {text!r}")
    return value


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and rational strings. Floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not distances")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


@dataclass(frozen=True)
class Carrier:
    """A finite set with a fixed element order."""

    elements: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        elements = tuple(self.elements)
        object.__setattr__(self, "elements", elements)
        if not elements:
            raise ValueError("carrier must have at least one element")
        for e in elements:
            if not isinstance(e, str):
                raise TypeError(f"element names must be text, got {e!r}")
        if len(set(elements)) != len(elements):
            dup = sorted({e for e in elements if elements.count(e) > 1})
            raise ValueError(f"duplicate element names: {dup}")
        object.__setattr__(self, "_index", {e: i for i, e in enumerate(elements)})

    @property
    def size(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __contains__(self, name) -> bool:
        return name in self._index

    @property
    def full_mask(self) -> int:
        return (1 << len(self.elements)) - 1

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown element {name!r}") from None

    def resolve(self, x: str | int) -> int:
        """Element name or index to index."""
        if isinstance(x, int) and not isinstance(x, bool):
            if not 0 <= x < len(self.elements):
                raise KeyError(f"element index {x} out of range")
            return x
        return self.index(x)

    def mask_of(self, names: Iterable[str]) -> int:
        mask = 0
        for name in names:
            mask |= 1 << self.index(name)
        return mask

    def names_of(self, mask: int) -> list[str]:
        return [e for i, e in enumerate(self.elements) if mask >> i & 1]


def _bits(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


@dataclass(frozen=True)
class PointSet:
    carrier: Carrier
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask > self.carrier.full_mask:
            raise ValueError("membership vector does not fit the carrier")

    @classmethod
    def of(cls, carrier: Carrier, names: Iterable[str]) -> "PointSet":
        return cls(carrier, carrier.mask_of(names))

    @property
    def membership(self) -> tuple[bool, ...]:
        return tuple(bool(self.mask >> i & 1) for i in range(self.carrier.size))

    @property
    def names(self) -> list[str]:
        return self.carrier.names_of(self.mask)

    def indices(self) -> list[int]:
        return list(_bits(self.mask))

    def __contains__(self, x) -> bool:
        return bool(self.mask >> self.carrier.resolve(x) & 1)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def issubset(self, other: "PointSet") -> bool:
        _same(self.carrier, other.carrier)
        return self.mask & ~other.mask == 0

    def __le__(self, other: "PointSet") -> bool:
        return self.issubset(other)


@dataclass(frozen=True)
class PairSet:
    carrier: Carrier
    rows: tuple[int, ...]

    def __post_init__(self):
        rows = tuple(self.rows)
        object.__setattr__(self, "rows", rows)
        if len(rows) != self.carrier.size:
            raise ValueError("characteristic matrix does not match carrier size")
        full = self.carrier.full_mask
        if any(r < 0 or r > full for r in rows):
            raise ValueError("characteristic matrix does not match carrier size")

    @classmethod
    def full(cls, carrier: Carrier) -> "PairSet":
        return cls(carrier, (carrier.full_mask,) * carrier.size)

    @classmethod
    def empty(cls, carrier: Carrier) -> "PairSet":
        return cls(carrier, (0,) * carrier.size)

    @classmethod
    def of(cls, carrier: Carrier, pairs: Iterable[tuple[str, str]]) -> "PairSet":
        rows = [0] * carrier.size
        for a, b in pairs:
            rows[carrier.index(a)] |= 1 << carrier.index(b)
        return cls(carrier, tuple(rows))

    def pairs(self) -> list[tuple[str, str]]:
        el = self.carrier.elements
        return [(el[i], el[j]) for i, row in enumerate(self.rows) for j in _bits(row)]

    def __contains__(self, pair) -> bool:
        i, j = (self.carrier.resolve(p) for p in pair)
        return bool(self.rows[i] >> j & 1)

    def __len__(self) -> int:
        return sum(bin(r).count("1") for r in self.rows)

    def issubset(self, other: "PairSet") -> bool:
        _same(self.carrier, other.carrier)
        return all(a & ~b == 0 for a, b in zip(self.rows, other.rows))

    def __le__(self, other: "PairSet") -> bool:
        return self.issubset(other)

    def __and__(self, other: "PairSet") -> "PairSet":
        _same(self.carrier, other.carrier)
        return PairSet(self.carrier, tuple(a & b for a, b in zip(self.rows, other.rows)))

    def section(self, x) -> PointSet:
        """``U[x] = {xi : (xi, x) in U and (x, xi) in U}``."""
        i = self.carrier.resolve(x)
        column = 0
        for k, row in enumerate(self.rows):
            if row >> i & 1:
                column |= 1 << k
        return PointSet(self.carrier, column & self.rows[i])


def _same(a: Carrier, b: Carrier) -> None:
    if a is not b and a != b:
        raise CarrierMismatch(f"carrier mismatch: {list(a.elements)} vs {list(b.elements)}")


@dataclass(frozen=True)
class DistMap:
    """A map ``d: X x X -> Q+`` stored as a matrix, row = first argument."""

    carrier: Carrier
    name: str
    values: Matrix

    def __post_init__(self):
        n = self.carrier.size
        rows = tuple(tuple(as_rational(v) for v in row) for row in self.values)
        if len(rows) != n or any(len(row) != n for row in rows):
            raise ValueError(f"map {self.name!r}: matrix shape does not match carrier size {n}")
        for row in rows:
            for v in row:
                if v < 0:
                    raise ValueError(f"map {self.name!r}: negative value {format_rational(v)}")
        object.__setattr__(self, "values", rows)

    @classmethod
    def from_function(cls, carrier: Carrier, name: str, fn: Callable[[int, int], object]) -> "DistMap":
        n = carrier.size
        return cls(carrier, name, tuple(tuple(fn(i, j) for j in range(n)) for i in range(n)))

    def __call__(self, a, b) -> Fraction:
        return self.values[self.carrier.resolve(a)][self.carrier.resolve(b)]

    @cached_property
    def scaled(self) -> tuple[tuple[int, ...], ...]:
        """Entries times the lcm of their denominators: same order and sums, in ints."""
        return scale_to_ints(self.values)[0]

    @cached_property
    def map_class(self) -> "MapClass":
        return classify_map(self)

    def diagonal(self) -> tuple[Fraction, ...]:
        return tuple(self.values[i][i] for i in range(self.carrier.size))

    def renamed(self, name: str) -> "DistMap":
        return DistMap(self.carrier, name, self.values)

    def distinct_values(self) -> list[Fraction]:
        return sorted({v for row in self.values for v in row})

    def as_strings(self) -> list[list[str]]:
        return [[format_rational(v) for v in row] for row in self.values]


@dataclass(frozen=True)
class MapFamily:
    carrier: Carrier
    name: str
    members: tuple[DistMap, ...] = ()

    def __post_init__(self):
        members = tuple(self.members)
        object.__setattr__(self, "members", members)
        for d in members:
            if d.carrier != self.carrier:
                raise CarrierMismatch(f"family {self.name!r}: member {d.name!r} lives on another carrier")

    def __iter__(self) -> Iterator[DistMap]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __getitem__(self, i) -> DistMap:
        return self.members[i]

    @property
    def names(self) -> list[str]:
        return [d.name for d in self.members]

    def with_member(self, d: DistMap, name: str | None = None) -> "MapFamily":
        return MapFamily(self.carrier, name or self.name, self.members + (d,))

    def union(self, other: "MapFamily", name: str | None = None) -> "MapFamily":
        _same(self.carrier, other.carrier)
        return MapFamily(self.carrier, name or self.name, self.members + other.members)

    def subfamily(self, indices: Sequence[int], name: str | None = None) -> "MapFamily":
        return MapFamily(self.carrier, name or self.name, tuple(self.members[i] for i in indices))


@dataclass(frozen=True)
class MapClass:
    symmetric: bool
    triangle: bool
    diagonal_zero_points: PointSet
    classification: str

    def to_dict(self) -> dict:
        return {
            "classification": self.classification,
            "diagonal_zero_points": self.diagonal_zero_points.names,
            "symmetric": self.symmetric,
            "triangle": self.triangle,
        }


GENERAL = "general"
WEAK_PSEUDO_METRIC = "weak-pseudo-metric"
PSEUDO_METRIC = "pseudo-metric"


def scale_to_ints(values) -> tuple[tuple[tuple[int, ...], ...], int]:
    """``(integer matrix, common denominator)`` for a rational matrix."""
    den = 1
    for row in values:
        for v in row:
            den = lcm(den, v.denominator)
    return tuple(tuple(v.numerator * (den // v.denominator) for v in row) for row in values), den


def classify_map(d: DistMap) -> MapClass:
    if "map_class" in d.__dict__:
        return d.__dict__["map_class"]
    v = d.scaled
    n = d.carrier.size
    symmetric = all(v[i][j] == v[j][i] for i in range(n) for j in range(i + 1, n))
    triangle = all(
        v[i][j] <= v[i][k] + v[k][j] for i, j, k in product(range(n), repeat=3)
    )
    zeros = 0
    for i in range(n):
        if v[i][i] == 0:
            zeros |= 1 << i
    if symmetric and triangle and zeros == d.carrier.full_mask:
        label = PSEUDO_METRIC
    elif symmetric and triangle and zeros:
        label = WEAK_PSEUDO_METRIC
    else:
        label = GENERAL
    return MapClass(symmetric, triangle, PointSet(d.carrier, zeros), label)


def scale(d: DistMap, alpha) -> DistMap:
    alpha = as_rational(alpha)
    if alpha <= 0:
        raise ValueError(f"scale factor must be positive, got {alpha}")
    return DistMap(
        d.carrier,
        f"{format_rational(alpha)}·{d.name}",
        tuple(tuple(alpha * x for x in row) for row in d.values),
    )


def max_combine(d1: DistMap, d2: DistMap, name: str | None = None) -> DistMap:
    _same(d1.carrier, d2.carrier)
    return DistMap(
        d1.carrier,
        name or f"{d1.name}∨{d2.name}",
        tuple(tuple(max(a, b) for a, b in zip(r1, r2)) for r1, r2 in zip(d1.values, d2.values)),
    )


def dominates(d1: DistMap, d2: DistMap) -> bool:
    """True iff ``d1 <= d2`` entrywise."""
    _same(d1.carrier, d2.carrier)
    return all(a <= b for r1, r2 in zip(d1.values, d2.values) for a, b in zip(r1, r2))


def pullback(d: DistMap, f, label: str = "f") -> DistMap:
    """``(x1, x2) -> d(f(x1), f(x2))`` for a point map ``f: X -> Y``.

    ``f`` is anything with ``domain``, ``codomain`` and an index
    ``assignment`` (see ``morphisms.PointMap``).
    """
    _same(d.carrier, f.codomain)
    a = f.assignment
    v = d.values
    n = f.domain.size
    return DistMap(
        f.domain,
        f"{d.name}∘{label}",
        tuple(tuple(v[a[i]][a[j]] for j in range(n)) for i in range(n)),
    )


def zero_map(carrier: Carrier, name: str = "0") -> DistMap:
    return constant_map(carrier, 0, name)


def constant_map(carrier: Carrier, value, name: str | None = None) -> DistMap:
    value = as_rational(value)
    n = carrier.size
    return DistMap(carrier, name or format_rational(value), ((value,) * n,) * n)


def discrete_metric(carrier: Carrier, name: str = "discrete") -> DistMap:
    return DistMap.from_function(carrier, name, lambda i, j: 0 if i == j else 1)


def family_max(P: MapFamily, indices: Sequence[int] | None = None) -> Matrix:
    """Entrywise max over (a subfamily of) ``P``; the empty max is the zero map."""
    n = P.carrier.size
    members = P.members if indices is None else [P.members[i] for i in indices]
    if not members:
        return ((Fraction(0),) * n,) * n
    return tuple(
        tuple(max(d.values[i][j] for d in members) for j in range(n)) for i in range(n)
    )
