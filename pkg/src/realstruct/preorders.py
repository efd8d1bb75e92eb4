"""Decision procedures for the absorption preorders, with witnesses.

``absorbs(kind, P1, P)`` decides whether ``P`` absorbs ``P1``, i.e.
``P1 ≺ P``. Every kind reduces to an exact finite check:

topological
    every minimal open set of ``τ(P1)`` is open in ``τ(P)``.
delta-local
    for every x some y has ``M_y(P) ⊆ M_x(P1)``.
strong-delta-local
    ``M_x(P) ⊆ M_x(P1)`` for every x.
lipschitz, quasi-lipschitz
    ``d1 <= α·max(P)`` for some α > 0 exists iff ``max(P) = 0`` forces
    ``d1 = 0`` (zero-coincidence). Using the whole of ``P`` as subfamily
    is never worse, since a larger max only loosens the bound. The ε in the
    quasi-Lipschitz form only indexes α, so the two kinds coincide.
uniform
    ``max(P) <= δ ⇒ d1 <= ε`` for all ε. Taking δ below the least
    positive value of ``max(P)`` leaves only the pairs where ``max(P) = 0``,
    so the condition is zero-coincidence again, with δ independent of ε.
uniform-quasi-lipschitz
    the same δ (called β here) with α = 1.
local-quasi-lipschitz
    zero-coincidence on ``m(x) × m(x)`` for each x, ``m(x)`` the minimal
    ``τ(P)``-open set of x. Any admissible neighbourhood contains ``m(x)``
    and the condition only gets harder on larger sets, so ``m(x)`` is the
    best choice.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional

from .core import (
    GENERAL,
    PSEUDO_METRIC,
    CarrierMismatch,
    DistMap,
    MapFamily,
    PairSet,
    _bits,
    classify_map,
    family_max,
    format_rational,
)
from .generate import _entourage, topology_from_family

__all__ = [
    "Kind",
    "PiDomain",
    "PreorderKind",
    "DomainError",
    "AbsorptionWitness",
    "Absorber",
    "absorbs",
    "zero_coincidence",
    "member",
    "equivalent",
    "validate_witness",
    "check_domain",
    "LIPSCHITZ_TYPE",
    "PER_MEMBER",
]


class Kind(str, Enum):
    TOPOLOGICAL = "topological"
    DELTA_LOCAL = "delta-local"
    STRONG_DELTA_LOCAL = "strong-delta-local"
    LIPSCHITZ = "lipschitz"
    UNIFORM = "uniform"
    QUASI_LIPSCHITZ = "quasi-lipschitz"
    UNIFORM_QUASI_LIPSCHITZ = "uniform-quasi-lipschitz"
    LOCAL_QUASI_LIPSCHITZ = "local-quasi-lipschitz"

    def __str__(self) -> str:
        return self.value


class PiDomain(str, Enum):
    ALL = "all"
    WEAK = "weak"
    PSEUDO = "pseudo"

    def __str__(self) -> str:
        return self.value


PSEUDO_ONLY = frozenset(
    {Kind.UNIFORM, Kind.QUASI_LIPSCHITZ, Kind.UNIFORM_QUASI_LIPSCHITZ, Kind.LOCAL_QUASI_LIPSCHITZ}
)
LIPSCHITZ_TYPE = frozenset(
    {Kind.LIPSCHITZ, Kind.UNIFORM, Kind.QUASI_LIPSCHITZ, Kind.UNIFORM_QUASI_LIPSCHITZ}
)
# kinds whose definition is a conjunction over the absorbed members
PER_MEMBER = LIPSCHITZ_TYPE | {Kind.LOCAL_QUASI_LIPSCHITZ}


class DomainError(ValueError):
    """A map lies outside the admissible set of maps for a preorder."""


@dataclass(frozen=True)
class PreorderKind:
    kind: Kind
    pi: PiDomain

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "pi", PiDomain(self.pi))
        if self.kind in PSEUDO_ONLY and self.pi is not PiDomain.PSEUDO:
            raise DomainError(f"kind {self.kind} is only defined over pseudo-metrics")

    @classmethod
    def of(cls, kind, pi=None) -> "PreorderKind":
        if isinstance(kind, PreorderKind):
            if pi is not None and PiDomain(pi) is not kind.pi:
                return cls(kind.kind, pi)
            return kind
        kind = Kind(kind)
        if pi is None:
            pi = PiDomain.PSEUDO if kind in PSEUDO_ONLY else PiDomain.ALL
        return cls(kind, pi)

    def __str__(self) -> str:
        return f"{self.kind}[{self.pi}]"

    def admits(self, d: DistMap) -> bool:
        if self.pi is PiDomain.ALL:
            return True
        label = d.map_class.classification
        if self.pi is PiDomain.PSEUDO:
            return label == PSEUDO_METRIC
        return label != GENERAL


def check_domain(kind: PreorderKind, maps: Iterable[DistMap]) -> None:
    for d in maps:
        if not kind.admits(d):
            label = classify_map(d).classification
            raise DomainError(f"map {d.name!r} is a {label} map, outside the {kind.pi} domain of {kind.kind}")


def _fmt(value):
    if isinstance(value, Fraction):
        return format_rational(value)
    return value


@dataclass(frozen=True)
class AbsorptionWitness:
    """Existential data behind a verdict; unused fields stay ``None``.

    Positive verdicts carry the constants of the defining inequality
    (``alpha``, ``beta``, ``delta``, ``subfamily``, ``cover``,
    ``neighbourhoods``). Negative verdicts carry the place where the
    definition breaks (``open_set``, ``point``, ``pair``, ``map``).
    """

    kind: Kind
    holds: bool
    alpha: Optional[Fraction] = None
    beta: Optional[Fraction] = None
    delta: Optional[Fraction] = None
    subfamily: Optional[tuple[str, ...]] = None
    cover: Optional[tuple[tuple[str, str], ...]] = None
    neighbourhoods: Optional[tuple[tuple[str, tuple[str, ...]], ...]] = None
    open_set: Optional[tuple[str, ...]] = None
    point: Optional[str] = None
    pair: Optional[tuple[str, str]] = None
    map: Optional[str] = None

    def to_dict(self) -> dict:
        out = {}
        for key in ("alpha", "beta", "delta"):
            value = getattr(self, key)
            if value is not None:
                out[key] = format_rational(value)
        if self.subfamily is not None:
            out["subfamily"] = list(self.subfamily)
        if self.cover is not None:
            out["cover"] = {x: y for x, y in self.cover}
        if self.neighbourhoods is not None:
            out["neighbourhoods"] = {x: list(U) for x, U in self.neighbourhoods}
        if self.open_set is not None:
            out["open_set"] = list(self.open_set)
        if self.point is not None:
            out["point"] = self.point
        if self.pair is not None:
            out["pair"] = list(self.pair)
        if self.map is not None:
            out["map"] = self.map
        return out


def _zero_mask(matrix) -> list[int]:
    rows = []
    for row in matrix:
        mask = 0
        for j, v in enumerate(row):
            if v == 0:
                mask |= 1 << j
        rows.append(mask)
    return rows


def _first_violation(d: DistMap, zero_rows, restrict=None):
    """First pair where the absorbing max vanishes but ``d`` does not."""
    for i, row in enumerate(d.values):
        allowed = zero_rows[i] if restrict is None else zero_rows[i] & restrict[i]
        for j in _bits(allowed):
            if row[j] != 0:
                return i, j
    return None


def _ratio_bound(members, D, restrict=None) -> Fraction:
    """Least α with ``d <= α·D`` on pairs where ``D > 0``; 1 if that is 0."""
    best = Fraction(0)
    n = len(D)
    for d in members:
        v = d.values
        for i in range(n):
            for j in range(n):
                if restrict is not None and not restrict[i] >> j & 1:
                    continue
                if D[i][j] > 0:
                    r = v[i][j] / D[i][j]
                    if r > best:
                        best = r
    return best if best > 0 else Fraction(1)


def _half_min_positive(D) -> Fraction:
    positives = [v for row in D for v in row if v > 0]
    return min(positives) / 2 if positives else Fraction(1)


class Absorber:
    """The absorbing family ``P`` with its per-kind data precomputed.

    Deciding many absorbed families against one ``P`` (membership probes,
    morphism searches) reuses the topology, entourages and max-map.
    """

    def __init__(self, kind, P: MapFamily, check: bool = True):
        self.kind = PreorderKind.of(kind)
        self.P = P
        self.carrier = P.carrier
        if check:
            check_domain(self.kind, P.members)
        k = self.kind.kind
        n = P.carrier.size
        if k is Kind.TOPOLOGICAL or k is Kind.LOCAL_QUASI_LIPSCHITZ:
            self.topology = topology_from_family(P)
        if k is Kind.DELTA_LOCAL or k is Kind.STRONG_DELTA_LOCAL:
            self.entourages = [_entourage(P, x) for x in range(n)]
        if k in PER_MEMBER:
            self.D = family_max(P)
            self.zero_rows = _zero_mask(self.D)

    def decide(self, Pprime: MapFamily, check: bool = True) -> tuple[bool, AbsorptionWitness]:
        if Pprime.carrier != self.carrier:
            raise CarrierMismatch(
                f"families {Pprime.name!r} and {self.P.name!r} live on different carriers"
            )
        if check:
            check_domain(self.kind, Pprime.members)
        k = self.kind.kind
        if k is Kind.TOPOLOGICAL:
            return self._topological(Pprime)
        if k is Kind.DELTA_LOCAL:
            return self._delta_local(Pprime)
        if k is Kind.STRONG_DELTA_LOCAL:
            return self._strong(Pprime)
        if k is Kind.LOCAL_QUASI_LIPSCHITZ:
            return self._local(Pprime)
        return self._lipschitz_type(Pprime)

    def member(self, d: DistMap, check: bool = True) -> bool:
        return self.decide(MapFamily(self.carrier, d.name, (d,)), check=check)[0]

    def _topological(self, Pprime):
        other = topology_from_family(Pprime)
        T = self.topology
        for m in other.minimal_open_masks:
            if not T.is_open_mask(m):
                return False, AbsorptionWitness(
                    Kind.TOPOLOGICAL, False, open_set=tuple(self.carrier.names_of(m))
                )
        return True, AbsorptionWitness(Kind.TOPOLOGICAL, True)

    def _delta_local(self, Pprime):
        el = self.carrier.elements
        cover = []
        for x in range(self.carrier.size):
            target = _entourage(Pprime, x)
            for y, M in enumerate(self.entourages):
                if all(a & ~b == 0 for a, b in zip(M, target)):
                    cover.append((el[x], el[y]))
                    break
            else:
                return False, AbsorptionWitness(Kind.DELTA_LOCAL, False, point=el[x])
        return True, AbsorptionWitness(Kind.DELTA_LOCAL, True, cover=tuple(cover))

    def _strong(self, Pprime):
        el = self.carrier.elements
        for x, M in enumerate(self.entourages):
            target = _entourage(Pprime, x)
            for i, (a, b) in enumerate(zip(M, target)):
                extra = a & ~b
                if extra:
                    j = next(_bits(extra))
                    return False, AbsorptionWitness(
                        Kind.STRONG_DELTA_LOCAL, False, point=el[x], pair=(el[i], el[j])
                    )
        return True, AbsorptionWitness(Kind.STRONG_DELTA_LOCAL, True)

    def _lipschitz_type(self, Pprime):
        k = self.kind.kind
        el = self.carrier.elements
        for d in Pprime.members:
            bad = _first_violation(d, self.zero_rows)
            if bad is not None:
                i, j = bad
                return False, AbsorptionWitness(k, False, pair=(el[i], el[j]), map=d.name)
        sub = tuple(self.P.names)
        if k is Kind.UNIFORM:
            return True, AbsorptionWitness(k, True, delta=_half_min_positive(self.D), subfamily=sub)
        if k is Kind.UNIFORM_QUASI_LIPSCHITZ:
            return True, AbsorptionWitness(
                k, True, alpha=Fraction(1), beta=_half_min_positive(self.D), subfamily=sub
            )
        alpha = _ratio_bound(Pprime.members, self.D)
        return True, AbsorptionWitness(k, True, alpha=alpha, subfamily=sub)

    def _local(self, Pprime):
        k = Kind.LOCAL_QUASI_LIPSCHITZ
        el = self.carrier.elements
        # pairs lying in some m(x) x m(x)
        covered = [0] * self.carrier.size
        for m in self.topology.minimal_open_masks:
            for i in _bits(m):
                covered[i] |= m
        for x, m in enumerate(self.topology.minimal_open_masks):
            square = [m if i_in else 0 for i_in in ((m >> i) & 1 for i in range(self.carrier.size))]
            for d in Pprime.members:
                bad = _first_violation(d, self.zero_rows, square)
                if bad is not None:
                    i, j = bad
                    return False, AbsorptionWitness(
                        k, False, point=el[x], pair=(el[i], el[j]), map=d.name
                    )
        alpha = _ratio_bound(Pprime.members, self.D, covered)
        neighbourhoods = tuple(
            (el[x], tuple(self.carrier.names_of(m)))
            for x, m in enumerate(self.topology.minimal_open_masks)
        )
        return True, AbsorptionWitness(
            k, True, alpha=alpha, subfamily=tuple(self.P.names), neighbourhoods=neighbourhoods
        )


def absorbs(kind, Pprime: MapFamily, P: MapFamily) -> tuple[bool, AbsorptionWitness]:
    """Decide ``Pprime ≺ P`` (``P`` absorbs ``Pprime``)."""
    if Pprime.carrier != P.carrier:
        raise CarrierMismatch(f"families {Pprime.name!r} and {P.name!r} live on different carriers")
    return Absorber(kind, P).decide(Pprime)


def zero_coincidence(Pprime: MapFamily, P: MapFamily, on: PairSet | None = None) -> bool:
    """Wherever every map of ``P`` vanishes on ``on``, every map of ``Pprime`` does too."""
    if Pprime.carrier != P.carrier:
        raise CarrierMismatch(f"families {Pprime.name!r} and {P.name!r} live on different carriers")
    if on is None:
        on = PairSet.full(P.carrier)
    elif on.carrier != P.carrier:
        raise CarrierMismatch("pair set lives on another carrier")
    zero_rows = _zero_mask(family_max(P))
    return all(_first_violation(d, zero_rows, on.rows) is None for d in Pprime.members)


def member(d: DistMap, P: MapFamily, kind) -> bool:
    return absorbs(kind, MapFamily(P.carrier, d.name, (d,)), P)[0]


def equivalent(P: MapFamily, Pprime: MapFamily, kind) -> bool:
    return absorbs(kind, Pprime, P)[0] and absorbs(kind, P, Pprime)[0]


DEFAULT_EPSILONS = (Fraction(1), Fraction(1, 2), Fraction(1, 100))


def validate_witness(
    kind, Pprime: MapFamily, P: MapFamily, w: AbsorptionWitness, epsilons=DEFAULT_EPSILONS
) -> bool:
    """Plug a positive witness back into the defining inequality over all pairs.

    ε-indexed kinds are checked at every ε in ``epsilons``. Kinds without
    numeric constants are re-checked from their set-level definition.
    """
    kind = PreorderKind.of(kind)
    k = kind.kind
    if not w.holds:
        return False
    car = P.carrier
    n = car.size
    pairs = [(i, j) for i in range(n) for j in range(n)]
    if w.subfamily is not None:
        by_name = {d.name: d for d in P.members}
        sub = [by_name[name] for name in w.subfamily]
    else:
        sub = list(P.members)
    D = family_max(MapFamily(car, "sub", tuple(sub)))
    if k in (Kind.LIPSCHITZ, Kind.QUASI_LIPSCHITZ):
        return w.alpha > 0 and all(
            d.values[i][j] <= w.alpha * D[i][j] for d in Pprime for i, j in pairs
        )
    if k is Kind.UNIFORM:
        return w.delta > 0 and all(
            d.values[i][j] <= eps
            for eps in epsilons
            for d in Pprime
            for i, j in pairs
            if D[i][j] <= w.delta
        )
    if k is Kind.UNIFORM_QUASI_LIPSCHITZ:
        return w.alpha > 0 and w.beta > 0 and all(
            d.values[i][j] <= w.alpha * D[i][j] + eps
            for eps in epsilons
            for d in Pprime
            for i, j in pairs
            if D[i][j] <= w.beta
        )
    if k is Kind.LOCAL_QUASI_LIPSCHITZ:
        T = topology_from_family(P)
        for x, names in w.neighbourhoods:
            U = car.mask_of(names)
            # the neighbourhood must contain an open set around x
            if T.minimal_open_masks[car.index(x)] & ~U:
                return False
            idx = list(_bits(U))
            for eps in epsilons:
                for d in Pprime:
                    for i in idx:
                        for j in idx:
                            if d.values[i][j] > w.alpha * D[i][j] + eps:
                                return False
        return w.alpha > 0
    if k is Kind.DELTA_LOCAL:
        for x, y in w.cover:
            Mx = PairSet(car, _entourage(Pprime, car.index(x)))
            My = PairSet(car, _entourage(P, car.index(y)))
            if not My.issubset(Mx):
                return False
        return len(w.cover) == n
    return absorbs(kind, Pprime, P)[0]
