"""Seeded counterexample search for closure laws of real structures.

Each catalogued property draws small random instances and evaluates a
claim. Trial ``i`` of a run with seed ``s`` uses its own generator seeded
with ``"s:i"``, so a run is reproducible trial by trial and the reported
counterexample is the one with the lowest trial index.
"""
from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Callable, Optional

from .core import Carrier, DistMap, MapFamily, format_rational, max_combine, scale, scale_to_ints
from .formats import Instance, dumps, parse_instance
from .preorders import (
    Absorber,
    AbsorptionWitness,
    Kind,
    PiDomain,
    PreorderKind,
    absorbs,
    validate_witness,
)

__all__ = [
    "PROPERTIES",
    "Property",
    "FalsifyReport",
    "falsify",
    "revalidate",
    "load_fixture",
    "fixture_ids",
    "random_map",
    "random_family",
    "metric_closure",
    "VALUE_POOL",
]

VALUE_POOL = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(2))


def metric_closure(values):
    """Shortest-walk closure; the result satisfies the triangle inequality."""
    n = len(values)
    ints, den = scale_to_ints(values)
    d = [list(row) for row in ints]
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            di = d[i]
            for j in range(n):
                if dik + dk[j] < di[j]:
                    di[j] = dik + dk[j]
    return tuple(tuple(Fraction(v, den) for v in row) for row in d)


def _draw_matrix(rng: random.Random, n: int, pi: PiDomain, pool=VALUE_POOL):
    if pi is PiDomain.ALL:
        return tuple(tuple(rng.choice(pool) for _ in range(n)) for _ in range(n))
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = m[j][i] = rng.choice(pool)
    if pi is PiDomain.WEAK:
        for i in range(n):
            m[i][i] = rng.choice(pool)
        z = rng.randrange(n)
        m[z][z] = Fraction(0)
    return metric_closure(m)


def random_map(rng: random.Random, carrier: Carrier, pi=PiDomain.ALL, name: str = "d", pool=VALUE_POOL) -> DistMap:
    return DistMap(carrier, name, _draw_matrix(rng, carrier.size, PiDomain(pi), pool))


def random_family(rng: random.Random, carrier: Carrier, pi=PiDomain.ALL, name: str = "P",
                  size: Optional[int] = None, prefix: Optional[str] = None) -> MapFamily:
    k = rng.randint(1, 3) if size is None else size
    prefix = prefix if prefix is not None else name.lower()
    return MapFamily(
        carrier, name, tuple(random_map(rng, carrier, pi, f"{prefix}{i}") for i in range(k))
    )


def random_carrier(rng: random.Random, low: int = 2, high: int = 4) -> Carrier:
    return Carrier(tuple("abcdefgh"[: rng.randint(low, high)]))


def _below(rng: random.Random, D: DistMap, pi: PiDomain, name: str) -> DistMap:
    """A random admissible map dominated entrywise by D."""
    n = D.carrier.size
    if pi is PiDomain.ALL:
        vals = tuple(
            tuple(rng.choice([v for v in VALUE_POOL if v <= D.values[i][j]]) for j in range(n))
            for i in range(n)
        )
        return DistMap(D.carrier, name, vals)
    e = _draw_matrix(rng, n, pi)
    lowered = [[min(e[i][j], D.values[i][j]) for j in range(n)] for i in range(n)]
    # closure only lowers entries and keeps symmetry and zero diagonal points
    return DistMap(D.carrier, name, metric_closure(lowered))


def _zero_where(rng: random.Random, P: MapFamily, pi: PiDomain, name: str) -> DistMap:
    """A random admissible map vanishing wherever every map of P vanishes."""
    n = P.carrier.size
    zero = [[all(d.values[i][j] == 0 for d in P.members) for j in range(n)] for i in range(n)]
    e = _draw_matrix(rng, n, pi)
    vals = [[Fraction(0) if zero[i][j] else e[i][j] for j in range(n)] for i in range(n)]
    if pi is not PiDomain.ALL:
        vals = metric_closure(vals)
        if pi is PiDomain.WEAK and all(vals[i][i] != 0 for i in range(n)):
            return random_map(rng, P.carrier, pi, name)
    return DistMap(P.carrier, name, tuple(tuple(r) for r in vals))


def _member_or_generator(rng, absorber: Absorber, pi: PiDomain, name: str) -> DistMap:
    d = random_map(rng, absorber.carrier, pi, name)
    if absorber.member(d, check=False):
        return d
    g = rng.choice(absorber.P.members)
    return g.renamed(name)


# ---------------------------------------------------------------------------
# catalogue

@dataclass(frozen=True)
class Property:
    id: str
    claim: str
    pi: PiDomain
    pis: tuple
    status: str  # "proven" or "claim"
    draw: Callable[[random.Random, PiDomain], tuple]
    holds: Callable[[Instance, dict], bool]
    expect_counterexample: bool = False


def _pair_draw(rng, pi):
    car = random_carrier(rng)
    P1 = random_family(rng, car, pi, "P1", prefix="e")
    P = random_family(rng, car, pi, "P", prefix="d")
    return Instance(car, {}, {"P1": P1, "P": P}), {}


def _preorder_equiv(kind: Kind):
    def holds(inst: Instance, params: dict) -> bool:
        k = PreorderKind(kind, params.get("pi", "all"))
        P1, P = inst.family("P1"), inst.family("P")
        ab = Absorber(k, P, check=False)
        joint = ab.decide(P1, check=False)[0]
        each = all(ab.member(d, check=False) for d in P1)
        return joint == each

    return holds


def _draw_domination(rng, pi):
    car = random_carrier(rng)
    P = random_family(rng, car, pi, "P", prefix="g")
    ab = Absorber(PreorderKind(Kind.TOPOLOGICAL, pi), P, check=False)
    D = _member_or_generator(rng, ab, pi, "D")
    d = _below(rng, D, pi, "d")
    return Instance(car, {"D": D, "d": d}, {"P": P}), {}


def _holds_domination(inst, params):
    k = PreorderKind(Kind.TOPOLOGICAL, params.get("pi", "all"))
    P = inst.family("P")
    ab = Absorber(k, P, check=False)
    if not ab.member(inst.map("D"), check=False):
        return True
    return ab.member(inst.map("d"), check=False)


_SCALES = (Fraction(1, 4), Fraction(1, 2), Fraction(2), Fraction(3))


def _draw_scale(rng, pi):
    car = random_carrier(rng)
    P = random_family(rng, car, pi, "P", prefix="g")
    ab = Absorber(PreorderKind(Kind.TOPOLOGICAL, pi), P, check=False)
    d = _member_or_generator(rng, ab, pi, "d")
    return Instance(car, {"d": d}, {"P": P}), {"alpha": format_rational(rng.choice(_SCALES))}


def _holds_scale(inst, params):
    k = PreorderKind(Kind.TOPOLOGICAL, params.get("pi", "all"))
    ab = Absorber(k, inst.family("P"), check=False)
    d = inst.map("d")
    if not ab.member(d, check=False):
        return True
    return ab.member(scale(d, Fraction(params["alpha"])), check=False)


def _draw_max(rng, pi):
    car = random_carrier(rng)
    P = random_family(rng, car, pi, "P", prefix="g")
    ab = Absorber(PreorderKind(Kind.TOPOLOGICAL, pi), P, check=False)
    d1 = _member_or_generator(rng, ab, pi, "d1")
    d2 = _member_or_generator(rng, ab, pi, "d2")
    return Instance(car, {"d1": d1, "d2": d2}, {"P": P}), {}


def _holds_max(inst, params):
    k = PreorderKind(Kind.TOPOLOGICAL, params.get("pi", "all"))
    ab = Absorber(k, inst.family("P"), check=False)
    d1, d2 = inst.map("d1"), inst.map("d2")
    if not (ab.member(d1, check=False) and ab.member(d2, check=False)):
        return True
    return ab.member(max_combine(d1, d2), check=False)


def _draw_lip_top(rng, pi):
    car = random_carrier(rng)
    P = random_family(rng, car, pi, "P", prefix="g")
    d = _zero_where(rng, P, pi, "d")
    return Instance(car, {"d": d}, {"P": P}), {}


def _holds_lip_top(inst, params):
    pi = params.get("pi", "all")
    P, d = inst.family("P"), inst.map("d")
    if not Absorber(PreorderKind(Kind.LIPSCHITZ, pi), P, check=False).member(d, check=False):
        return True
    return Absorber(PreorderKind(Kind.TOPOLOGICAL, pi), P, check=False).member(d, check=False)


def _draw_strong(rng, pi):
    car = random_carrier(rng)
    P = random_family(rng, car, pi, "P", prefix="d")
    if rng.random() < 0.5:
        P1 = random_family(rng, car, pi, "P1", prefix="e")
    else:
        keep = [d.renamed(f"e{i}") for i, d in enumerate(P.members) if rng.random() < 0.7]
        extra = random_family(rng, car, pi, "X", size=rng.randint(0, 1), prefix=f"e{len(keep)}_")
        P1 = MapFamily(car, "P1", tuple(keep) + extra.members)
    return Instance(car, {}, {"P1": P1, "P": P}), {}


def _holds_strong(inst, params):
    pi = params.get("pi", "all")
    P1, P = inst.family("P1"), inst.family("P")
    if not absorbs(PreorderKind(Kind.STRONG_DELTA_LOCAL, pi), P1, P)[0]:
        return True
    return absorbs(PreorderKind(Kind.DELTA_LOCAL, pi), P1, P)[0]


def _draw_converse(rng, pi):
    car = random_carrier(rng)
    P = random_family(rng, car, pi, "P", prefix="d", size=rng.randint(1, 2))
    P1 = random_family(rng, car, pi, "P1", prefix="e", size=rng.randint(1, 2))
    return Instance(car, {}, {"P1": P1, "P": P}), {}


def _holds_converse(inst, params):
    """Delta-local equivalence implies strong delta-local equivalence."""
    pi = params.get("pi", "all")
    P1, P = inst.family("P1"), inst.family("P")
    dl = PreorderKind(Kind.DELTA_LOCAL, pi)
    if not (absorbs(dl, P1, P)[0] and absorbs(dl, P, P1)[0]):
        return True
    st = PreorderKind(Kind.STRONG_DELTA_LOCAL, pi)
    return absorbs(st, P1, P)[0] and absorbs(st, P, P1)[0]


def _draw_delta_rule(rng, pi):
    car = random_carrier(rng)
    P = random_family(rng, car, PiDomain.PSEUDO, "P", prefix="d")
    members = []
    for i in range(rng.randint(1, 3)):
        if rng.random() < 0.8:
            members.append(_zero_where(rng, P, PiDomain.PSEUDO, f"e{i}"))
        else:
            members.append(random_map(rng, car, PiDomain.PSEUDO, f"e{i}"))
    return Instance(car, {}, {"P1": MapFamily(car, "P1", tuple(members)), "P": P}), {}


def _holds_delta_rule(inst, params):
    P1, P = inst.family("P1"), inst.family("P")
    holds, w = absorbs(PreorderKind(Kind.QUASI_LIPSCHITZ, PiDomain.PSEUDO), P1, P)
    if not holds:
        return True
    delta = 1 / (2 * w.alpha)
    unif = AbsorptionWitness(Kind.UNIFORM, True, delta=delta, subfamily=w.subfamily)
    return validate_witness(
        PreorderKind(Kind.UNIFORM, PiDomain.PSEUDO), P1, P, unif, epsilons=(Fraction(1),)
    )


_ALL3 = (PiDomain.ALL, PiDomain.WEAK, PiDomain.PSEUDO)

PROPERTIES: dict[str, Property] = {
    p.id: p
    for p in [
        Property(
            "preorder-equiv-topological",
            "topological absorption of a family is decided member by member",
            PiDomain.ALL, _ALL3, "claim", _pair_draw, _preorder_equiv(Kind.TOPOLOGICAL),
        ),
        Property(
            "preorder-equiv-delta-local",
            "delta-local absorption of a family is decided member by member",
            PiDomain.ALL, _ALL3, "claim", _pair_draw, _preorder_equiv(Kind.DELTA_LOCAL),
        ),
        Property(
            "closure-domination-topological",
            "a map dominated by a member of a topological structure is a member",
            PiDomain.ALL, _ALL3, "claim", _draw_domination, _holds_domination,
        ),
        Property(
            "closure-scale-topological",
            "positive multiples of members of a topological structure are members",
            PiDomain.ALL, _ALL3, "claim", _draw_scale, _holds_scale,
        ),
        Property(
            "closure-max-topological",
            "the max of two members of a topological structure is a member",
            PiDomain.ALL, _ALL3, "claim", _draw_max, _holds_max,
        ),
        Property(
            "lipschitz-implies-topological-membership",
            "every member of the Lipschitz structure of P is a member of its topological structure",
            PiDomain.ALL, _ALL3, "claim", _draw_lip_top, _holds_lip_top,
        ),
        Property(
            "strong-implies-delta-local",
            "strong delta-local absorption implies delta-local absorption",
            PiDomain.ALL, _ALL3, "proven", _draw_strong, _holds_strong,
        ),
        Property(
            "delta-local-converse-fails",
            "delta-local equivalence implies strong delta-local equivalence "
            "(expected to be refuted: the converse of the previous law fails)",
            PiDomain.ALL, _ALL3, "claim", _draw_converse, _holds_converse,
            expect_counterexample=True,
        ),
        Property(
            "quasi-lipschitz-delta-rule",
            "a quasi-Lipschitz constant alpha gives the uniform threshold 1/(2 alpha) at eps = 1",
            PiDomain.PSEUDO, (PiDomain.PSEUDO,), "proven", _draw_delta_rule, _holds_delta_rule,
        ),
    ]
}


@dataclass
class FalsifyReport:
    property: str
    trials: int
    seed: int
    pi: str
    verdict: str  # "counterexample" or "none-found"
    claim: str
    status: str
    counterexample: Optional[dict] = None
    trial_index: Optional[int] = None
    runtime: float = field(default=0.0, compare=False)

    @property
    def finding(self) -> str:
        if self.verdict == "counterexample":
            return "refuted"
        return "proven" if self.status == "proven" else "holds in our runs"

    def to_dict(self, include_runtime: bool = False) -> dict:
        out = {
            "property": self.property,
            "claim": self.claim,
            "pi": self.pi,
            "seed": self.seed,
            "trials": self.trials,
            "verdict": self.verdict,
            "finding": self.finding,
        }
        if self.counterexample is not None:
            out["trial_index"] = self.trial_index
            out["counterexample"] = self.counterexample
        if include_runtime:
            out["runtime_seconds"] = round(self.runtime, 3)
        return out

    def log_line(self) -> str:
        return (f"{self.property} [{self.pi}] seed={self.seed} trials={self.trials}: "
                f"{self.verdict} ({self.finding}) in {self.runtime:.2f}s")


def _lookup(prop: str) -> Property:
    try:
        return PROPERTIES[prop]
    except KeyError:
        raise KeyError(f"unknown property id {prop!r}; known: {sorted(PROPERTIES)}") from None


def _resolve_pi(p: Property, pi) -> PiDomain:
    pi = p.pi if pi is None else PiDomain(pi)
    if pi not in p.pis:
        raise ValueError(f"property {p.id} is not defined over the {pi} domain")
    return pi


def _counterexample_doc(inst: Instance, params: dict) -> dict:
    doc = {"instance": inst.to_document()}
    if params:
        doc["params"] = dict(sorted(params.items()))
    return doc


def falsify(prop: str, trials: int, seed: int, pi=None) -> FalsifyReport:
    p = _lookup(prop)
    if not isinstance(trials, int) or trials < 1:
        raise ValueError("trials must be a positive integer")
    pi = _resolve_pi(p, pi)
    start = time.perf_counter()
    found = None
    executed = 0
    for index in range(trials):
        rng = random.Random(f"{seed}:{index}")
        inst, params = p.draw(rng, pi)
        params = {**params, "pi": pi.value}
        executed += 1
        if not p.holds(inst, params):
            found = (index, _counterexample_doc(inst, params))
            break
    report = FalsifyReport(
        property=p.id, trials=executed, seed=seed, pi=pi.value,
        verdict="counterexample" if found else "none-found",
        claim=p.claim, status=p.status,
        counterexample=found[1] if found else None,
        trial_index=found[0] if found else None,
    )
    report.runtime = time.perf_counter() - start
    return report


def revalidate(prop: str, counterexample: dict) -> bool:
    """True iff the stored instance still violates the property."""
    p = _lookup(prop)
    inst = parse_instance(json.dumps(counterexample["instance"]))
    params = dict(counterexample.get("params", {}))
    params.setdefault("pi", p.pi.value)
    return not p.holds(inst, params)


def fixture_ids() -> list[str]:
    root = resources.files("realstruct") / "fixtures"
    return sorted(f.name[:-5] for f in root.iterdir() if f.name.endswith(".json"))


def load_fixture(name: str) -> dict:
    path = resources.files("realstruct") / "fixtures" / f"{name}.json"
    return json.loads(path.read_text(encoding="utf-8"))


def fixture_document(report: FalsifyReport) -> str:
    if report.counterexample is None:
        raise ValueError("report has no counterexample")
    return dumps({"property": report.property, **report.counterexample})
