"""Command-line interface.

Every command prints one JSON document on stdout. Decision commands exit 0
when the answer is yes, 1 when it is no; usage and data errors exit 2 with a
diagnostic on stderr.
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import lab
from .core import PointSet, classify_map
from .formats import (
    Instance,
    InstanceError,
    dumps,
    instance_document,
    load_instance,
    parse_point_map,
    parse_topology,
    topology_document,
)
from .generate import delta_local_filter, topology_from_family, topology_from_filter
from .morphisms import (
    SearchBoundExceeded,
    continuity_oracle,
    epsilon_morphism_oracle,
    is_morphism,
    same_type_search,
)
from .preorders import DomainError, Kind, PiDomain, PreorderKind, absorbs, equivalent, member
from .realize import enumerate_topologies, realize_topology
from .structures import (
    DEFAULT_PRODUCT_BOUND,
    KindMismatch,
    ProductTooLarge,
    RealSpace,
    initial_family,
    product_family,
    subspace_family,
)

EXIT_TRUE, EXIT_FALSE, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InstanceError(f"cannot read {path}: {exc.strerror}") from None


def _family(inst: Instance, name: str | None, path: str = "instance"):
    if name is not None:
        return inst.family(name)
    if len(inst.families) == 1:
        return next(iter(inst.families.values()))
    raise UsageError(f"{path} has {len(inst.families)} families; choose one with --family")


def _kind(args) -> PreorderKind:
    return PreorderKind.of(args.kind, args.pi)


def _space(inst: Instance, family: str | None, args, path: str) -> RealSpace:
    return RealSpace.of(_family(inst, family, path), _kind(args))


def _kind_report(k: PreorderKind) -> dict:
    return {"kind": k.kind.value, "pi": k.pi.value}


# each handler returns (exit code, document)

def cmd_check(args):
    inst = load_instance(args.instance)
    names = [args.map] if args.map else sorted(inst.maps)
    return EXIT_TRUE, {name: classify_map(inst.map(name)).to_dict() for name in names}


def cmd_topology(args):
    inst = load_instance(args.instance)
    P = _family(inst, args.family, args.instance)
    T = topology_from_filter(delta_local_filter(P)) if args.from_filter else topology_from_family(P)
    return EXIT_TRUE, topology_document(T)


def cmd_filter(args):
    inst = load_instance(args.instance)
    F = delta_local_filter(_family(inst, args.family, args.instance))
    return EXIT_TRUE, {
        "carrier": list(F.carrier.elements),
        "minimal_entourages": {
            x: [list(p) for p in M.pairs()] for x, M in zip(F.carrier.elements, F.minimal_entourage)
        },
    }


def cmd_minopen(args):
    inst = load_instance(args.instance)
    T = topology_from_family(_family(inst, args.family, args.instance))
    points = [args.point] if args.point else list(T.carrier.elements)
    for x in points:
        if x not in T.carrier:
            raise InstanceError(f"unknown element {x!r}")
    return EXIT_TRUE, {"minimal_open": {x: T.minimal_open[T.carrier.index(x)].names for x in points}}


def cmd_absorbs(args):
    inst = load_instance(args.instance)
    k = _kind(args)
    holds, witness = absorbs(k, inst.family(args.absorbed), inst.family(args.absorbing))
    return _verdict(holds, {**_kind_report(k), "holds": holds, "witness": witness.to_dict()})


def cmd_member(args):
    inst = load_instance(args.instance)
    k = _kind(args)
    holds = member(inst.map(args.map), _family(inst, args.family, args.instance), k)
    return _verdict(holds, {**_kind_report(k), "map": args.map, "holds": holds})


def cmd_equivalent(args):
    inst = load_instance(args.instance)
    k = _kind(args)
    holds = equivalent(inst.family(args.first), inst.family(args.second), k)
    return _verdict(holds, {**_kind_report(k), "holds": holds})


def _morphism_inputs(args):
    X, Y = load_instance(args.domain), load_instance(args.codomain)
    PX = _family(X, args.domain_family, args.domain)
    PY = _family(Y, args.codomain_family, args.codomain)
    f = parse_point_map(_read(args.map), X.carrier, Y.carrier)
    return f, PX, PY


def cmd_morphism(args):
    f, PX, PY = _morphism_inputs(args)
    k = _kind(args)
    result = is_morphism(f, RealSpace.of(PX, k), RealSpace.of(PY, k))
    return _verdict(result.holds, {**_kind_report(k), **result.to_dict()})


def cmd_oracle_morphism(args):
    f, PX, PY = _morphism_inputs(args)
    k = _kind(args)
    if k.kind is Kind.TOPOLOGICAL:
        oracle = "continuity"
        holds = continuity_oracle(f, topology_from_family(PX), topology_from_family(PY))
    elif k.kind in (Kind.DELTA_LOCAL, Kind.STRONG_DELTA_LOCAL):
        oracle = "epsilon"
        holds = epsilon_morphism_oracle(k, f, PX, PY)
    else:
        raise UsageError("oracle-morphism supports the topological, delta-local and strong-delta-local kinds")
    return _verdict(holds, {**_kind_report(k), "oracle": oracle, "holds": holds})


def cmd_same_type(args):
    X, Y = load_instance(args.domain), load_instance(args.codomain)
    SX = _space(X, args.domain_family, args, args.domain)
    SY = _space(Y, args.codomain_family, args, args.codomain)
    holds, maps = same_type_search(SX, SY)
    doc = {**_kind_report(SX.kind), "holds": holds}
    if maps is not None:
        doc["f"], doc["g"] = maps[0].to_dict(), maps[1].to_dict()
    return _verdict(holds, doc)


def _space_document(S: RealSpace) -> dict:
    return {**_kind_report(S.kind), "instance": instance_document(S.carrier, (), [S.generators])}


def cmd_initial(args):
    X = load_instance(args.instance)
    if len(args.target) != len(args.along):
        raise UsageError("give one --along point map per --target instance")
    targets = []
    for path, map_path in zip(args.target, args.along):
        Y = load_instance(path)
        S = RealSpace.of(_family(Y, None, path), _kind(args))
        f = parse_point_map(_read(map_path), X.carrier, Y.carrier, name=f"f{len(targets) + 1}")
        targets.append((f, S))
    return EXIT_TRUE, _space_document(initial_family(targets, carrier=X.carrier))


def cmd_subspace(args):
    inst = load_instance(args.instance)
    S = _space(inst, args.family, args, args.instance)
    names = [x for x in args.subset.split(",") if x]
    for x in names:
        if x not in S.carrier:
            raise InstanceError(f"unknown element {x!r}")
    return EXIT_TRUE, _space_document(subspace_family(S, PointSet.of(S.carrier, names)))


def cmd_product(args):
    spaces = [RealSpace.of(_family(load_instance(p), None, p), _kind(args)) for p in args.instances]
    return EXIT_TRUE, _space_document(product_family(spaces, max_size=args.max_size))


def cmd_realize(args):
    T = parse_topology(_read(args.topology))
    return EXIT_TRUE, instance_document(T.carrier, (), [realize_topology(T)])


def cmd_enumerate(args):
    tops = enumerate_topologies(args.n, allow_large=args.allow_large)
    if args.count_only:
        return EXIT_TRUE, len(tops)
    return EXIT_TRUE, {
        "n": args.n,
        "count": len(tops),
        "topologies": [topology_document(T)["opens"] for T in tops],
    }


def cmd_falsify(args):
    report = lab.falsify(args.property, args.trials, args.seed, args.pi)
    if args.log:
        print(report.log_line(), file=sys.stderr)
    if args.fixture_out and report.counterexample is not None:
        with open(args.fixture_out, "w", encoding="utf-8") as fh:
            fh.write(lab.fixture_document(report))
    return _verdict(report.verdict == "none-found", report.to_dict(include_runtime=args.timing))


def _verdict(holds: bool, doc):
    return (EXIT_TRUE if holds else EXIT_FALSE), doc


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_kind(p, required=True):
    p.add_argument("--kind", required=required, choices=[k.value for k in Kind])
    p.add_argument("--pi", choices=[d.value for d in PiDomain], default=None,
                   help="admissible maps; defaults to pseudo for the pseudo-only kinds, else all")


def _add_pair(p):
    p.add_argument("domain", help="instance file for X")
    p.add_argument("codomain", help="instance file for Y")
    p.add_argument("--domain-family")
    p.add_argument("--codomain-family")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="realstruct", description="Finite real structures, topologies and morphisms.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="classify maps")
    p.add_argument("instance")
    p.add_argument("--map")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("topology", help="topology generated by a family")
    p.add_argument("instance")
    p.add_argument("--family")
    p.add_argument("--from-filter", action="store_true", help="go through the delta-local filter")
    p.set_defaults(run=cmd_topology)

    p = sub.add_parser("filter", help="minimal entourages of the delta-local filter")
    p.add_argument("instance")
    p.add_argument("--family")
    p.set_defaults(run=cmd_filter)

    p = sub.add_parser("minopen", help="minimal open sets")
    p.add_argument("instance")
    p.add_argument("--family")
    p.add_argument("--point")
    p.set_defaults(run=cmd_minopen)

    p = sub.add_parser("absorbs", help="does --absorbing absorb --absorbed")
    p.add_argument("instance")
    _add_kind(p)
    p.add_argument("--absorbed", required=True)
    p.add_argument("--absorbing", required=True)
    p.set_defaults(run=cmd_absorbs)

    p = sub.add_parser("member", help="is a map in the structure generated by a family")
    p.add_argument("instance")
    _add_kind(p)
    p.add_argument("--family")
    p.add_argument("--map", required=True)
    p.set_defaults(run=cmd_member)

    p = sub.add_parser("equivalent", help="do two families generate the same structure")
    p.add_argument("instance")
    _add_kind(p)
    p.add_argument("--first", required=True)
    p.add_argument("--second", required=True)
    p.set_defaults(run=cmd_equivalent)

    for name, run, text in (
        ("morphism", cmd_morphism, "is a point map a morphism"),
        ("oracle-morphism", cmd_oracle_morphism, "decide a morphism by its characterisation"),
    ):
        p = sub.add_parser(name, help=text)
        _add_pair(p)
        _add_kind(p)
        p.add_argument("--map", required=True, help='point map file {"map": {...}}')
        p.set_defaults(run=run)

    p = sub.add_parser("same-type", help="search for morphisms both ways")
    _add_pair(p)
    _add_kind(p)
    p.set_defaults(run=cmd_same_type)

    p = sub.add_parser("initial", help="initial structure for maps into given spaces")
    p.add_argument("instance", help="instance file supplying the carrier")
    _add_kind(p)
    p.add_argument("--target", action="append", required=True)
    p.add_argument("--along", action="append", required=True)
    p.set_defaults(run=cmd_initial)

    p = sub.add_parser("subspace", help="structure induced on a subset")
    p.add_argument("instance")
    _add_kind(p)
    p.add_argument("--family")
    p.add_argument("--subset", required=True, help="comma-separated element names")
    p.set_defaults(run=cmd_subspace)

    p = sub.add_parser("product", help="product of several spaces")
    p.add_argument("instances", nargs="+")
    _add_kind(p)
    p.add_argument("--max-size", type=int, default=DEFAULT_PRODUCT_BOUND)
    p.set_defaults(run=cmd_product)

    p = sub.add_parser("realize", help="weak pseudo-metrics generating a topology")
    p.add_argument("topology")
    p.set_defaults(run=cmd_realize)

    p = sub.add_parser("enumerate", help="all topologies on n points")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--allow-large", action="store_true", help="permit n = 5")
    p.set_defaults(run=cmd_enumerate)

    p = sub.add_parser("falsify", help="randomised search for counterexamples")
    p.add_argument("--property", required=True, choices=sorted(lab.PROPERTIES))
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pi", choices=[d.value for d in PiDomain], default=None)
    p.add_argument("--timing", action="store_true", help="include runtime (not byte-stable)")
    p.add_argument("--log", action="store_true", help="findings line on stderr")
    p.add_argument("--fixture-out", help="write the counterexample here")
    p.set_defaults(run=cmd_falsify)
    return parser


_DATA_ERRORS = (
    InstanceError, DomainError, KindMismatch, ProductTooLarge, SearchBoundExceeded,
    ValueError, KeyError,
)


def run_command(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        code, doc = args.run(args)
    except UsageError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_ERROR
    except _DATA_ERRORS as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {message}", file=err)
        return EXIT_ERROR
    out.write(dumps(doc))
    return code


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
