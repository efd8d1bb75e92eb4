"""Real structures on finite sets: generated topologies, absorption preorders and morphisms."""
from .core import (
    Carrier,
    CarrierMismatch,
    DistMap,
    MapFamily,
    PairSet,
    PointSet,
    classify_map,
    constant_map,
    discrete_metric,
    format_rational,
    max_combine,
    parse_rational,
    pullback,
    scale,
    zero_map,
)
from .generate import (
    DeltaLocalFilter,
    Topology,
    delta_local_filter,
    is_topology,
    minimal_entourage,
    minimal_open,
    topology_from_family,
    topology_from_filter,
)
from .preorders import Kind, PiDomain, PreorderKind, absorbs, equivalent, member
from .structures import RealSpace, RealStructure, generator_extend, initial_family, product_family, subspace_family
from .morphisms import PointMap, continuity_oracle, epsilon_morphism_oracle, is_morphism, same_type_search
from .realize import enumerate_topologies, realize_topology
from .formats import load_instance, parse_instance

__version__ = "0.1.0"

__all__ = [
    "Carrier", "CarrierMismatch", "DistMap", "MapFamily", "PairSet", "PointSet",
    "classify_map", "constant_map", "discrete_metric", "format_rational", "max_combine",
    "parse_rational", "pullback", "scale", "zero_map",
    "DeltaLocalFilter", "Topology", "delta_local_filter", "is_topology", "minimal_entourage",
    "minimal_open", "topology_from_family", "topology_from_filter",
    "Kind", "PiDomain", "PreorderKind", "absorbs", "equivalent", "member",
    "RealSpace", "RealStructure", "generator_extend", "initial_family", "product_family",
    "subspace_family",
    "PointMap", "continuity_oracle", "epsilon_morphism_oracle", "is_morphism", "same_type_search",
    "enumerate_topologies", "realize_topology",
    "load_instance", "parse_instance",
]
