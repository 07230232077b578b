"""Weighted Davenport constants of finite abelian groups."""

from davenport.bounds import BoundsReport, ags_bounds, e_constant, exact_value, star_lower
from davenport.constructions import compose, cyclic_chain, independent_full, plan_best, rank2_pm
from davenport.groups import AbelianGroup, canonicalize, dilate, enumerate_groups, parse_group
from davenport.search import SearchConfig, SearchResult, max_dissociated
from davenport.sumset import Certificate, verify_certificate, weighted_sumset
from davenport.weights import WeightSet, make_weightset, normalize

__all__ = [
    "AbelianGroup",
    "BoundsReport",
    "ags_bounds",
    "compose",
    "cyclic_chain",
    "e_constant",
    "exact_value",
    "independent_full",
    "plan_best",
    "rank2_pm",
    "star_lower",
    "Certificate",
    "SearchConfig",
    "SearchResult",
    "WeightSet",
    "canonicalize",
    "dilate",
    "enumerate_groups",
    "make_weightset",
    "max_dissociated",
    "normalize",
    "parse_group",
    "verify_certificate",
    "weighted_sumset",
]
