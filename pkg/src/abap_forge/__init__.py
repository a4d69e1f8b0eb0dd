"""Witness-chain extension operators, automorphism lifts, and desk-scale
conjugacy reductions for the classes of countable homogeneous ordered
structures."""

from .extend import (ExtensionStructure, extend, extend_equiv, extend_graph,
                     extend_linear, extend_linext, extend_local,
                     extend_ordered_linear, extend_ordered_local,
                     window_structure)
from .lifts import (Morphism, check_conjugation, compose, fixed_points,
                    identity, lift_automorphism, lift_isomorphism,
                    preserves_relations, shift_morphism)
from .oracle import closure_oracle, comparator_agreement, oracle_structure
from .qftypes import (AdmissibleType, canonical_type, compare_types,
                      enumerate_types, is_admissible, map_type, sort_types)
from .structures import (FiniteStructure, FiniteWindow, LazyIntegerChain,
                         ValidationReport, automorphisms, brute_force_report,
                         isomorphic, validate_class)
from .tags import ClassTag, ConfigError, parse_tag
from .terms import Base, Term, Wit, term_id
from .tower import (Tower, build_tower, homogeneity_probe, reduction,
                    verify_backward, verify_forward)

__all__ = [
    "AdmissibleType", "Base", "ClassTag", "ConfigError", "ExtensionStructure",
    "FiniteStructure", "FiniteWindow", "LazyIntegerChain", "Morphism", "Term",
    "Tower", "ValidationReport", "Wit", "automorphisms", "brute_force_report",
    "build_tower", "canonical_type", "check_conjugation", "closure_oracle",
    "comparator_agreement", "compare_types", "compose", "enumerate_types",
    "extend", "extend_equiv", "extend_graph", "extend_linear", "extend_linext",
    "extend_local", "extend_ordered_linear", "extend_ordered_local",
    "fixed_points", "homogeneity_probe", "identity", "is_admissible",
    "isomorphic", "lift_automorphism", "lift_isomorphism", "map_type",
    "oracle_structure", "parse_tag", "preserves_relations", "reduction",
    "shift_morphism", "sort_types", "term_id", "validate_class",
    "verify_backward", "verify_forward", "window_structure",
]

__version__ = "0.1.0"
