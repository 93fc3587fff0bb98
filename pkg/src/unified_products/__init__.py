"""Unified products of finite groups: build, check, reconstruct and classify
group extending structures on explicit Cayley tables."""

from .catalog import (
    alternating,
    cyclic,
    dihedral,
    direct_product,
    klein,
    named_group,
    point_stabilizer_subgroup,
    symmetric,
    trivial,
)
from .classification import (
    EquivalenceClassSet,
    KuperbergWitness,
    StabilizingPair,
    UniversalCandidate,
    UniversalResult,
    bicrossed_iso_check,
    cohomologous,
    crossed_iso_check,
    equivalent,
    h2_classes,
    k2_classes,
    kuperberg_check,
    stabilizing_morphisms,
    verify_universal_C,
    verify_universal_D,
)
from .enumeration import (
    EnumerationTask,
    OracleResult,
    cross_validate_structures,
    enumerate_extending_data,
    oracle_group_structures,
    survey_transversals,
)
from .errors import (
    AxiomViolation,
    BudgetExhausted,
    InputError,
    InternalInconsistency,
    UnifiedProductsError,
    Violation,
)
from .extending import (
    CrossedSystem,
    ExtendingDatum,
    MatchedPair,
    UnifiedProduct,
    bicrossed_product,
    check_axioms,
    crossed_product,
    from_transition_map,
    inverse_in_product,
    left_inverse_map,
    lift_crossed,
    lift_matched,
    lift_twisted,
    recognize,
    twisted_product,
    unified_product,
)
from .finite_group import (
    FiniteGroup,
    SubgroupEmbedding,
    Transversal,
    find_isomorphism,
    is_normal,
    is_subgroup,
    right_transversal,
    subgroup,
    validate_group,
)
from .formats import (
    load_datum,
    load_group,
    load_retraction,
    parse_datum,
    parse_group,
    parse_retraction,
    serialize_datum,
    serialize_group,
    serialize_retraction,
)
from .reconstruction import (
    Retraction,
    extract_datum,
    matched_pair_from_factorization,
    phi_isomorphism,
    retraction_from_transversal,
    schreier_reconstruct,
    schreier_vs_unified,
)

__version__ = "0.1.0"

__all__ = [
    "alternating",
    "cyclic",
    "dihedral",
    "direct_product",
    "klein",
    "named_group",
    "point_stabilizer_subgroup",
    "symmetric",
    "trivial",
    "EquivalenceClassSet",
    "KuperbergWitness",
    "StabilizingPair",
    "UniversalCandidate",
    "UniversalResult",
    "bicrossed_iso_check",
    "cohomologous",
    "crossed_iso_check",
    "equivalent",
    "h2_classes",
    "k2_classes",
    "kuperberg_check",
    "stabilizing_morphisms",
    "verify_universal_C",
    "verify_universal_D",
    "EnumerationTask",
    "OracleResult",
    "cross_validate_structures",
    "enumerate_extending_data",
    "oracle_group_structures",
    "survey_transversals",
    "AxiomViolation",
    "BudgetExhausted",
    "InputError",
    "InternalInconsistency",
    "UnifiedProductsError",
    "Violation",
    "CrossedSystem",
    "ExtendingDatum",
    "MatchedPair",
    "UnifiedProduct",
    "bicrossed_product",
    "check_axioms",
    "crossed_product",
    "from_transition_map",
    "inverse_in_product",
    "left_inverse_map",
    "lift_crossed",
    "lift_matched",
    "lift_twisted",
    "recognize",
    "twisted_product",
    "unified_product",
    "FiniteGroup",
    "SubgroupEmbedding",
    "Transversal",
    "find_isomorphism",
    "is_normal",
    "is_subgroup",
    "right_transversal",
    "subgroup",
    "validate_group",
    "load_datum",
    "load_group",
    "load_retraction",
    "parse_datum",
    "parse_group",
    "parse_retraction",
    "serialize_datum",
    "serialize_group",
    "serialize_retraction",
    "Retraction",
    "extract_datum",
    "matched_pair_from_factorization",
    "phi_isomorphism",
    "retraction_from_transversal",
    "schreier_reconstruct",
    "schreier_vs_unified",
]
