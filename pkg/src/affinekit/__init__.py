"""Galois connections between point sets and congruences on free algebras
over a finite ground algebra, the induced adjunction between definable maps
and relation-preserving maps, and a handful of worked instances."""

from .version import VERSION as __version__

from .errors import (
    AffineError,
    ArityMismatch,
    AssertionFailure,
    BijectionFailure,
    BudgetExceeded,
    EquivalenceViolation,
    NotACongruence,
    NotInVariety,
    NotInjective,
    NotStable,
    ParseError,
    ShapeMismatch,
    SignatureMismatch,
    TheoremViolation,
    UnknownSymbol,
    ValidationError,
    VariableOutOfRange,
)
from .core import (
    FiniteAlgebra,
    Homomorphism,
    Partition,
    Signature,
    all_congruences,
    decode_point,
    encode_point,
    evaluate_term,
    generate_congruence,
    generate_subuniverse,
    is_homomorphism,
    is_subdirect_embedding,
    power_algebra,
    product_algebra,
    quotient_algebra,
)
from .free import (
    FreeAlgebra,
    GroundSpace,
    TermFunction,
    enumerate_homs_free,
    free_algebra,
    ground_space,
    point_evaluation_hom,
    substitute,
    verify_ground,
)
from .galois import (
    AffineSubset,
    BirkhoffReport,
    NullstellensatzReport,
    PresentedAlgebra,
    Relation,
    ZariskiReport,
    birkhoff_transform,
    c_operator,
    gelfand_evaluation,
    nullstellensatz_check,
    point_kernel,
    radical,
    radical_of_partition,
    sgk_inverse,
    v_of_partition,
    v_operator,
    zariski_closure,
    zariski_report,
)
from .adjunction import (
    AdjunctionReport,
    DArrowClass,
    RArrowClass,
    RepresentabilityReport,
    check_stability,
    cq_arrow,
    cq_object,
    d_identity,
    hom_set_dq,
    hom_set_rq,
    r_identity,
    representability_check,
    verify_adjunction,
    vq_arrow,
    vq_object,
)
from .instances import (
    BUILTINS,
    builtin,
    classify_fixed,
    list_builtins,
    stone_demo,
)

__all__ = [
    "__version__",
    # errors
    "AffineError", "ArityMismatch", "AssertionFailure", "BijectionFailure",
    "BudgetExceeded", "EquivalenceViolation", "NotACongruence", "NotInVariety",
    "NotInjective", "NotStable", "ParseError", "ShapeMismatch",
    "SignatureMismatch", "TheoremViolation", "UnknownSymbol",
    "ValidationError", "VariableOutOfRange",
    # finite algebras
    "FiniteAlgebra", "Homomorphism", "Partition", "Signature",
    "all_congruences", "decode_point", "encode_point", "evaluate_term",
    "generate_congruence", "generate_subuniverse", "is_homomorphism",
    "is_subdirect_embedding", "power_algebra", "product_algebra",
    "quotient_algebra",
    # free algebras of term functions
    "FreeAlgebra", "GroundSpace", "TermFunction", "enumerate_homs_free",
    "free_algebra", "ground_space", "point_evaluation_hom", "substitute",
    "verify_ground",
    # the galois connection
    "AffineSubset", "BirkhoffReport", "NullstellensatzReport",
    "PresentedAlgebra", "Relation", "ZariskiReport", "birkhoff_transform",
    "c_operator", "gelfand_evaluation", "nullstellensatz_check",
    "point_kernel", "radical", "radical_of_partition", "sgk_inverse",
    "v_of_partition", "v_operator", "zariski_closure", "zariski_report",
    # the adjunction
    "AdjunctionReport", "DArrowClass", "RArrowClass",
    "RepresentabilityReport", "check_stability", "cq_arrow", "cq_object",
    "d_identity", "hom_set_dq", "hom_set_rq", "r_identity",
    "representability_check", "verify_adjunction", "vq_arrow", "vq_object",
    # instances
    "BUILTINS", "builtin", "classify_fixed", "list_builtins", "stone_demo",
]
