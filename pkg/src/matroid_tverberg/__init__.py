"""Tverberg-style partitions of colored sequences in finite matroids.

Everything revolves around one oracle question, "is x in the closure of Y?",
asked of exact matroid implementations (GF(p) and rational vectors, affine
point sets, uniform, graphic, direct sums).  The solvers split a colored
sequence of non-loops into r pairwise disjoint rainbow subsequences whose
closures form a chain strictly above cl(empty); the bruteforce module
re-derives the same answers by exhaustive search at desk scale.
"""

from .bruteforce import (
    BruteForceBudget,
    brute_force_solve,
    check_intersection_lemma,
    check_tightness,
    closure_intersection_agrees,
    rota_check,
    tight_instance,
)
from .errors import (
    BudgetExceeded,
    InfeasibleRequest,
    InternalInvariantBroken,
    LoopInInput,
    MatroidTverbergError,
    MixedParents,
    NotABasis,
    ParseError,
    PreconditionViolated,
    SeedInvalid,
    UnknownColor,
    UnknownElement,
)
from .instances import (
    InstanceFile,
    emit_instance,
    emit_partition,
    gen_random_instance,
    parse_instance,
    parse_partition,
)
from .kernels import active_backend
from .matroids import (
    AffineMatroid,
    DirectSumMatroid,
    GraphicMatroid,
    MatroidOracle,
    RestrictionView,
    UniformMatroid,
    VectorMatroidGFp,
    VectorMatroidRational,
    add_coloops,
    restrict_rank,
    set_call_counting,
)
from .sequences import (
    ColorCountProfile,
    Coloring,
    IndexedSequence,
    check_general_profile,
    check_special_profile,
    color_class,
    is_rainbow,
)
from .solver import (
    ChainCertificate,
    Partition,
    SolveStats,
    VerificationReport,
    build_partition,
    general_precondition,
    max_rainbow_independent,
    solve_general,
    solve_noncolor,
    solve_special,
    special_precondition,
    verify_partition,
)

__version__ = "0.1.0"

__all__ = [
    "AffineMatroid",
    "BruteForceBudget",
    "BudgetExceeded",
    "ChainCertificate",
    "ColorCountProfile",
    "Coloring",
    "DirectSumMatroid",
    "GraphicMatroid",
    "IndexedSequence",
    "InfeasibleRequest",
    "InstanceFile",
    "InternalInvariantBroken",
    "LoopInInput",
    "MatroidOracle",
    "MatroidTverbergError",
    "MixedParents",
    "NotABasis",
    "ParseError",
    "Partition",
    "PreconditionViolated",
    "RestrictionView",
    "SeedInvalid",
    "SolveStats",
    "UniformMatroid",
    "UnknownColor",
    "UnknownElement",
    "VectorMatroidGFp",
    "VectorMatroidRational",
    "VerificationReport",
    "active_backend",
    "add_coloops",
    "brute_force_solve",
    "build_partition",
    "check_general_profile",
    "check_intersection_lemma",
    "check_special_profile",
    "check_tightness",
    "closure_intersection_agrees",
    "color_class",
    "emit_instance",
    "emit_partition",
    "gen_random_instance",
    "general_precondition",
    "is_rainbow",
    "max_rainbow_independent",
    "parse_instance",
    "parse_partition",
    "restrict_rank",
    "rota_check",
    "set_call_counting",
    "solve_general",
    "solve_noncolor",
    "solve_special",
    "special_precondition",
    "tight_instance",
    "verify_partition",
]
