"""Braid group representations: exact arithmetic, irreducibility analysis and
classification of degree-n representations against the twisted block family.

The public surface re-exported here is the stable API; everything else is an
implementation detail.
"""

from .analysis import (
    BurnsideReport,
    CommonEigReport,
    CorankReport,
    CycleAuditReport,
    InvarianceReport,
    InvariantSubspaceReport,
    JordanProjectionReport,
    RankConclusion,
    WitnessReport,
    burnside_dimension,
    central_scalar,
    common_eigenvector,
    corank,
    invariant_subspace_search,
    jordan_projection,
    rank_conclusion_check,
    subgroup_invariance_check,
    subgroup_line_witness,
    theta_cycle_audit,
)
from .braid import BraidWord, conjugate, theta_word
from .classification import (
    AuditRow,
    AuditSummary,
    ClassificationReport,
    EquivalenceCert,
    RecoveredParams,
    audit_theorem,
    certify_equivalence,
    classify,
    recover_parameters,
)
from .errors import (
    BraidRepError,
    ClosureDiverged,
    ClusterAmbiguous,
    DegenerateU,
    GenericDisagreement,
    IndexOutOfRange,
    NoDominantEigenvalue,
    NotDivisible,
    NotEigenvalue,
    NotInvertible,
    NotIrreducible,
    NotScalar,
    RelationFailure,
    SchemaError,
    WitnessInvalid,
    ZeroScalar,
    ZeroSubstitution,
)
from .laurent import LaurentPoly
from .matrix import (
    DEFAULT_CLUSTER_TOL,
    DEFAULT_TOL,
    Domain,
    Mat,
    charpoly,
    column_space,
    eigen_numeric,
    intertwiner_space,
    jordan_structure,
    mat_from_json,
    minpoly,
    nullspace,
    rank_exact,
    rank_numeric,
)
from .reps import (
    RelationReport,
    Rep,
    burau_rep,
    character_rep,
    character_twist,
    check_braid_relations,
    eval_word,
    rep_from_json,
    specialize,
    standard_rep,
)

__version__ = "0.1.0"

__all__ = [
    "AuditRow",
    "AuditSummary",
    "BraidRepError",
    "BraidWord",
    "BurnsideReport",
    "ClassificationReport",
    "ClosureDiverged",
    "ClusterAmbiguous",
    "CommonEigReport",
    "CorankReport",
    "CycleAuditReport",
    "DEFAULT_CLUSTER_TOL",
    "DEFAULT_TOL",
    "DegenerateU",
    "Domain",
    "EquivalenceCert",
    "GenericDisagreement",
    "IndexOutOfRange",
    "InvarianceReport",
    "InvariantSubspaceReport",
    "JordanProjectionReport",
    "LaurentPoly",
    "Mat",
    "NoDominantEigenvalue",
    "NotDivisible",
    "NotEigenvalue",
    "NotInvertible",
    "NotIrreducible",
    "NotScalar",
    "RankConclusion",
    "RecoveredParams",
    "RelationFailure",
    "RelationReport",
    "Rep",
    "SchemaError",
    "WitnessInvalid",
    "WitnessReport",
    "ZeroScalar",
    "ZeroSubstitution",
    "audit_theorem",
    "burau_rep",
    "burnside_dimension",
    "central_scalar",
    "certify_equivalence",
    "character_rep",
    "character_twist",
    "charpoly",
    "check_braid_relations",
    "classify",
    "column_space",
    "common_eigenvector",
    "conjugate",
    "corank",
    "eigen_numeric",
    "eval_word",
    "intertwiner_space",
    "invariant_subspace_search",
    "jordan_projection",
    "jordan_structure",
    "mat_from_json",
    "minpoly",
    "nullspace",
    "rank_conclusion_check",
    "rank_exact",
    "rank_numeric",
    "recover_parameters",
    "rep_from_json",
    "specialize",
    "standard_rep",
    "subgroup_invariance_check",
    "subgroup_line_witness",
    "theta_cycle_audit",
    "theta_word",
    "__version__",
]
