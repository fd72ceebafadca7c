"""Exact linking-form obstructions for the Gordian distance of knots.

Core pipeline: a Seifert matrix (from the bundled table or a user CSV)
gives the symmetrized matrix of a double branched cover, whose cokernel
carries a linking form over Q/Z.  The linking form of -J # K supports
two obstructions (to distance one and to distance at most two) that are
evaluated alongside the classical signature/s/tau/F_p-rank lower bounds
and the unknotting-number upper bound.
"""

from .errors import (
    ArgumentError,
    CapExceededError,
    GordianError,
    InapplicableError,
    ParseError,
    ShapeError,
    SingularMatrixError,
    UnknownKnotError,
    ValidationError,
)
from .exactmat import QmodZ, parse_qmodz
from .ingest import InvariantCache, KnotRecord, KnotTable, default_table_path, load_table
from .knots import (
    KnotExpr,
    Summand,
    canonical_expr,
    connected_sum,
    fp_rank,
    knot_det,
    knot_signature,
    mirror_expr,
    mirror_matrix,
    parse_expr,
    reverse_matrix,
    seifert_matrix,
    symmetrized,
    validate_seifert,
)
from .linkform import DEFAULT_GROUP_CAP, LinkingForm
from .obstruct import (
    BoundReport,
    CandidateMatrix,
    ClassicalBounds,
    ObstructionVerdict,
    candidate_matrices,
    classical_bounds,
    d1_obstruction,
    d2_obstruction,
    lambda_isometric,
    pair_form,
    report,
)
from .scan import (
    SCAN_COLUMNS,
    ScanOptions,
    ScanSummary,
    build_universe,
    emit_report,
    scan_pairs,
)

__version__ = "0.1.0"

__all__ = [
    "ArgumentError",
    "BoundReport",
    "CandidateMatrix",
    "CapExceededError",
    "ClassicalBounds",
    "DEFAULT_GROUP_CAP",
    "GordianError",
    "InapplicableError",
    "InvariantCache",
    "KnotExpr",
    "KnotRecord",
    "KnotTable",
    "LinkingForm",
    "ObstructionVerdict",
    "ParseError",
    "QmodZ",
    "SCAN_COLUMNS",
    "ScanOptions",
    "ScanSummary",
    "ShapeError",
    "SingularMatrixError",
    "Summand",
    "UnknownKnotError",
    "ValidationError",
    "build_universe",
    "candidate_matrices",
    "canonical_expr",
    "classical_bounds",
    "connected_sum",
    "d1_obstruction",
    "d2_obstruction",
    "default_table_path",
    "emit_report",
    "fp_rank",
    "knot_det",
    "knot_signature",
    "lambda_isometric",
    "load_table",
    "mirror_expr",
    "mirror_matrix",
    "pair_form",
    "parse_expr",
    "parse_qmodz",
    "report",
    "reverse_matrix",
    "scan_pairs",
    "seifert_matrix",
    "symmetrized",
    "validate_seifert",
]
