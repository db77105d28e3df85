"""Reference-free translation quality estimation from cross-lingual embeddings."""

from .alignment import AlignmentSet, MaskMatrix, build_mask, parse_pharaoh, symmetrize
from .errors import AlignmentError, FormatError, InvariantError, QEError, StatsError
from .estimator import QualityEstimator
from .records import (
    RecordMeta,
    SentencePairRecord,
    ValidationIssue,
    ValidationReport,
    read_records,
    scan_file,
    validate_records,
    write_records,
)
from .scoring import (
    QEScore,
    ScoreConfig,
    SimilarityMatrix,
    bertscore,
    combine_generation_score,
    masked_bertscore,
    match_indices,
    score_pair,
    similarity_matrix,
)
from .stats import ScoredPairSeries, join_scores, kendall, pearson

__version__ = "0.1.0"

__all__ = [
    "AlignmentError",
    "AlignmentSet",
    "FormatError",
    "InvariantError",
    "MaskMatrix",
    "QEError",
    "QEScore",
    "QualityEstimator",
    "RecordMeta",
    "ScoreConfig",
    "ScoredPairSeries",
    "SentencePairRecord",
    "SimilarityMatrix",
    "StatsError",
    "ValidationIssue",
    "ValidationReport",
    "bertscore",
    "build_mask",
    "combine_generation_score",
    "join_scores",
    "kendall",
    "masked_bertscore",
    "match_indices",
    "parse_pharaoh",
    "pearson",
    "read_records",
    "scan_file",
    "score_pair",
    "similarity_matrix",
    "symmetrize",
    "validate_records",
    "write_records",
    "__version__",
]
