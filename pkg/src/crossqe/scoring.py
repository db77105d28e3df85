"""Greedy token-matching quality scores over cross-lingual embeddings.

Given per-token embeddings for a source sentence (k rows) and a candidate
translation (l rows), the similarity grid holds every pairwise dot product.
Recall is the mean over source tokens of the best match in the candidate
(row maxima); precision the mean over candidate tokens of the best match in
the source (column maxima); F their harmonic mean. Two optional refinements:

* an alignment penalty mask that down-weights similarities between tokens a
  word aligner did not link, with the masked grid renewed as (S + M*S) / 2;
* linear interpolation of the matching score with a candidate fluency score
  from a masked language model (a mean log-probability, so usually <= 0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .alignment import MaskMatrix, build_mask, parse_pharaoh
from .records import SentencePairRecord
from .validation import as_float_matrix, check_finite, check_nonempty, check_unit_interval

VARIANTS = ("base", "align", "ppl", "align+ppl")
MEASURES = ("f", "p", "r")
GEN_SCORE_SIGNS = ("as_is", "negated")


@dataclass(frozen=True)
class SimilarityMatrix:
    """A validated k x l grid of pairwise token similarities."""

    values: np.ndarray

    def __post_init__(self) -> None:
        arr = as_float_matrix(self.values, "similarity values")
        check_nonempty(arr, "similarity values")
        check_finite(arr, "similarity values")
        if arr.flags.writeable:
            arr = arr.copy()
            arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


@dataclass(frozen=True)
class QEScore:
    """Precision/recall/F of one pair plus the variant's final value."""

    precision: float
    recall: float
    f_score: float
    final: float
    variant: str


@dataclass(frozen=True)
class ScoreConfig:
    """Scoring knobs shared by the library, the estimator, and the CLI.

    variant selects the pipeline: plain matching ("base"), alignment-masked
    matching ("align"), fluency interpolation ("ppl"), or both ("align+ppl").
    penalty_a scales unaligned similarity cells; lambda_ is the interpolation
    weight on the generation score; measure picks which of f/p/r becomes the
    final value; gen_score_sign flips generation scores whose convention is
    lower-is-better.
    """

    variant: str = "base"
    penalty_a: float = 0.8
    lambda_: float = 0.01
    measure: str = "f"
    normalize_embeddings: bool = False
    gen_score_sign: str = "as_is"

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}, expected one of {VARIANTS}")
        if self.measure not in MEASURES:
            raise ValueError(f"unknown measure {self.measure!r}, expected one of {MEASURES}")
        if self.gen_score_sign not in GEN_SCORE_SIGNS:
            raise ValueError(
                f"unknown gen_score_sign {self.gen_score_sign!r}, expected one of {GEN_SCORE_SIGNS}"
            )
        check_unit_interval(self.penalty_a, "penalty_a")
        check_unit_interval(self.lambda_, "lambda_")

    @property
    def uses_alignment(self) -> bool:
        return self.variant in ("align", "align+ppl")

    @property
    def uses_gen_score(self) -> bool:
        return self.variant in ("ppl", "align+ppl")


def similarity_matrix(src_embeddings, mt_embeddings, normalize: bool = False) -> SimilarityMatrix:
    """Pairwise dot products between source rows and candidate rows.

    With normalize=True rows are scaled to unit length first, which turns the
    entries into cosines; a zero-norm row is then an error.
    """
    src = as_float_matrix(src_embeddings, "src_embeddings")
    mt = as_float_matrix(mt_embeddings, "mt_embeddings")
    check_nonempty(src, "src_embeddings")
    check_nonempty(mt, "mt_embeddings")
    if src.shape[1] != mt.shape[1]:
        raise ValueError(
            f"embedding width mismatch: source is {src.shape[1]}, candidate is {mt.shape[1]}"
        )
    check_finite(src, "src_embeddings")
    check_finite(mt, "mt_embeddings")
    if normalize:
        src = _unit_rows(src, "src_embeddings")
        mt = _unit_rows(mt, "mt_embeddings")
    return SimilarityMatrix(src @ mt.T)


def _unit_rows(arr: np.ndarray, name: str) -> np.ndarray:
    norms = np.linalg.norm(arr, axis=1, keepdims=True)
    if np.any(norms == 0.0):
        raise ValueError(f"{name} has a zero-norm row, cannot normalize")
    return arr / norms


def _prf(values: np.ndarray) -> tuple[float, float, float]:
    recall = float(np.mean(np.max(values, axis=1)))
    precision = float(np.mean(np.max(values, axis=0)))
    total = precision + recall
    f_score = 0.0 if total == 0.0 else 2.0 * precision * recall / total
    return precision, recall, f_score


def bertscore(sim: SimilarityMatrix, measure: str = "f") -> QEScore:
    """Greedy-matching precision/recall/F over a similarity grid."""
    precision, recall, f_score = _prf(sim.values)
    final = {"p": precision, "r": recall, "f": f_score}[measure]
    return QEScore(precision=precision, recall=recall, f_score=f_score,
                   final=final, variant="base")


def masked_bertscore(sim: SimilarityMatrix, mask: MaskMatrix, measure: str = "f") -> QEScore:
    """Greedy matching on the penalty-renewed grid (S + M*S) / 2.

    With an all-ones mask this is bertscore(sim) exactly; with an empty
    alignment and penalty 0 every entry is halved.
    """
    values = sim.values
    if mask.values.shape != values.shape:
        raise ValueError(
            f"mask shape {mask.values.shape} does not match similarity shape {values.shape}"
        )
    renewed = (values + mask.values * values) / 2.0
    precision, recall, f_score = _prf(renewed)
    final = {"p": precision, "r": recall, "f": f_score}[measure]
    return QEScore(precision=precision, recall=recall, f_score=f_score,
                   final=final, variant="align")


def combine_generation_score(match_score: float, gen_score: float, lam: float) -> float:
    """Interpolate a matching score with a fluency score: (1 - lam) * match + lam * gen."""
    lam = check_unit_interval(lam, "lam")
    if not (np.isfinite(match_score) and np.isfinite(gen_score)):
        raise ValueError("interpolation inputs must be finite")
    return (1.0 - lam) * match_score + lam * gen_score


def match_indices(sim: SimilarityMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Greedy match targets: per-row and per-column argmax (lowest index on ties)."""
    return np.argmax(sim.values, axis=1), np.argmax(sim.values, axis=0)


def score_pair(record: SentencePairRecord, config: ScoreConfig) -> QEScore:
    """Score one record under a configuration.

    Alignment variants parse the record's pharaoh line and penalize unaligned
    cells before matching; generation-score variants interpolate the selected
    measure with the record's fluency score. The returned precision/recall/F
    describe the (possibly masked) matching stage; ``final`` adds the
    interpolation when the variant asks for it.
    """
    sim = similarity_matrix(
        record.src_embeddings, record.mt_embeddings, normalize=config.normalize_embeddings
    )
    if config.uses_alignment:
        align = parse_pharaoh(record.alignment)
        mask = build_mask(align, record.k, record.l, config.penalty_a)
        matched = masked_bertscore(sim, mask, config.measure)
    else:
        matched = bertscore(sim, config.measure)
    final = matched.final
    if config.uses_gen_score:
        gen = record.gen_score if config.gen_score_sign == "as_is" else -record.gen_score
        final = combine_generation_score(matched.final, gen, config.lambda_)
    return QEScore(
        precision=matched.precision,
        recall=matched.recall,
        f_score=matched.f_score,
        final=final,
        variant=config.variant,
    )
