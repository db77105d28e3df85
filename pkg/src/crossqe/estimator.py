"""Scikit-learn style front end over the pair scorer."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .records import SentencePairRecord
from .scoring import QEScore, ScoreConfig, score_pair


class QualityEstimator(BaseEstimator):
    """Zero-shot quality scorer for embedded sentence-pair records.

    The scorer has no trainable state: ``fit`` only validates the
    hyperparameters, so the estimator can be cloned, grid-searched, and
    pipelined like any other. ``predict`` returns one final score per record.

    Parameters
    ----------
    variant : {"base", "align", "ppl", "align+ppl"}, default="base"
        Which scoring pipeline to run.
    penalty_a : float, default=0.8
        Penalty applied to similarities between unaligned tokens, in [0, 1].
    lambda_ : float, default=0.01
        Interpolation weight on the generation (fluency) score, in [0, 1].
    measure : {"f", "p", "r"}, default="f"
        Which matching measure becomes the final value.
    normalize_embeddings : bool, default=False
        Scale embedding rows to unit length before the dot products.
    gen_score_sign : {"as_is", "negated"}, default="as_is"
        Flip generation scores whose convention is lower-is-better.
    """

    def __init__(
        self,
        variant: str = "base",
        penalty_a: float = 0.8,
        lambda_: float = 0.01,
        measure: str = "f",
        normalize_embeddings: bool = False,
        gen_score_sign: str = "as_is",
    ):
        self.variant = variant
        self.penalty_a = penalty_a
        self.lambda_ = lambda_
        self.measure = measure
        self.normalize_embeddings = normalize_embeddings
        self.gen_score_sign = gen_score_sign

    def _config(self) -> ScoreConfig:
        return ScoreConfig(
            variant=self.variant,
            penalty_a=self.penalty_a,
            lambda_=self.lambda_,
            measure=self.measure,
            normalize_embeddings=self.normalize_embeddings,
            gen_score_sign=self.gen_score_sign,
        )

    def fit(self, X=None, y=None) -> "QualityEstimator":
        """Validate parameters; there is nothing to learn."""
        self._config()
        return self

    def predict(self, records: list[SentencePairRecord]) -> np.ndarray:
        """Final score per record under the configured variant."""
        config = self._config()
        return np.array([score_pair(rec, config).final for rec in records], dtype=np.float64)

    def score_records(self, records: list[SentencePairRecord]) -> list[QEScore]:
        """Full precision/recall/F breakdown per record."""
        config = self._config()
        return [score_pair(rec, config) for rec in records]
