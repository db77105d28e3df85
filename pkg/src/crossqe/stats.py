"""Agreement between metric scores and human judgments.

Scores join to gold judgments by record id (a mismatch on either side is a
hard error) and agreement is summarized with Pearson's product-moment
correlation and Kendall's tau-b. Tau-b is computed from exact integer
concordance/discordance/tie counts, so it matches a brute-force pair
enumeration bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import StatsError

_CONSTANT_MSG = "undefined correlation (constant series)"


@dataclass(frozen=True)
class ScoredPairSeries:
    """Parallel (id, metric score, gold judgment) triples, ids unique."""

    entries: tuple[tuple[str, float, float], ...]

    def __post_init__(self) -> None:
        ids = [entry[0] for entry in self.entries]
        if len(set(ids)) != len(ids):
            dupes = sorted({x for x in ids if ids.count(x) > 1})
            raise StatsError(f"duplicate ids in series: {dupes}")
        for rid, metric, gold in self.entries:
            if not (math.isfinite(metric) and math.isfinite(gold)):
                raise StatsError(f"non-finite value for id {rid!r}")

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def metric_values(self) -> np.ndarray:
        return np.array([entry[1] for entry in self.entries], dtype=np.float64)

    @property
    def gold_values(self) -> np.ndarray:
        return np.array([entry[2] for entry in self.entries], dtype=np.float64)


def join_scores(
    scores: Iterable[tuple[str, float]] | Mapping[str, float],
    gold: Iterable[tuple[str, float]] | Mapping[str, float],
) -> ScoredPairSeries:
    """Join metric scores with gold judgments by id.

    Any id present on one side but not the other is an error naming the
    missing ids; the joined series keeps the order of ``scores``.
    """
    score_pairs = list(scores.items()) if isinstance(scores, Mapping) else list(scores)
    gold_map = dict(gold.items()) if isinstance(gold, Mapping) else dict(gold)
    score_ids = {rid for rid, _ in score_pairs}
    missing_gold = sorted(score_ids - set(gold_map))
    missing_scores = sorted(set(gold_map) - score_ids)
    if missing_gold or missing_scores:
        parts = []
        if missing_gold:
            parts.append(f"ids without gold judgments: {missing_gold[:10]}")
        if missing_scores:
            parts.append(f"gold ids without scores: {missing_scores[:10]}")
        raise StatsError("score/gold join failed; " + "; ".join(parts))
    return ScoredPairSeries(
        tuple((rid, float(value), float(gold_map[rid])) for rid, value in score_pairs)
    )


def _check_series(series: ScoredPairSeries) -> tuple[np.ndarray, np.ndarray]:
    if len(series) < 2:
        raise StatsError(f"need at least 2 pairs for a correlation, got {len(series)}")
    x = series.metric_values
    y = series.gold_values
    if np.ptp(x) == 0.0 or np.ptp(y) == 0.0:
        raise StatsError(_CONSTANT_MSG)
    return x, y


def pearson(series: ScoredPairSeries) -> float:
    """Pearson product-moment correlation between metric and gold values.

    Equals the two-pass textbook formula (centered cross products over the
    product of centered norms) up to floating-point rounding.
    """
    x, y = _check_series(series)
    return float(np.corrcoef(x, y)[0, 1])


def kendall(series: ScoredPairSeries) -> float:
    """Kendall rank correlation, tau-b (tie-corrected) variant.

    Counted over all pairs i < j: concordant minus discordant over the
    geometric mean of non-tied pair counts,
    ``(C - D) / sqrt((n0 - n1) * (n0 - n2))`` with n0 the total pair count
    and n1/n2 the pairs tied on each side. Without ties this reduces to
    (C - D) / n0. Quadratic in the series length, which is fine at the
    evaluation sizes this tool targets.
    """
    x, y = _check_series(series)
    n = len(x)
    concordant = 0
    discordant = 0
    for i in range(n - 1):
        dx = np.sign(x[i + 1:] - x[i])
        dy = np.sign(y[i + 1:] - y[i])
        product = dx * dy
        concordant += int(np.count_nonzero(product > 0))
        discordant += int(np.count_nonzero(product < 0))
    n0 = n * (n - 1) // 2
    n1 = _tied_pairs(x)
    n2 = _tied_pairs(y)
    return (concordant - discordant) / math.sqrt((n0 - n1) * (n0 - n2))


def _tied_pairs(values: np.ndarray) -> int:
    _, counts = np.unique(values, return_counts=True)
    return int(sum(c * (c - 1) // 2 for c in counts))
