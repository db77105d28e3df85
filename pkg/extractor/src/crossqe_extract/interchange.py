"""Serialization into the scorer's sentence-pair interchange format.

The format is UTF-8 JSON Lines, one record per line, with keys ``id``,
``src_tokens``, ``mt_tokens``, ``src_emb``, ``mt_emb``, ``align``,
``gen_score``, ``da`` (nullable) and ``meta`` (``model``, ``layer``,
``dim``). Floats are quantized to nine significant digits before encoding,
matching the precision the format specifies, and NaN/Infinity are refused.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np


def quantize(value: float) -> float:
    """Round a float to the nine significant digits the format carries."""
    return float(f"{value:.9g}")


@dataclass(frozen=True)
class ExtractedPair:
    """One assembled record, ready to serialize."""

    id: str
    src_tokens: list[str]
    mt_tokens: list[str]
    src_embeddings: np.ndarray
    mt_embeddings: np.ndarray
    align: str
    gen_score: float
    da: float | None
    model: str
    layer: int

    def to_json_line(self) -> str:
        dim = int(self.src_embeddings.shape[1])
        payload = {
            "id": self.id,
            "src_tokens": list(self.src_tokens),
            "mt_tokens": list(self.mt_tokens),
            "src_emb": [[quantize(v) for v in row] for row in self.src_embeddings.tolist()],
            "mt_emb": [[quantize(v) for v in row] for row in self.mt_embeddings.tolist()],
            "align": self.align,
            "gen_score": quantize(self.gen_score),
            "da": None if self.da is None else quantize(self.da),
            "meta": {"model": self.model, "layer": self.layer, "dim": dim},
        }
        return json.dumps(payload, ensure_ascii=False, separators=(",", ":"), allow_nan=False)
