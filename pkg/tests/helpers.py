"""Shared builders and brute-force reference implementations for the tests.

The reference functions here are deliberately written as straight-line loops
over Python floats so the library's vectorized code is checked against an
independent computation, not against itself.
"""

from __future__ import annotations

import json
import math

import numpy as np

from crossqe.records import RecordMeta, SentencePairRecord

TOKEN_POOL = ["der", "Haus", "straße", "東京", "a-b", "x'y", 'quo"te', "...", "42", "¿qué?"]


def q9(value: float) -> float:
    return float(f"{value:.9g}")


def quantized(rng: np.random.Generator, shape, scale: float = 1.0) -> np.ndarray:
    values = rng.normal(scale=scale, size=shape)
    return np.array([[q9(v) for v in row] for row in values], dtype=np.float64)


def make_record(
    rec_id: str = "rec-0",
    k: int = 3,
    l: int = 4,
    d: int = 5,
    rng: np.random.Generator | None = None,
    alignment: str | None = None,
    gen_score: float = -1.5,
    da_score: float | None = 2.0,
    meta: RecordMeta | None = None,
) -> SentencePairRecord:
    rng = rng or np.random.default_rng(7)
    if alignment is None:
        alignment = " ".join(f"{i}-{i}" for i in range(min(k, l)))
    return SentencePairRecord(
        id=rec_id,
        src_tokens=[f"s{i}" for i in range(k)],
        mt_tokens=[f"t{j}" for j in range(l)],
        src_embeddings=quantized(rng, (k, d)),
        mt_embeddings=quantized(rng, (l, d)),
        alignment=alignment,
        gen_score=q9(gen_score),
        da_score=None if da_score is None else q9(da_score),
        meta=meta or RecordMeta(model="unit-test", layer=9, dim=d),
    )


def random_record(rng: np.random.Generator, rec_id: str) -> SentencePairRecord:
    """A fully random, valid record with pre-quantized floats."""
    k = int(rng.integers(1, 6))
    l = int(rng.integers(1, 6))
    d = int(rng.integers(1, 9))
    n_links = int(rng.integers(0, k * l + 1))
    cells = [(i, j) for i in range(k) for j in range(l)]
    rng.shuffle(cells)
    alignment = " ".join(f"{i}-{j}" for i, j in sorted(cells[:n_links]))
    return SentencePairRecord(
        id=rec_id,
        src_tokens=[TOKEN_POOL[int(rng.integers(0, len(TOKEN_POOL)))] for _ in range(k)],
        mt_tokens=[TOKEN_POOL[int(rng.integers(0, len(TOKEN_POOL)))] for _ in range(l)],
        src_embeddings=quantized(rng, (k, d), scale=3.0),
        mt_embeddings=quantized(rng, (l, d), scale=3.0),
        alignment=alignment,
        gen_score=q9(float(rng.normal(-2.0, 1.0))),
        da_score=None if rng.integers(0, 4) == 0 else q9(float(rng.uniform(0, 100))),
        meta=RecordMeta(model="unit-test", layer=int(rng.integers(0, 13)), dim=d),
    )


def prf_reference(values) -> tuple[float, float, float]:
    """Greedy-matching precision/recall/F by exhaustive enumeration."""
    rows = [list(map(float, row)) for row in values]
    k = len(rows)
    l = len(rows[0])
    row_best = []
    for i in range(k):
        best = rows[i][0]
        for j in range(1, l):
            if rows[i][j] > best:
                best = rows[i][j]
        row_best.append(best)
    col_best = []
    for j in range(l):
        best = rows[0][j]
        for i in range(1, k):
            if rows[i][j] > best:
                best = rows[i][j]
        col_best.append(best)
    recall = sum(row_best) / k
    precision = sum(col_best) / l
    total = precision + recall
    f_score = 0.0 if total == 0.0 else 2.0 * precision * recall / total
    return precision, recall, f_score


def pearson_reference(x, y) -> float:
    """Two-pass product-moment correlation over plain Python floats."""
    n = len(x)
    mean_x = sum(x) / n
    mean_y = sum(y) / n
    num = sum((a - mean_x) * (b - mean_y) for a, b in zip(x, y))
    den = math.sqrt(
        sum((a - mean_x) ** 2 for a in x) * sum((b - mean_y) ** 2 for b in y)
    )
    return num / den


def kendall_reference(x, y) -> float:
    """Tau-b by enumerating every pair (quadratic)."""
    n = len(x)
    concordant = 0
    discordant = 0
    tied_x = 0
    tied_y = 0
    for i in range(n - 1):
        for j in range(i + 1, n):
            dx = x[j] - x[i]
            dy = y[j] - y[i]
            if dx == 0:
                tied_x += 1
            if dy == 0:
                tied_y += 1
            if dx == 0 or dy == 0:
                continue
            if (dx > 0) == (dy > 0):
                concordant += 1
            else:
                discordant += 1
    n0 = n * (n - 1) // 2
    return (concordant - discordant) / math.sqrt((n0 - tied_x) * (n0 - tied_y))


def record_json(rec: SentencePairRecord) -> dict:
    """The raw JSON object for a record, for mutation-based tests."""
    return {
        "id": rec.id,
        "src_tokens": list(rec.src_tokens),
        "mt_tokens": list(rec.mt_tokens),
        "src_emb": [[q9(v) for v in row] for row in rec.src_embeddings.tolist()],
        "mt_emb": [[q9(v) for v in row] for row in rec.mt_embeddings.tolist()],
        "align": rec.alignment,
        "gen_score": q9(rec.gen_score),
        "da": None if rec.da_score is None else q9(rec.da_score),
        "meta": {"model": rec.meta.model, "layer": rec.meta.layer, "dim": rec.meta.dim},
    }


def write_raw_lines(path, objects) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for obj in objects:
            fh.write(json.dumps(obj, ensure_ascii=False, separators=(",", ":")))
            fh.write("\n")
