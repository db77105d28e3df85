"""Regenerate the bundled synthetic interchange fixture used by the tests.

200 sentence pairs with 10 tokens per side and 16-dimensional unit-norm
embeddings. Each candidate starts as a copy of its source and then c rows
(c drawn from 0..8) are replaced with fresh random vectors; the gold da
score is 8 - c and the generation score is a noisy decreasing function of
c. The identity alignment links token i to token i.

Usage: python tools/make_synthetic_fixture.py [output.jsonl]
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

from crossqe.records import RecordMeta, SentencePairRecord, write_records

SEED = 20240816
N_PAIRS = 200
N_TOKENS = 10
DIM = 16

DEFAULT_OUTPUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "synthetic_200.jsonl"


def _unit_rows(rng: np.random.Generator, rows: int) -> np.ndarray:
    vectors = rng.normal(size=(rows, DIM))
    return vectors / np.linalg.norm(vectors, axis=1, keepdims=True)


def build_records(n_pairs: int = N_PAIRS, seed: int = SEED) -> list[SentencePairRecord]:
    rng = np.random.default_rng(seed)
    alignment = " ".join(f"{i}-{i}" for i in range(N_TOKENS))
    meta = RecordMeta(model="synthetic-rng", layer=9, dim=DIM)
    records = []
    for idx in range(n_pairs):
        corruptions = int(rng.integers(0, 9))
        src = _unit_rows(rng, N_TOKENS)
        mt = src.copy()
        if corruptions:
            rows = rng.choice(N_TOKENS, size=corruptions, replace=False)
            mt[rows] = _unit_rows(rng, corruptions)
        gen_score = -(0.2 + 0.6 * corruptions / 8 + rng.normal(0.0, 0.03))
        records.append(
            SentencePairRecord(
                id=f"pair-{idx:04d}",
                src_tokens=[f"s{t}" for t in range(N_TOKENS)],
                mt_tokens=[f"t{t}" for t in range(N_TOKENS)],
                src_embeddings=src,
                mt_embeddings=mt,
                alignment=alignment,
                gen_score=float(gen_score),
                da_score=float(8 - corruptions),
                meta=meta,
            )
        )
    return records


def main() -> None:
    output = Path(sys.argv[1]) if len(sys.argv) > 1 else DEFAULT_OUTPUT
    output.parent.mkdir(parents=True, exist_ok=True)
    write_records(build_records(), output)
    print(f"wrote {N_PAIRS} records to {output}")


if __name__ == "__main__":
    main()
