"""Assemble interchange files from line-aligned tokenized text.

Inputs are UTF-8 text files with one sentence per line and whitespace
separated subword tokens, already tokenized with the model's own scheme.
The source, candidate and alignment files (plus the optional gold-score
file) must have equal line counts. Any problem aborts the whole run naming
the offending line; the output file only appears when every line succeeded.
"""

from __future__ import annotations

import math
import os
import re

import numpy as np

from .errors import ExtractError, InputError
from .interchange import ExtractedPair
from .mlm import MlmSession

_ALIGN_PAIR = re.compile(r"^(\d+)-(\d+)$")


def read_lines(path: str) -> list[str]:
    with open(path, encoding="utf-8") as handle:
        return handle.read().splitlines()


def _check_alignment(line: str, k: int, l: int, line_no: int) -> None:
    """Validate one alignment line against the pair's token counts.

    The format is whitespace separated ``i-j`` index pairs; an empty line
    means no links. Indices are checked here so a bad alignment aborts with
    its line number instead of surfacing later as an invalid record.
    """
    for field in line.split():
        match = _ALIGN_PAIR.match(field)
        if match is None:
            raise InputError(f"unparseable alignment token {field!r}", line_no)
        i, j = int(match.group(1)), int(match.group(2))
        if i >= k or j >= l:
            raise InputError(f"alignment pair ({i}, {j}) out of range for a {k}x{l} pair", line_no)


def _parse_da(line: str, line_no: int) -> float:
    try:
        value = float(line.strip())
    except ValueError:
        raise InputError(f"unparseable gold score {line.strip()!r}", line_no) from None
    if not math.isfinite(value):
        raise InputError(f"non-finite gold score {line.strip()!r}", line_no)
    return value


def _extract_side(session: MlmSession, tokens: list[str], side: str, line_no: int) -> np.ndarray:
    try:
        matrix = session.embed_sentence(tokens)
    except ExtractError as exc:
        raise InputError(f"{side} side: {exc}", line_no) from None
    if not np.isfinite(matrix).all():
        raise InputError(f"{side} side: model produced non-finite embeddings", line_no)
    return matrix


def build_interchange(
    src_path: str,
    mt_path: str,
    align_path: str,
    session: MlmSession,
    output_path: str,
    da_path: str | None = None,
) -> int:
    """Extract every line pair and write one interchange record per line.

    Returns the number of records written. Records carry ids ``line-0001``,
    ``line-0002`` and so on, matching the 1-based input line numbers.
    """
    sources = read_lines(src_path)
    candidates = read_lines(mt_path)
    alignments = read_lines(align_path)
    gold = None if da_path is None else read_lines(da_path)

    counts = {"src": len(sources), "mt": len(candidates), "align": len(alignments)}
    if gold is not None:
        counts["da"] = len(gold)
    if len(set(counts.values())) > 1:
        listed = ", ".join(f"{name} {count}" for name, count in counts.items())
        raise InputError(f"line counts differ: {listed}")

    tmp_path = f"{output_path}.tmp"
    written = 0
    try:
        with open(tmp_path, "w", encoding="utf-8") as handle:
            for index, (src_line, mt_line, align_line) in enumerate(
                zip(sources, candidates, alignments), start=1
            ):
                src_tokens = src_line.split()
                mt_tokens = mt_line.split()
                if not src_tokens:
                    raise InputError("empty source sentence", index)
                if not mt_tokens:
                    raise InputError("empty candidate sentence", index)
                _check_alignment(align_line, len(src_tokens), len(mt_tokens), index)
                da = None if gold is None else _parse_da(gold[index - 1], index)

                src_emb = _extract_side(session, src_tokens, "source", index)
                mt_emb = _extract_side(session, mt_tokens, "candidate", index)
                try:
                    gen_score = session.generation_score(mt_tokens)
                except ExtractError as exc:
                    raise InputError(f"candidate side: {exc}", index) from None
                if not math.isfinite(gen_score):
                    raise InputError("candidate side: non-finite generation score", index)

                record = ExtractedPair(
                    id=f"line-{index:04d}",
                    src_tokens=src_tokens,
                    mt_tokens=mt_tokens,
                    src_embeddings=src_emb,
                    mt_embeddings=mt_emb,
                    align=" ".join(align_line.split()),
                    gen_score=gen_score,
                    da=da,
                    model=session.model_name,
                    layer=session.layer,
                )
                handle.write(record.to_json_line() + "\n")
                written += 1
    except BaseException:
        try:
            os.unlink(tmp_path)
        except OSError:
            pass
        raise
    os.replace(tmp_path, output_path)
    return written
