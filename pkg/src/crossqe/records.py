"""Interchange files that carry embedded sentence pairs between tools.

The format is UTF-8 JSON Lines: one record per line, strict JSON, with keys
``id``, ``src_tokens``, ``mt_tokens``, ``src_emb``, ``mt_emb``, ``align``,
``gen_score``, ``da`` (nullable) and ``meta`` (``model``, ``layer``, ``dim``).
Floats are serialized with 9 significant digits, which makes a write/read
cycle idempotent: values already at that precision round-trip exactly.
Blank lines and NaN/Infinity literals are rejected.

``read_records`` is strict and raises on the first problem; ``scan_file``
walks a whole file leniently and returns a report instead, which is what the
``validate`` subcommand prints.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

import numpy as np

from .alignment import parse_pharaoh
from .errors import AlignmentError, FormatError, InvariantError

_KEYS = ("id", "src_tokens", "mt_tokens", "src_emb", "mt_emb", "align", "gen_score", "da", "meta")
_META_KEYS = ("model", "layer", "dim")

# Stable invariant names; validation messages start with one of these.
INVARIANT_ROW_COUNT = "row-count mismatch"
INVARIANT_WIDTH = "embedding width mismatch"
INVARIANT_EMPTY_SIDE = "empty side"
INVARIANT_ALIGN_PARSE = "alignment parse error"
INVARIANT_ALIGN_RANGE = "alignment index out of range"
INVARIANT_DUPLICATE_ID = "duplicate id"


@dataclass(frozen=True)
class RecordMeta:
    """Provenance of the embeddings: extractor model, layer index, width."""

    model: str
    layer: int
    dim: int


@dataclass(eq=False)
class SentencePairRecord:
    """One (source, candidate) pair with per-token embeddings.

    Embedding matrices are float64 with one row per token; they are made
    read-only at construction so loaded records are safe to share.
    """

    id: str
    src_tokens: list[str]
    mt_tokens: list[str]
    src_embeddings: np.ndarray
    mt_embeddings: np.ndarray
    alignment: str
    gen_score: float
    da_score: float | None
    meta: RecordMeta

    def __post_init__(self) -> None:
        self.src_embeddings = _as_readonly_matrix(self.src_embeddings, "src_embeddings")
        self.mt_embeddings = _as_readonly_matrix(self.mt_embeddings, "mt_embeddings")

    @property
    def k(self) -> int:
        return len(self.src_tokens)

    @property
    def l(self) -> int:
        return len(self.mt_tokens)

    def violations(self) -> list[str]:
        """Invariant violations of this record alone (no file-level checks)."""
        out = _side_violations("source", self.src_tokens, self.src_embeddings, self.meta.dim)
        out += _side_violations("candidate", self.mt_tokens, self.mt_embeddings, self.meta.dim)
        out += _alignment_violations(self.alignment, self.k, self.l)
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SentencePairRecord):
            return NotImplemented
        return (
            self.id == other.id
            and self.src_tokens == other.src_tokens
            and self.mt_tokens == other.mt_tokens
            and np.array_equal(self.src_embeddings, other.src_embeddings)
            and np.array_equal(self.mt_embeddings, other.mt_embeddings)
            and self.alignment == other.alignment
            and self.gen_score == other.gen_score
            and self.da_score == other.da_score
            and self.meta == other.meta
        )


@dataclass(frozen=True)
class ValidationIssue:
    where: str
    reason: str


@dataclass(frozen=True)
class ValidationReport:
    checked: int
    issues: tuple[ValidationIssue, ...]

    @property
    def ok(self) -> bool:
        return not self.issues


def _as_readonly_matrix(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim == 1 and arr.size == 0:
        arr = arr.reshape(0, 0)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be a 2-d array, got shape {arr.shape}")
    if arr.flags.writeable:
        arr = arr.copy()
        arr.flags.writeable = False
    return arr


def _side_violations(side: str, tokens: Sequence[str], rows, dim: int) -> list[str]:
    out = []
    if len(tokens) == 0:
        out.append(f"{INVARIANT_EMPTY_SIDE}: {side} side has no tokens")
    if len(rows) != len(tokens):
        out.append(
            f"{INVARIANT_ROW_COUNT}: {side} side has {len(tokens)} tokens "
            f"but {len(rows)} embedding rows"
        )
    bad_widths = sorted({len(row) for row in rows if len(row) != dim})
    if bad_widths:
        out.append(
            f"{INVARIANT_WIDTH}: {side} rows of width {bad_widths} "
            f"do not match declared dim {dim}"
        )
    return out


def _alignment_violations(align_text: str, k: int, l: int) -> list[str]:
    try:
        align = parse_pharaoh(align_text)
    except AlignmentError as exc:
        return [f"{INVARIANT_ALIGN_PARSE}: {exc}"]
    bad = [(i, j) for i, j in align if i >= k or j >= l]
    if bad:
        return [f"{INVARIANT_ALIGN_RANGE}: pairs {bad} outside {k}x{l}"]
    return []


def _reject_constant(token: str):
    raise ValueError(f"non-finite number {token}")


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _parse_line(text: str, line_no: int) -> dict:
    """Structural parse of one line; invariant checks happen separately."""
    try:
        obj = json.loads(text, parse_constant=_reject_constant)
    except ValueError as exc:
        raise FormatError(f"not a valid record object ({exc})", line=line_no) from None
    if not isinstance(obj, dict):
        raise FormatError("record line is not an object", line=line_no)
    missing = [key for key in _KEYS if key not in obj]
    extra = [key for key in obj if key not in _KEYS]
    if missing or extra:
        raise FormatError(
            f"bad record keys (missing {missing}, unexpected {extra})", line=line_no
        )
    if not isinstance(obj["id"], str) or not obj["id"]:
        raise FormatError("field 'id' must be a non-empty string", line=line_no)
    for key in ("src_tokens", "mt_tokens"):
        value = obj[key]
        if not isinstance(value, list) or not all(isinstance(t, str) for t in value):
            raise FormatError(f"field {key!r} must be a list of strings", line=line_no)
    for key in ("src_emb", "mt_emb"):
        value = obj[key]
        if not isinstance(value, list) or not all(
            isinstance(row, list) and all(_is_number(v) for v in row) for row in value
        ):
            raise FormatError(f"field {key!r} must be a list of number rows", line=line_no)
    if not isinstance(obj["align"], str):
        raise FormatError("field 'align' must be a string", line=line_no)
    if not _is_number(obj["gen_score"]):
        raise FormatError("field 'gen_score' must be a number", line=line_no)
    if obj["da"] is not None and not _is_number(obj["da"]):
        raise FormatError("field 'da' must be a number or null", line=line_no)
    meta = obj["meta"]
    if (
        not isinstance(meta, dict)
        or sorted(meta) != sorted(_META_KEYS)
        or not isinstance(meta["model"], str)
        or not _is_number(meta["layer"])
        or isinstance(meta["layer"], float)
        or meta["layer"] < 0
        or not _is_number(meta["dim"])
        or isinstance(meta["dim"], float)
        or meta["dim"] < 1
    ):
        raise FormatError(
            "field 'meta' must be an object with string 'model', "
            "integer 'layer' >= 0 and integer 'dim' >= 1",
            line=line_no,
        )
    return obj


def _raw_violations(raw: dict) -> list[str]:
    dim = raw["meta"]["dim"]
    out = _side_violations("source", raw["src_tokens"], raw["src_emb"], dim)
    out += _side_violations("candidate", raw["mt_tokens"], raw["mt_emb"], dim)
    out += _alignment_violations(raw["align"], len(raw["src_tokens"]), len(raw["mt_tokens"]))
    return out


def _build(raw: dict) -> SentencePairRecord:
    meta = RecordMeta(model=raw["meta"]["model"], layer=raw["meta"]["layer"], dim=raw["meta"]["dim"])
    dim = meta.dim
    src = np.asarray(raw["src_emb"], dtype=np.float64).reshape(len(raw["src_emb"]), dim)
    mt = np.asarray(raw["mt_emb"], dtype=np.float64).reshape(len(raw["mt_emb"]), dim)
    return SentencePairRecord(
        id=raw["id"],
        src_tokens=list(raw["src_tokens"]),
        mt_tokens=list(raw["mt_tokens"]),
        src_embeddings=src,
        mt_embeddings=mt,
        alignment=raw["align"],
        gen_score=float(raw["gen_score"]),
        da_score=None if raw["da"] is None else float(raw["da"]),
        meta=meta,
    )


def read_records(path) -> list[SentencePairRecord]:
    """Load an interchange file, raising on the first malformed or invalid record.

    Raises FormatError with a 1-based line number for unparseable lines and
    InvariantError naming the record id and the violated invariant otherwise.
    I/O failures propagate as OSError.
    """
    records = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            text = line.rstrip("\n")
            if not text.strip():
                raise FormatError("blank line", line=line_no)
            raw = _parse_line(text, line_no)
            reasons = _raw_violations(raw)
            if reasons:
                raise InvariantError(raw["id"], "; ".join(reasons))
            records.append(_build(raw))
    return records


def _q9(value: float) -> float:
    """Quantize to 9 significant digits (idempotent)."""
    return float(f"{value:.9g}")


def _record_payload(rec: SentencePairRecord) -> dict:
    return {
        "id": rec.id,
        "src_tokens": list(rec.src_tokens),
        "mt_tokens": list(rec.mt_tokens),
        "src_emb": [[_q9(v) for v in row] for row in rec.src_embeddings.tolist()],
        "mt_emb": [[_q9(v) for v in row] for row in rec.mt_embeddings.tolist()],
        "align": rec.alignment,
        "gen_score": _q9(rec.gen_score),
        "da": None if rec.da_score is None else _q9(rec.da_score),
        "meta": {"model": rec.meta.model, "layer": rec.meta.layer, "dim": rec.meta.dim},
    }


def write_records(records: Iterable[SentencePairRecord], path) -> None:
    """Write records as JSON Lines, one per record, floats at 9 significant digits.

    Records are validated first; an invalid record raises InvariantError and
    nothing is written.
    """
    records = list(records)
    seen: set[str] = set()
    for rec in records:
        reasons = rec.violations()
        if rec.id in seen:
            reasons.append(f"{INVARIANT_DUPLICATE_ID}: {rec.id!r} appears more than once")
        seen.add(rec.id)
        if reasons:
            raise InvariantError(rec.id, "; ".join(reasons))
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(_record_payload(rec), ensure_ascii=False,
                                separators=(",", ":"), allow_nan=False))
            fh.write("\n")


def validate_records(records: Sequence[SentencePairRecord]) -> ValidationReport:
    """Check every record against the format invariants; report, never raise."""
    issues = []
    seen: set[str] = set()
    for rec in records:
        where = f"record {rec.id!r}"
        for reason in rec.violations():
            issues.append(ValidationIssue(where, reason))
        if rec.id in seen:
            issues.append(ValidationIssue(where, f"{INVARIANT_DUPLICATE_ID}: {rec.id!r} appears more than once"))
        seen.add(rec.id)
    return ValidationReport(checked=len(records), issues=tuple(issues))


def scan_file(path) -> ValidationReport:
    """Lenient whole-file validation: collect all problems instead of raising.

    Structural problems are reported by line number, invariant violations by
    record id. I/O failures still propagate as OSError.
    """
    issues = []
    checked = 0
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            checked += 1
            text = line.rstrip("\n")
            if not text.strip():
                issues.append(ValidationIssue(f"line {line_no}", "blank line"))
                continue
            try:
                raw = _parse_line(text, line_no)
            except FormatError as exc:
                issues.append(ValidationIssue(f"line {line_no}", exc.reason))
                continue
            where = f"record {raw['id']!r} (line {line_no})"
            for reason in _raw_violations(raw):
                issues.append(ValidationIssue(where, reason))
            if raw["id"] in seen:
                issues.append(
                    ValidationIssue(where, f"{INVARIANT_DUPLICATE_ID}: {raw['id']!r} appears more than once")
                )
            seen.add(raw["id"])
    return ValidationReport(checked=checked, issues=tuple(issues))
