"""Pharaoh-style word alignments and the unaligned-position penalty mask.

An alignment line is whitespace-separated ``i-j`` pairs of 0-based token
indices, e.g. ``"0-0 1-2 2-1"``. Duplicate pairs collapse into one link.
The mask built from an alignment keeps aligned cells at 1 and scales every
other cell by a penalty in [0, 1].
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import AlignmentError
from .validation import check_unit_interval

_PAIR_RE = re.compile(r"^(\d+)-(\d+)$")


@dataclass(frozen=True)
class AlignmentSet:
    """An unordered set of (source index, target index) links."""

    pairs: frozenset[tuple[int, int]]

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self.pairs))

    def __contains__(self, pair: tuple[int, int]) -> bool:
        return pair in self.pairs

    def to_pharaoh(self) -> str:
        """Serialize back to a canonical (sorted) pharaoh line."""
        return " ".join(f"{i}-{j}" for i, j in sorted(self.pairs))


@dataclass(frozen=True)
class MaskMatrix:
    """Penalty mask over a k x l similarity grid: 1 on links, ``penalty`` elsewhere."""

    values: np.ndarray
    penalty: float


def parse_pharaoh(line: str) -> AlignmentSet:
    """Parse a pharaoh alignment line into an AlignmentSet.

    The empty (or all-whitespace) line is the empty alignment. Any token
    that is not two dash-joined non-negative integers is an error.
    """
    pairs = set()
    for token in line.split():
        match = _PAIR_RE.match(token)
        if match is None:
            raise AlignmentError(f"malformed alignment token {token!r}")
        pairs.add((int(match.group(1)), int(match.group(2))))
    return AlignmentSet(frozenset(pairs))


def build_mask(align: AlignmentSet, k: int, l: int, penalty: float) -> MaskMatrix:
    """Build the k x l penalty mask for an alignment.

    Aligned cells get 1.0, all others the penalty value. A pair outside the
    matrix is a hard error, never silently dropped.
    """
    if k < 1 or l < 1:
        raise ValueError(f"mask dimensions must be positive, got {k}x{l}")
    penalty = check_unit_interval(penalty, "penalty")
    values = np.full((k, l), penalty, dtype=np.float64)
    for i, j in align:
        if not (0 <= i < k and 0 <= j < l):
            raise AlignmentError(
                f"alignment pair ({i}, {j}) out of range for a {k}x{l} matrix"
            )
        values[i, j] = 1.0
    values.flags.writeable = False
    return MaskMatrix(values=values, penalty=penalty)


def symmetrize(forward: AlignmentSet, backward: AlignmentSet, mode: str = "union") -> AlignmentSet:
    """Merge two directional alignments over the same sentence pair."""
    if mode == "union":
        return AlignmentSet(forward.pairs | backward.pairs)
    if mode == "intersection":
        return AlignmentSet(forward.pairs & backward.pairs)
    raise ValueError(f"unknown symmetrization mode {mode!r}")
