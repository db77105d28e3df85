"""Shared helpers for the extractor tests.

The scorer package is deliberately consumed only through its installed
command line interface and its file format; nothing here imports it.
"""

from __future__ import annotations

import json
import shutil
import subprocess
import sys
from pathlib import Path


def validate_with_scorer(path: str | Path) -> tuple[int, str]:
    """Run the scorer's validate subcommand on a file in a subprocess."""
    script = shutil.which("crossqe")
    if script:
        cmd = [script, "validate", "--input", str(path)]
    else:
        cmd = [sys.executable, "-m", "crossqe.cli", "validate", "--input", str(path)]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    return proc.returncode, proc.stdout


def read_jsonl(path: str | Path) -> list[dict]:
    with open(path, encoding="utf-8") as handle:
        return [json.loads(line) for line in handle]


def token_counts(path: str | Path) -> list[int]:
    with open(path, encoding="utf-8") as handle:
        return [len(line.split()) for line in handle.read().splitlines()]


def write_lines(path: Path, lines: list[str]) -> str:
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    return str(path)
