"""Command line interface for the extractor.

One command: read line-aligned tokenized text (source, candidate,
alignment, optional gold scores), run the masked LM, and write interchange
records the scorer can consume directly.

Exit codes: 0 success, 1 model or data error, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .builder import build_interchange
from .config import DEFAULT_BATCH_SIZE, DEFAULT_MODEL, ExtractionConfig
from .errors import ExtractError
from .mlm import MlmSession

EXIT_OK = 0
EXIT_DATA = 1
EXIT_USAGE = 2
EXIT_IO = 3

log = logging.getLogger("crossqe_extract")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crossqe-extract",
        description="Extract per-token embeddings and fluency scores into interchange records.",
    )
    parser.add_argument("--src", required=True, help="source sentences, one tokenized line per pair")
    parser.add_argument("--mt", required=True, help="candidate sentences, line-aligned with --src")
    parser.add_argument("--align", required=True, help="word alignments in i-j format, line-aligned")
    parser.add_argument("--da", default=None, help="optional gold quality scores, one float per line")
    parser.add_argument("--model", default=DEFAULT_MODEL, help="checkpoint name or local path")
    parser.add_argument("--layer", type=int, default=None, help="hidden-state layer to export (default: by model family)")
    parser.add_argument("--max-len", type=int, default=None, help="length cap incl. boundary markers (default: model limit)")
    parser.add_argument("--batch", type=int, default=DEFAULT_BATCH_SIZE, help="masked positions per forward pass")
    parser.add_argument("--output", required=True, help="interchange file to write")
    return parser


def _check_args(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    if args.layer is not None and args.layer < 0:
        parser.error(f"--layer must be >= 0, got {args.layer}")
    if args.max_len is not None and args.max_len < 3:
        parser.error(f"--max-len must be >= 3, got {args.max_len}")
    if args.batch < 1:
        parser.error(f"--batch must be >= 1, got {args.batch}")
    if not args.model:
        parser.error("--model must not be empty")


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    parser = build_parser()
    args = parser.parse_args(argv)
    _check_args(parser, args)
    config = ExtractionConfig(
        model=args.model, layer=args.layer, max_len=args.max_len, batch_size=args.batch
    )
    try:
        session = MlmSession.load(config)
        written = build_interchange(
            args.src, args.mt, args.align, session, args.output, da_path=args.da
        )
    except OSError as exc:
        log.error("%s", exc)
        return EXIT_IO
    except ExtractError as exc:
        log.error("%s", exc)
        return EXIT_DATA
    print(f"wrote {written} record(s) to {args.output}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
