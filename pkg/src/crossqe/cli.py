"""Command-line front end: score, evaluate, sweep, validate.

Exit codes: 0 success, 1 data or validation error, 2 usage error,
3 I/O error. Score files are TSV with an ``id<TAB>score`` header and scores
printed to 6 decimal places; correlations are printed to 3.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from .errors import FormatError, QEError, StatsError
from .records import read_records, scan_file
from .scoring import GEN_SCORE_SIGNS, MEASURES, VARIANTS, ScoreConfig, score_pair
from .stats import ScoredPairSeries, join_scores, kendall, pearson

EXIT_OK = 0
EXIT_DATA = 1
EXIT_USAGE = 2
EXIT_IO = 3

DEFAULT_PENALTY_VALUES = (0.0, 0.2, 0.4, 0.8, 1.0)
DEFAULT_LAMBDA_GRID = (0.0, 0.03, 0.005)  # min, max, step

log = logging.getLogger("crossqe")


@dataclass(frozen=True)
class SweepSpec:
    """A swept parameter name plus the explicit list of values to try."""

    parameter: str
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.parameter not in ("lambda", "penalty"):
            raise ValueError(f"unknown sweep parameter {self.parameter!r}")
        if not self.values:
            raise ValueError("sweep needs at least one value")
        for value in self.values:
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"sweep value {value} outside [0, 1]")

    @classmethod
    def from_grid(cls, parameter: str, lo: float, hi: float, step: float) -> "SweepSpec":
        if step <= 0.0:
            raise ValueError(f"sweep step must be positive, got {step}")
        if lo > hi:
            raise ValueError(f"sweep minimum {lo} exceeds maximum {hi}")
        count = int(math.floor((hi - lo) / step + 1e-9)) + 1
        values = tuple(round(lo + i * step, 12) for i in range(count))
        return cls(parameter, values)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crossqe",
        description="Reference-free translation quality scores from cross-lingual embeddings.",
        epilog="Exit codes: 0 ok, 1 data error, 2 usage error, 3 i/o error.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_score = sub.add_parser("score", help="score an interchange file to a TSV")
    p_score.add_argument("--input", required=True, help="interchange JSONL file")
    p_score.add_argument("--output", required=True, help="output TSV (id, score)")
    _add_scoring_flags(p_score)
    p_score.set_defaults(handler=_cmd_score)

    p_eval = sub.add_parser("evaluate", help="correlate a score TSV against gold judgments")
    p_eval.add_argument("--scores", required=True, help="score TSV from the score subcommand")
    p_eval.add_argument("--gold", required=True,
                        help="gold judgments: (id, da) TSV or an interchange file with da set")
    p_eval.add_argument("--metric", choices=("pearson", "kendall", "both"), default="both")
    p_eval.set_defaults(handler=_cmd_evaluate)

    p_sweep = sub.add_parser("sweep", help="score and evaluate over a grid of one parameter")
    p_sweep.add_argument("--input", required=True, help="interchange JSONL file")
    p_sweep.add_argument("--output", required=True, help="output TSV table")
    p_sweep.add_argument("--param", required=True, choices=("lambda", "penalty"))
    p_sweep.add_argument("--values", help="comma-separated explicit values")
    p_sweep.add_argument("--min", type=float, dest="grid_min", help="grid minimum")
    p_sweep.add_argument("--max", type=float, dest="grid_max", help="grid maximum")
    p_sweep.add_argument("--step", type=float, dest="grid_step", help="grid step")
    p_sweep.add_argument("--gold", help="gold judgments file; embedded da values win")
    p_sweep.add_argument("--metric", choices=("pearson", "both"), default="pearson")
    _add_scoring_flags(p_sweep)
    p_sweep.set_defaults(handler=_cmd_sweep)

    p_val = sub.add_parser("validate", help="check an interchange file against its invariants")
    p_val.add_argument("--input", required=True, help="interchange JSONL file")
    p_val.set_defaults(handler=_cmd_validate)

    return parser


def _add_scoring_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--variant", choices=VARIANTS, default="base")
    sub.add_argument("--penalty", type=float, default=0.8,
                     help="penalty on unaligned similarities, in [0, 1]")
    sub.add_argument("--lambda", type=float, default=0.01, dest="lambda_",
                     help="interpolation weight on the generation score, in [0, 1]")
    sub.add_argument("--measure", choices=MEASURES, default="f")
    sub.add_argument("--normalize", action="store_true",
                     help="scale embedding rows to unit length first")
    sub.add_argument("--gen-score-sign", choices=GEN_SCORE_SIGNS, default="as_is")
    sub.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                     help="worker threads for record scoring")


def _check_args(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    if hasattr(args, "penalty"):
        if not 0.0 <= args.penalty <= 1.0:
            parser.error(f"--penalty must lie in [0, 1], got {args.penalty}")
        if not 0.0 <= args.lambda_ <= 1.0:
            parser.error(f"--lambda must lie in [0, 1], got {args.lambda_}")
        if args.jobs < 1:
            parser.error(f"--jobs must be at least 1, got {args.jobs}")
    if args.command == "sweep":
        grid_flags = [args.grid_min, args.grid_max, args.grid_step]
        if args.values is not None and any(flag is not None for flag in grid_flags):
            parser.error("--values and --min/--max/--step are mutually exclusive")
        if any(flag is not None for flag in grid_flags) and None in grid_flags:
            parser.error("--min, --max and --step must be given together")
        if args.param == "lambda" and args.variant not in ("ppl", "align+ppl"):
            parser.error("sweeping lambda needs --variant ppl or align+ppl")
        if args.param == "penalty" and args.variant not in ("align", "align+ppl"):
            parser.error("sweeping penalty needs --variant align or align+ppl")
        try:
            args.sweep_spec = _resolve_sweep_spec(args)
        except ValueError as exc:
            parser.error(str(exc))


def _resolve_sweep_spec(args: argparse.Namespace) -> SweepSpec:
    if args.values is not None:
        values = tuple(float(v) for v in args.values.split(","))
        return SweepSpec(args.param, values)
    if args.grid_min is not None:
        return SweepSpec.from_grid(args.param, args.grid_min, args.grid_max, args.grid_step)
    if args.param == "penalty":
        return SweepSpec("penalty", DEFAULT_PENALTY_VALUES)
    return SweepSpec.from_grid("lambda", *DEFAULT_LAMBDA_GRID)


def _config_from_args(args: argparse.Namespace) -> ScoreConfig:
    return ScoreConfig(
        variant=args.variant,
        penalty_a=args.penalty,
        lambda_=args.lambda_,
        measure=args.measure,
        normalize_embeddings=args.normalize,
        gen_score_sign=args.gen_score_sign,
    )


def _score_all(records, config: ScoreConfig, jobs: int) -> list[float]:
    """Score every record, in input order, aborting on the first failure."""

    def one(record):
        try:
            return score_pair(record, config).final
        except (QEError, ValueError) as exc:
            raise QEError(f"scoring failed for record {record.id!r}: {exc}") from exc

    if jobs == 1 or len(records) < 2:
        return [one(rec) for rec in records]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(one, records))


def _write_table(path, header: list[str], rows: list[list[str]]) -> None:
    """Write a TSV atomically so an abort never leaves a partial file."""
    tmp_path = f"{path}.tmp"
    try:
        with open(tmp_path, "w", encoding="utf-8") as fh:
            fh.write("\t".join(header) + "\n")
            for row in rows:
                fh.write("\t".join(row) + "\n")
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def _read_score_file(path) -> list[tuple[str, float]]:
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            text = line.rstrip("\n")
            if line_no == 1:
                if text != "id\tscore":
                    raise FormatError("expected header 'id<TAB>score'", line=line_no)
                continue
            fields = text.split("\t")
            if len(fields) != 2:
                raise FormatError("expected two tab-separated fields", line=line_no)
            try:
                value = float(fields[1])
            except ValueError:
                raise FormatError(f"bad score value {fields[1]!r}", line=line_no) from None
            if not math.isfinite(value):
                raise FormatError(f"non-finite score {fields[1]!r}", line=line_no)
            pairs.append((fields[0], value))
    return pairs


def _read_gold(path) -> list[tuple[str, float]]:
    """Gold judgments from a (id, da) TSV or an interchange file with da set."""
    with open(path, encoding="utf-8") as fh:
        head = fh.readline()
    if head.lstrip().startswith("{"):
        records = read_records(path)
        missing = [rec.id for rec in records if rec.da_score is None]
        if missing:
            raise StatsError(f"gold interchange file lacks da values for ids {missing[:10]}")
        return [(rec.id, rec.da_score) for rec in records]
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            text = line.rstrip("\n")
            if not text.strip():
                raise FormatError("blank line", line=line_no)
            fields = text.split("\t")
            if len(fields) != 2:
                raise FormatError("expected two tab-separated fields", line=line_no)
            if line_no == 1 and fields == ["id", "da"]:
                continue
            try:
                value = float(fields[1])
            except ValueError:
                raise FormatError(f"bad da value {fields[1]!r}", line=line_no) from None
            if not math.isfinite(value):
                raise FormatError(f"non-finite da value {fields[1]!r}", line=line_no)
            pairs.append((fields[0], value))
    return pairs


def _cmd_score(args: argparse.Namespace) -> int:
    records = read_records(args.input)
    config = _config_from_args(args)
    finals = _score_all(records, config, args.jobs)
    rows = [[rec.id, f"{value:.6f}"] for rec, value in zip(records, finals)]
    _write_table(args.output, ["id", "score"], rows)
    return EXIT_OK


def _cmd_evaluate(args: argparse.Namespace) -> int:
    scores = _read_score_file(args.scores)
    gold = _read_gold(args.gold)
    series = join_scores(scores, gold)
    for line in _correlation_lines(series, args.metric):
        print(line)
    return EXIT_OK


def _correlation_lines(series: ScoredPairSeries, metric: str) -> list[str]:
    lines = []
    if metric in ("pearson", "both"):
        lines.append(f"pearson\t{pearson(series):.3f}")
    if metric in ("kendall", "both"):
        lines.append(f"kendall\t{kendall(series):.3f}")
    return lines


def _sweep_gold(records, gold_path) -> list[tuple[str, float]]:
    embedded_complete = all(rec.da_score is not None for rec in records)
    if embedded_complete:
        if gold_path is not None:
            log.warning("--gold ignored: input records embed da values, which win")
        return [(rec.id, rec.da_score) for rec in records]
    if gold_path is not None:
        return _read_gold(gold_path)
    raise StatsError(
        "no gold judgments: records lack embedded da values and --gold was not given"
    )


def _cmd_sweep(args: argparse.Namespace) -> int:
    records = read_records(args.input)
    base = _config_from_args(args)
    spec: SweepSpec = args.sweep_spec
    gold = _sweep_gold(records, args.gold)
    header = [spec.parameter, "pearson"] + (["kendall"] if args.metric == "both" else [])
    rows = []
    for value in spec.values:
        if spec.parameter == "lambda":
            config = replace(base, lambda_=value)
        else:
            config = replace(base, penalty_a=value)
        finals = _score_all(records, config, args.jobs)
        series = join_scores([(rec.id, s) for rec, s in zip(records, finals)], gold)
        row = [f"{value:g}", f"{pearson(series):.3f}"]
        if args.metric == "both":
            row.append(f"{kendall(series):.3f}")
        rows.append(row)
    _write_table(args.output, header, rows)
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    report = scan_file(args.input)
    for issue in report.issues:
        print(f"{issue.where}: {issue.reason}")
    if report.ok:
        print(f"checked {report.checked} line(s): clean")
        return EXIT_OK
    print(f"checked {report.checked} line(s): {len(report.issues)} issue(s)")
    return EXIT_DATA


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="crossqe: %(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    _check_args(parser, args)
    try:
        return args.handler(args)
    except OSError as exc:
        log.error("i/o failure: %s", exc)
        return EXIT_IO
    except QEError as exc:
        log.error("%s", exc)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
