"""The score / evaluate / sweep / validate command-line surface."""

import json
import logging
import shutil
import subprocess
import sys

import numpy as np
import pytest

import helpers
from crossqe.cli import EXIT_DATA, EXIT_IO, EXIT_OK, SweepSpec, main
from crossqe.records import write_records


@pytest.fixture
def small_file(tmp_path):
    """Six records with embedded da values and full-coverage alignments."""
    rng = np.random.default_rng(31)
    records = []
    for i in range(6):
        records.append(
            helpers.make_record(
                rec_id=f"cli-{i}",
                k=4,
                l=4,
                d=5,
                rng=rng,
                alignment="0-0 1-1 2-2 3-3",
                gen_score=-(0.5 + 0.2 * i),
                da_score=float(i),
            )
        )
    path = tmp_path / "input.jsonl"
    write_records(records, path)
    return path


def read_tsv(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    return [line.split("\t") for line in lines]


class TestScore:
    def test_writes_header_and_six_decimal_scores(self, small_file, tmp_path):
        out = tmp_path / "scores.tsv"
        assert main(["score", "--input", str(small_file), "--output", str(out)]) == EXIT_OK
        rows = read_tsv(out)
        assert rows[0] == ["id", "score"]
        assert len(rows) == 7
        for rid, value in rows[1:]:
            assert rid.startswith("cli-")
            whole, frac = value.lstrip("-").split(".")
            assert len(frac) == 6

    def test_empty_input_gives_header_only(self, tmp_path):
        empty = tmp_path / "empty.jsonl"
        empty.write_text("", encoding="utf-8")
        out = tmp_path / "scores.tsv"
        assert main(["score", "--input", str(empty), "--output", str(out)]) == EXIT_OK
        assert out.read_text(encoding="utf-8") == "id\tscore\n"

    def test_jobs_do_not_change_bytes(self, small_file, tmp_path):
        out1 = tmp_path / "jobs1.tsv"
        out8 = tmp_path / "jobs8.tsv"
        args = ["score", "--input", str(small_file), "--variant", "align+ppl"]
        assert main(args + ["--output", str(out1), "--jobs", "1"]) == EXIT_OK
        assert main(args + ["--output", str(out8), "--jobs", "8"]) == EXIT_OK
        assert out1.read_bytes() == out8.read_bytes()

    def test_scoring_error_aborts_without_output(self, tmp_path):
        rec = helpers.make_record(rec_id="poison", alignment="not-pharaoh!")
        bad = tmp_path / "bad.jsonl"
        helpers.write_raw_lines(bad, [helpers.record_json(rec)])
        out = tmp_path / "scores.tsv"
        code = main(["score", "--input", str(bad), "--output", str(out), "--variant", "align"])
        assert code == EXIT_DATA
        assert not out.exists()

    def test_error_names_the_record(self, tmp_path, caplog):
        rec = helpers.make_record(rec_id="poison", alignment="9-9")
        bad = tmp_path / "bad.jsonl"
        helpers.write_raw_lines(bad, [helpers.record_json(rec)])
        out = tmp_path / "scores.tsv"
        with caplog.at_level(logging.ERROR, logger="crossqe"):
            code = main(
                ["score", "--input", str(bad), "--output", str(out), "--variant", "align"]
            )
        assert code == EXIT_DATA
        assert "poison" in caplog.text

    def test_scoring_stage_failure_names_record_and_leaves_no_output(self, tmp_path, caplog):
        # A zero embedding row is valid on disk but cannot be normalized.
        rec = helpers.make_record(rec_id="zero-row")
        arr = rec.src_embeddings.copy()
        arr[0] = 0.0
        rec.src_embeddings = arr
        path = tmp_path / "zero.jsonl"
        write_records([rec], path)
        out = tmp_path / "scores.tsv"
        with caplog.at_level(logging.ERROR, logger="crossqe"):
            code = main(["score", "--input", str(path), "--output", str(out), "--normalize"])
        assert code == EXIT_DATA
        assert "zero-row" in caplog.text
        assert not out.exists()

    def test_missing_input_is_io_error(self, tmp_path):
        code = main(
            ["score", "--input", str(tmp_path / "nope.jsonl"), "--output", str(tmp_path / "o")]
        )
        assert code == EXIT_IO

    def test_invalid_record_is_data_error(self, tmp_path):
        raw = helpers.record_json(helpers.make_record())
        raw["src_emb"] = raw["src_emb"][:-1]
        bad = tmp_path / "invalid.jsonl"
        helpers.write_raw_lines(bad, [raw])
        code = main(["score", "--input", str(bad), "--output", str(tmp_path / "out.tsv")])
        assert code == EXIT_DATA

    @pytest.mark.parametrize(
        "flags",
        [
            ["--penalty", "1.5"],
            ["--lambda", "-0.2"],
            ["--jobs", "0"],
            ["--variant", "bogus"],
            ["--measure", "x"],
        ],
    )
    def test_usage_errors_exit_2(self, small_file, tmp_path, flags):
        with pytest.raises(SystemExit) as excinfo:
            main(["score", "--input", str(small_file), "--output", str(tmp_path / "o")] + flags)
        assert excinfo.value.code == 2


class TestEvaluate:
    def score_to(self, small_file, tmp_path, *extra):
        out = tmp_path / "scores.tsv"
        assert main(["score", "--input", str(small_file), "--output", str(out), *extra]) == EXIT_OK
        return out

    def test_against_gold_tsv(self, small_file, tmp_path, capsys):
        scores = self.score_to(small_file, tmp_path)
        gold = tmp_path / "gold.tsv"
        gold.write_text(
            "id\tda\n" + "".join(f"cli-{i}\t{float(i)}\n" for i in range(6)), encoding="utf-8"
        )
        code = main(["evaluate", "--scores", str(scores), "--gold", str(gold), "--metric", "both"])
        assert code == EXIT_OK
        out_lines = capsys.readouterr().out.strip().splitlines()
        assert len(out_lines) == 2
        assert out_lines[0].startswith("pearson\t")
        assert out_lines[1].startswith("kendall\t")
        for line in out_lines:
            value = line.split("\t")[1]
            assert len(value.split(".")[1]) == 3

    def test_gold_tsv_header_is_optional(self, small_file, tmp_path, capsys):
        scores = self.score_to(small_file, tmp_path)
        with_header = tmp_path / "gold1.tsv"
        without_header = tmp_path / "gold2.tsv"
        body = "".join(f"cli-{i}\t{float(i)}\n" for i in range(6))
        with_header.write_text("id\tda\n" + body, encoding="utf-8")
        without_header.write_text(body, encoding="utf-8")
        main(["evaluate", "--scores", str(scores), "--gold", str(with_header)])
        first = capsys.readouterr().out
        main(["evaluate", "--scores", str(scores), "--gold", str(without_header)])
        second = capsys.readouterr().out
        assert first == second

    def test_interchange_file_as_gold(self, small_file, tmp_path, capsys):
        scores = self.score_to(small_file, tmp_path)
        code = main(
            ["evaluate", "--scores", str(scores), "--gold", str(small_file), "--metric", "pearson"]
        )
        assert code == EXIT_OK
        assert capsys.readouterr().out.startswith("pearson\t")

    def test_id_mismatch_is_data_error(self, small_file, tmp_path, capsys):
        scores = self.score_to(small_file, tmp_path)
        gold = tmp_path / "gold.tsv"
        gold.write_text("cli-0\t1.0\ncli-1\t2.0\n", encoding="utf-8")
        assert main(["evaluate", "--scores", str(scores), "--gold", str(gold)]) == EXIT_DATA

    def test_constant_scores_are_a_data_error(self, tmp_path):
        scores = tmp_path / "scores.tsv"
        scores.write_text("id\tscore\na\t1.000000\nb\t1.000000\n", encoding="utf-8")
        gold = tmp_path / "gold.tsv"
        gold.write_text("a\t1.0\nb\t2.0\n", encoding="utf-8")
        assert main(["evaluate", "--scores", str(scores), "--gold", str(gold)]) == EXIT_DATA

    def test_missing_scores_file_is_io_error(self, tmp_path):
        gold = tmp_path / "gold.tsv"
        gold.write_text("a\t1.0\n", encoding="utf-8")
        code = main(["evaluate", "--scores", str(tmp_path / "none.tsv"), "--gold", str(gold)])
        assert code == EXIT_IO


class TestSweep:
    def test_two_value_sweep_matches_individual_runs(self, small_file, tmp_path, capsys):
        table = tmp_path / "table.tsv"
        code = main(
            [
                "sweep",
                "--input",
                str(small_file),
                "--output",
                str(table),
                "--param",
                "lambda",
                "--values",
                "0.0,0.02",
                "--variant",
                "ppl",
            ]
        )
        assert code == EXIT_OK
        rows = read_tsv(table)
        assert rows[0] == ["lambda", "pearson"]
        assert [row[0] for row in rows[1:]] == ["0", "0.02"]
        for value in ("0.0", "0.02"):
            scores = tmp_path / f"scores-{value}.tsv"
            main(
                [
                    "score",
                    "--input",
                    str(small_file),
                    "--output",
                    str(scores),
                    "--variant",
                    "ppl",
                    "--lambda",
                    value,
                ]
            )
            main(
                [
                    "evaluate",
                    "--scores",
                    str(scores),
                    "--gold",
                    str(small_file),
                    "--metric",
                    "pearson",
                ]
            )
            printed = capsys.readouterr().out.strip().split("\t")[1]
            row = rows[1] if value == "0.0" else rows[2]
            assert row[1] == printed

    def test_lambda_zero_row_equals_base_variant(self, small_file, tmp_path, capsys):
        table = tmp_path / "table.tsv"
        main(
            [
                "sweep",
                "--input",
                str(small_file),
                "--output",
                str(table),
                "--param",
                "lambda",
                "--values",
                "0",
                "--variant",
                "ppl",
            ]
        )
        scores = tmp_path / "base.tsv"
        main(["score", "--input", str(small_file), "--output", str(scores), "--variant", "base"])
        main(
            [
                "evaluate",
                "--scores",
                str(scores),
                "--gold",
                str(small_file),
                "--metric",
                "pearson",
            ]
        )
        printed = capsys.readouterr().out.strip().split("\t")[1]
        assert read_tsv(table)[1] == ["0", printed]

    def test_penalty_one_row_equals_unmasked_variant(self, small_file, tmp_path, capsys):
        table = tmp_path / "table.tsv"
        main(
            [
                "sweep",
                "--input",
                str(small_file),
                "--output",
                str(table),
                "--param",
                "penalty",
                "--values",
                "1.0,0.4",
                "--variant",
                "align",
            ]
        )
        scores = tmp_path / "base.tsv"
        main(["score", "--input", str(small_file), "--output", str(scores), "--variant", "base"])
        main(
            [
                "evaluate",
                "--scores",
                str(scores),
                "--gold",
                str(small_file),
                "--metric",
                "pearson",
            ]
        )
        printed = capsys.readouterr().out.strip().split("\t")[1]
        assert read_tsv(table)[1] == ["1", printed]

    def test_default_lambda_grid(self, small_file, tmp_path):
        table = tmp_path / "table.tsv"
        main(
            [
                "sweep",
                "--input",
                str(small_file),
                "--output",
                str(table),
                "--param",
                "lambda",
                "--variant",
                "ppl",
            ]
        )
        rows = read_tsv(table)
        assert [row[0] for row in rows[1:]] == ["0", "0.005", "0.01", "0.015", "0.02", "0.025", "0.03"]

    def test_default_penalty_values(self, small_file, tmp_path):
        table = tmp_path / "table.tsv"
        main(
            [
                "sweep",
                "--input",
                str(small_file),
                "--output",
                str(table),
                "--param",
                "penalty",
                "--variant",
                "align",
            ]
        )
        rows = read_tsv(table)
        assert [row[0] for row in rows[1:]] == ["0", "0.2", "0.4", "0.8", "1"]

    def test_embedded_gold_wins_with_warning(self, small_file, tmp_path, caplog):
        gold = tmp_path / "gold.tsv"
        gold.write_text("".join(f"cli-{i}\t{float(5 - i)}\n" for i in range(6)), encoding="utf-8")
        table = tmp_path / "table.tsv"
        with caplog.at_level(logging.WARNING, logger="crossqe"):
            code = main(
                [
                    "sweep",
                    "--input",
                    str(small_file),
                    "--output",
                    str(table),
                    "--param",
                    "lambda",
                    "--values",
                    "0,0.01",
                    "--variant",
                    "ppl",
                    "--gold",
                    str(gold),
                ]
            )
        assert code == EXIT_OK
        assert "embed" in caplog.text

    def test_gold_file_used_when_not_embedded(self, tmp_path):
        rng = np.random.default_rng(32)
        records = [
            helpers.make_record(rec_id=f"ng-{i}", rng=rng, da_score=None, gen_score=-1.0 - i)
            for i in range(4)
        ]
        path = tmp_path / "noda.jsonl"
        write_records(records, path)
        gold = tmp_path / "gold.tsv"
        gold.write_text("".join(f"ng-{i}\t{float(i)}\n" for i in range(4)), encoding="utf-8")
        table = tmp_path / "table.tsv"
        code = main(
            [
                "sweep",
                "--input",
                str(path),
                "--output",
                str(table),
                "--param",
                "lambda",
                "--values",
                "0,0.5",
                "--variant",
                "ppl",
                "--gold",
                str(gold),
            ]
        )
        assert code == EXIT_OK
        assert len(read_tsv(table)) == 3

    def test_no_gold_anywhere_is_data_error(self, tmp_path):
        rng = np.random.default_rng(33)
        records = [
            helpers.make_record(rec_id=f"nd-{i}", rng=rng, da_score=None) for i in range(3)
        ]
        path = tmp_path / "noda.jsonl"
        write_records(records, path)
        code = main(
            [
                "sweep",
                "--input",
                str(path),
                "--output",
                str(tmp_path / "t.tsv"),
                "--param",
                "lambda",
                "--values",
                "0,0.5",
                "--variant",
                "ppl",
            ]
        )
        assert code == EXIT_DATA

    @pytest.mark.parametrize(
        "flags",
        [
            ["--param", "lambda", "--variant", "base"],
            ["--param", "penalty", "--variant", "ppl"],
            ["--param", "lambda", "--variant", "ppl", "--values", "0.5", "--min", "0"],
            ["--param", "lambda", "--variant", "ppl", "--min", "0", "--max", "0.03"],
            ["--param", "lambda", "--variant", "ppl", "--values", "0,2.0"],
            ["--param", "lambda", "--variant", "ppl", "--min", "0", "--max", "1", "--step", "-1"],
        ],
    )
    def test_usage_errors(self, small_file, tmp_path, flags):
        with pytest.raises(SystemExit) as excinfo:
            main(
                ["sweep", "--input", str(small_file), "--output", str(tmp_path / "t.tsv")] + flags
            )
        assert excinfo.value.code == 2

    def test_grid_flags(self, small_file, tmp_path):
        table = tmp_path / "table.tsv"
        code = main(
            [
                "sweep",
                "--input",
                str(small_file),
                "--output",
                str(table),
                "--param",
                "penalty",
                "--min",
                "0",
                "--max",
                "1",
                "--step",
                "0.25",
                "--variant",
                "align",
            ]
        )
        assert code == EXIT_OK
        assert [row[0] for row in read_tsv(table)[1:]] == ["0", "0.25", "0.5", "0.75", "1"]


class TestSweepSpec:
    def test_grid_construction_avoids_float_noise(self):
        spec = SweepSpec.from_grid("lambda", 0.0, 0.03, 0.005)
        assert spec.values == (0.0, 0.005, 0.01, 0.015, 0.02, 0.025, 0.03)

    def test_values_validated(self):
        with pytest.raises(ValueError):
            SweepSpec("lambda", (0.5, 1.5))
        with pytest.raises(ValueError):
            SweepSpec("gamma", (0.5,))
        with pytest.raises(ValueError):
            SweepSpec.from_grid("lambda", 0.5, 0.1, 0.1)


class TestConsoleScript:
    def test_installed_entry_point(self, small_file):
        exe = shutil.which("crossqe")
        cmd = [exe] if exe else [sys.executable, "-m", "crossqe.cli"]
        done = subprocess.run(
            cmd + ["validate", "--input", str(small_file)],
            capture_output=True,
            text=True,
        )
        assert done.returncode == 0
        assert "clean" in done.stdout


class TestValidate:
    def test_clean_file(self, small_file, capsys):
        assert main(["validate", "--input", str(small_file)]) == EXIT_OK
        assert "clean" in capsys.readouterr().out

    def test_issues_reported_with_nonzero_exit(self, tmp_path, capsys):
        raw = helpers.record_json(helpers.make_record(rec_id="oops"))
        raw["src_emb"].append(raw["src_emb"][0])
        bad = tmp_path / "bad.jsonl"
        helpers.write_raw_lines(bad, [raw])
        assert main(["validate", "--input", str(bad)]) == EXIT_DATA
        out = capsys.readouterr().out
        assert "row-count mismatch" in out
        assert "oops" in out

    def test_missing_file_is_io_error(self, tmp_path):
        assert main(["validate", "--input", str(tmp_path / "gone.jsonl")]) == EXIT_IO
