"""cli-reporting: commands, exit codes, output formats."""

from __future__ import annotations

import json
import os
import subprocess
import sys

from crossfree.core import serialize_family
from crossfree.generators import gen_laminar
from helpers import fam, normalize_json_report

CROSSING_FILE = "n=4\n{1,2}\n{2,3}\n"
LAMINAR_6 = serialize_family(gen_laminar(6))


def run_cli(*args, env_threads=None):
    env = dict(os.environ)
    env.pop("CROSSFREE_THREADS", None)
    if env_threads is not None:
        env["CROSSFREE_THREADS"] = env_threads
    proc = subprocess.run(
        [sys.executable, "-m", "crossfree", *args],
        capture_output=True,
        text=True,
        env=env,
    )
    return proc.returncode, proc.stdout, proc.stderr


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestCertifyCommand:
    def test_cross_free_exits_zero(self, tmp_path):
        path = write(tmp_path, "lam.fam", LAMINAR_6)
        code, out, _ = run_cli("certify", path, "--k", "2")
        assert code == 0
        report = json.loads(out)
        assert report["verdict"] == "cross-free"
        assert report["schema"] == "cert-report/1"

    def test_witness_exits_three(self, tmp_path):
        path = write(tmp_path, "x.fam", CROSSING_FILE)
        code, out, _ = run_cli("certify", path, "--k", "2")
        assert code == 3
        report = json.loads(out)
        assert report["verdict"] == "witness"
        assert report["witness"] == ["{1,2}", "{2,3}"]

    def test_malformed_file_exits_two(self, tmp_path):
        path = write(tmp_path, "bad.fam", "n=4\n{5}\n")
        code, _, err = run_cli("certify", path, "--k", "2")
        assert code == 2 and "outside" in err

    def test_missing_file_exits_two(self):
        code, _, err = run_cli("certify", "/nonexistent.fam", "--k", "2")
        assert code == 2 and "cannot read" in err

    def test_bad_flags_exit_two(self, tmp_path):
        path = write(tmp_path, "lam.fam", LAMINAR_6)
        code, _, _ = run_cli("certify", path)  # --k missing
        assert code == 2
        code, _, _ = run_cli("certify", path, "--k", "2", "--mode", "diagonal")
        assert code == 2
        code, _, _ = run_cli("certify", path, "--k", "2", "--format", "csv")
        assert code == 2

    def test_text_format(self, tmp_path):
        path = write(tmp_path, "lam.fam", LAMINAR_6)
        code, out, _ = run_cli("certify", path, "--k", "2", "--format", "text")
        assert code == 0 and "verdict: cross-free" in out


class TestNormalizeCommand:
    def test_round_trip_through_certify(self, tmp_path):
        path = write(tmp_path, "x.fam", "n=4\n{1,2}\n{3,4}\n{1,3}\n")
        out_path = str(tmp_path / "norm.fam")
        code, _, _ = run_cli("normalize", path, "--out", out_path)
        assert code == 0
        text = open(out_path).read()
        assert text == "n=4\n{2,4}\n{3,4}\n"

    def test_pivot_flag(self, tmp_path):
        path = write(tmp_path, "x.fam", "n=4\n{1,2}\n")
        code, out, _ = run_cli("normalize", path, "--pivot", "3")
        assert code == 0 and out == "n=4\n{1,2}\n"
        code, _, err = run_cli("normalize", path, "--pivot", "9")
        assert code == 2


class TestPipelineCommand:
    def test_laminar_schedule_passes(self, tmp_path):
        path = write(tmp_path, "lam.fam", LAMINAR_6)
        code, out, _ = run_cli("pipeline", path, "--k", "2", "--schedule")
        assert code == 0
        report = json.loads(out)
        assert report["all_passed"] is True
        assert report["sum_matches_stripped"] is True

    def test_explicit_window(self, tmp_path):
        path = write(tmp_path, "lam.fam", LAMINAR_6)
        code, out, _ = run_cli("pipeline", path, "--k", "2", "--a", "-1", "--b", "4")
        assert code == 0
        report = json.loads(out)
        assert len(report["windows"]) == 1

    def test_requires_window_or_schedule(self, tmp_path):
        path = write(tmp_path, "lam.fam", LAMINAR_6)
        code, _, _ = run_cli("pipeline", path, "--k", "2")
        assert code == 2
        code, _, _ = run_cli("pipeline", path, "--k", "2", "--a", "0")
        assert code == 2

    def test_precondition_exit_four(self, tmp_path):
        path = write(tmp_path, "x.fam", CROSSING_FILE)
        code, _, err = run_cli("pipeline", path, "--k", "2", "--schedule")
        assert code == 4 and "not weakly" in err

    def test_force_overrides(self, tmp_path):
        path = write(tmp_path, "x.fam", CROSSING_FILE)
        code, out, _ = run_cli("pipeline", path, "--k", "2", "--schedule", "--force")
        assert code == 0
        report = json.loads(out)
        assert report["certified_weakly_cross_free"] is False
        assert report["forced"] is True


class TestSearchCommand:
    def test_named_universe(self):
        code, out, _ = run_cli("search", "--n", "5", "--k", "2", "--universe", "intervals")
        assert code == 0
        report = json.loads(out)
        assert report["max_size"] == 14 and report["optimal"] is True

    def test_family_file_universe(self, tmp_path):
        path = write(tmp_path, "x.fam", CROSSING_FILE)
        code, out, _ = run_cli("search", path, "--k", "2")
        assert code == 0
        assert json.loads(out)["max_size"] == 1

    def test_budget_exhausted_exit_five(self):
        code, out, _ = run_cli(
            "search", "--n", "7", "--k", "2", "--universe", "intervals",
            "--budget-ms", "0",
        )
        assert code == 5
        assert json.loads(out)["optimal"] is False

    def test_needs_exactly_one_universe(self, tmp_path):
        code, _, _ = run_cli("search", "--k", "2")
        assert code == 2
        path = write(tmp_path, "x.fam", CROSSING_FILE)
        code, _, _ = run_cli("search", path, "--n", "5", "--k", "2")
        assert code == 2


class TestGenerateCommand:
    def test_laminar_then_certify(self, tmp_path):
        out_path = str(tmp_path / "lam.fam")
        code, _, _ = run_cli("generate", "laminar", "--n", "6", "--out", out_path)
        assert code == 0
        code, _, _ = run_cli("certify", out_path, "--k", "4")
        assert code == 0

    def test_random_needs_target(self):
        code, _, err = run_cli("generate", "random", "--n", "8", "--k", "2")
        assert code == 2 and "--target" in err

    def test_random_generates_certifiable(self, tmp_path):
        out_path = str(tmp_path / "r.fam")
        code, _, _ = run_cli(
            "generate", "random", "--n", "10", "--k", "3", "--target", "20",
            "--seed", "5", "--out", out_path,
        )
        assert code == 0
        code, _, _ = run_cli("certify", out_path, "--k", "3")
        assert code == 0


class TestSweepCommand:
    def test_csv_rows(self):
        code, out, _ = run_cli("sweep", "--k", "2", "--n", "4..6")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].startswith("n,k,universe,mode,")
        assert len(lines) == 4
        for line in lines[1:]:
            cells = line.split(",")
            assert int(cells[4]) <= int(cells[5])  # exact <= bound

    def test_json_format(self):
        code, out, _ = run_cli("sweep", "--k", "2", "--n", "4", "--format", "json")
        assert code == 0
        assert json.loads(out)["schema"] == "sweep/1"

    def test_bad_range(self):
        code, _, _ = run_cli("sweep", "--k", "2", "--n", "6..4")
        assert code == 2


class TestDeterminismAndThreads:
    def test_json_outputs_stable_across_thread_caps(self, tmp_path):
        path = write(tmp_path, "lam.fam", LAMINAR_6)
        _, out1, _ = run_cli("pipeline", path, "--k", "2", "--schedule", env_threads="1")
        _, out2, _ = run_cli("pipeline", path, "--k", "2", "--schedule", env_threads="4")
        assert normalize_json_report(out1) == normalize_json_report(out2)

    def test_invalid_thread_cap_exits_two(self, tmp_path):
        path = write(tmp_path, "lam.fam", LAMINAR_6)
        code, _, err = run_cli("certify", path, "--k", "2", env_threads="soup")
        assert code == 2 and "CROSSFREE_THREADS" in err
        code, _, _ = run_cli("certify", path, "--k", "2", env_threads="0")
        assert code == 2
