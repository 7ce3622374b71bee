"""Command-line interface: exit codes, pipeline composition, determinism."""

import json

import pytest

from sidedress.agronomy import prescribe_field
from sidedress.cli import main
from sidedress.field import generate_field
from sidedress.gridio import read_field_csv, read_grid_csv, write_field_csv


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


class TestParsing:
    def test_version(self, capsys):
        code, out, _ = run(capsys, "--version")
        assert code == 0
        assert "sidedress" in out

    def test_no_subcommand_is_usage_error(self, capsys):
        code, _, err = run(capsys)
        assert code == 1
        assert "error" in err

    def test_unknown_flag_is_usage_error(self, capsys):
        code, _, err = run(capsys, "gen-field", "--bogus")
        assert code == 1

    def test_missing_required_argument(self, capsys):
        code, _, err = run(capsys, "harvest")
        assert code == 1
        assert "--applied" in err


class TestGenField:
    def test_writes_deterministic_field(self, workdir, capsys):
        code, out, _ = run(capsys, "gen-field", "--seed", "7", "--out", "a.csv")
        assert code == 0
        assert "a.csv" in out
        run(capsys, "gen-field", "--seed", "7", "--out", "b.csv")
        assert (workdir / "a.csv").read_bytes() == (workdir / "b.csv").read_bytes()
        assert read_field_csv(workdir / "a.csv") == generate_field(seed=7)

    def test_custom_dimensions(self, workdir, capsys):
        code, _, _ = run(capsys, "gen-field", "--seed", "3", "--rows", "2",
                         "--cols", "4", "--out", "f.csv")
        assert code == 0
        field = read_field_csv(workdir / "f.csv")
        assert (field.rows, field.cols) == (2, 4)

    def test_default_output_name(self, workdir, capsys):
        code, _, _ = run(capsys, "gen-field", "--seed", "1")
        assert code == 0
        assert (workdir / "field.csv").exists()

    def test_rejects_file_sourced_config(self, workdir, capsys):
        write_field_csv(workdir / "f.csv", generate_field(seed=1, rows=2, cols=2))
        (workdir / "run.toml").write_text(
            'format_version = 1\n[field]\npath = "f.csv"\n', encoding="utf-8")
        code, _, err = run(capsys, "gen-field", "--config", "run.toml")
        assert code == 2
        assert "needs a seed" in err


class TestPrescribe:
    def test_grids_recompose_exactly(self, workdir, capsys):
        run(capsys, "gen-field", "--seed", "7", "--out", "f.csv")
        code, out, _ = run(capsys, "prescribe", "--field", "f.csv", "--out", "p")
        assert code == 0
        assert "prescribed N total" in out
        n_rec = read_grid_csv(workdir / "p" / "n_rec.csv")
        planting = read_grid_csv(workdir / "p" / "planting_n.csv")
        inseason = read_grid_csv(workdir / "p" / "inseason_n.csv")
        for r in range(10):
            for c in range(10):
                assert planting[r][c] + inseason[r][c] == n_rec[r][c]

    def test_matches_library_output(self, workdir, capsys):
        run(capsys, "prescribe", "--seed", "5", "--out", "p")
        prescription = prescribe_field(generate_field(seed=5))
        n_rec = read_grid_csv(workdir / "p" / "n_rec.csv")
        assert tuple(v for row in n_rec for v in row) == prescription.n_rec


class TestAttack:
    def test_identity_leaves_rates_alone(self, workdir, capsys):
        run(capsys, "prescribe", "--seed", "7", "--out", "p")
        code, out, _ = run(capsys, "attack", "--seed", "7", "--scenario", "identity",
                           "--out", "a")
        assert code == 0
        assert "net in-season delta: +0.0 lb" in out
        applied = read_grid_csv(workdir / "a" / "applied_total_n.csv")
        n_rec = read_grid_csv(workdir / "p" / "n_rec.csv")
        assert applied == n_rec

    def test_builtin_scenario_metrics(self, workdir, capsys):
        code, out, _ = run(capsys, "attack", "--seed", "7", "--scenario", "builtin:2",
                           "--out", "a")
        assert code == 0
        assert "scenario: scenario-2" in out
        assert "max zone deviation: 180.0%" in out

    def test_spoof_flag_hides_delta(self, workdir, capsys):
        run(capsys, "prescribe", "--seed", "7", "--out", "p")
        code, out, _ = run(capsys, "attack", "--seed", "7", "--scenario", "builtin:2",
                           "--spoof", "--out", "a")
        assert code == 0
        assert "spoof_display=True" in out
        assert "visible delta: +0.0 lb" in out
        displayed = (workdir / "a" / "displayed_inseason_n.csv").read_bytes()
        commanded = (workdir / "p" / "inseason_n.csv").read_bytes()
        assert displayed == commanded

    def test_unknown_scenario_reference(self, workdir, capsys):
        code, _, err = run(capsys, "attack", "--seed", "7", "--scenario", "nope.toml")
        assert code == 2
        assert "unknown scenario reference" in err


class TestHarvestPipeline:
    def test_stages_compose(self, workdir, capsys):
        run(capsys, "gen-field", "--seed", "11", "--out", "f.csv")
        run(capsys, "prescribe", "--field", "f.csv", "--out", "p")
        run(capsys, "attack", "--field", "f.csv", "--scenario", "builtin:3", "--out", "a")
        code, out, _ = run(capsys, "harvest", "--field", "f.csv",
                           "--applied", "a/applied_total_n.csv", "--out", "h")
        assert code == 0
        assert "yield total" in out

        from sidedress.agronomy import EconParams, YieldBounds, harvest
        from sidedress.attacks import apply_attack, builtin_scenario

        field = generate_field(seed=11)
        prescription = prescribe_field(field)
        applied = apply_attack(prescription, builtin_scenario(3))
        expected = harvest(field, applied, YieldBounds(), EconParams())
        grid = read_grid_csv(workdir / "h" / "yield.csv")
        assert tuple(v for row in grid for v in row) == expected.yields

    def test_applied_grid_must_exist(self, workdir, capsys):
        code, _, err = run(capsys, "harvest", "--seed", "1", "--applied", "missing.csv")
        assert code == 2


class TestReport:
    def test_runs_and_writes_bundle(self, workdir, capsys):
        (workdir / "run.toml").write_text(
            'format_version = 1\nscenarios = ["builtin:2"]\n[field]\nseed = 6\n',
            encoding="utf-8")
        code, out, _ = run(capsys, "report", "--config", "run.toml", "--out", "r")
        assert code == 0
        assert "control" in out
        assert "scenario-2" in out
        assert (workdir / "r" / "report.json").exists()

    def test_byte_reproducible(self, workdir, capsys):
        (workdir / "run.toml").write_text(
            'format_version = 1\nscenarios = ["builtin:1"]\n[field]\nseed = 6\n',
            encoding="utf-8")
        run(capsys, "report", "--config", "run.toml", "--out", "r1")
        run(capsys, "report", "--config", "run.toml", "--out", "r2")
        assert (workdir / "r1" / "report.json").read_bytes() == \
            (workdir / "r2" / "report.json").read_bytes()

    def test_seed_flag_overrides_config(self, workdir, capsys):
        (workdir / "run.toml").write_text(
            'format_version = 1\n[field]\nseed = 5\n', encoding="utf-8")
        code, _, _ = run(capsys, "report", "--config", "run.toml", "--seed", "9",
                         "--out", "r")
        assert code == 0
        document = json.loads((workdir / "r" / "report.json").read_text(encoding="utf-8"))
        assert document["meta"]["seed"] == 9

    def test_seed_cannot_override_field_file(self, workdir, capsys):
        write_field_csv(workdir / "f.csv", generate_field(seed=1, rows=2, cols=2))
        (workdir / "run.toml").write_text(
            'format_version = 1\n[field]\npath = "f.csv"\nrows = 2\ncols = 2\n',
            encoding="utf-8")
        code, _, err = run(capsys, "report", "--config", "run.toml", "--seed", "9")
        assert code == 2
        assert "cannot override" in err

    def test_missing_config_file(self, workdir, capsys):
        code, _, err = run(capsys, "report", "--config", "absent.toml")
        assert code == 2
        assert "config file not found" in err


class TestOptimize:
    def test_flag_driven_search(self, workdir, capsys):
        code, out, _ = run(capsys, "optimize", "--seed", "6",
                           "--multipliers", "0,0.5,1,1.5,2", "--budget", "25",
                           "--out", "o")
        assert code == 0
        assert "worst-case loss" in out
        grid = read_grid_csv(workdir / "o" / "optimized_multipliers.csv")
        assert set(v for row in grid for v in row) <= {0.0, 0.5, 1.0, 1.5, 2.0}
        assert (workdir / "o" / "report.json").exists()

    def test_unbounded_budget(self, workdir, capsys):
        code, out, _ = run(capsys, "optimize", "--seed", "6",
                           "--multipliers", "0,1", "--budget", "unbounded", "--out", "o")
        assert code == 0
        assert "worst-case loss" in out

    def test_requires_search_space(self, workdir, capsys):
        code, _, err = run(capsys, "optimize", "--seed", "6")
        assert code == 2
        assert "--multipliers" in err

    def test_bad_multiplier_token(self, workdir, capsys):
        code, _, err = run(capsys, "optimize", "--seed", "6", "--multipliers", "0,abc")
        assert code == 2
        assert "bad multiplier set" in err

    def test_config_driven_with_budget_override(self, workdir, capsys):
        (workdir / "run.toml").write_text(
            "format_version = 1\n[field]\nseed = 6\n"
            "[optimizer]\nmultiplier_set = [0.0, 0.5, 1.0]\nstealth_budget = 10.0\n",
            encoding="utf-8")
        code, out, _ = run(capsys, "optimize", "--config", "run.toml",
                           "--budget", "unbounded", "--out", "o")
        assert code == 0


class TestReproducePaper:
    def test_exits_clean_and_reports_pass(self, workdir, capsys):
        code, out, _ = run(capsys, "reproduce-paper")
        assert code == 0
        assert "PASS" in out
        assert "FAIL" not in out

    def test_writes_transcript(self, workdir, capsys):
        code, out, _ = run(capsys, "reproduce-paper", "--out", "r")
        assert code == 0
        transcript = (workdir / "r" / "reproduction.txt").read_text(encoding="utf-8")
        assert "PASS" in transcript
