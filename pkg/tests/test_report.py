"""Report assembly: rounding, document structure, byte-reproducible emission."""

import json

import pytest

from sidedress.agronomy import EconParams, YieldBounds, prescribe_field
from sidedress.attacks import AttackScenario, builtin_scenario
from sidedress.config import RunConfig
from sidedress.field import generate_field
from sidedress.optimizer import OptimizerConfig
from sidedress.report import (
    build_document,
    emit_report,
    evaluate_attack,
    evaluate_run,
    money,
    round_half_up,
    run_report,
    tenth,
)

ECON = EconParams()
BOUNDS = YieldBounds()


class TestRounding:
    @pytest.mark.parametrize(
        "value, places, expected",
        [
            (0.125, 2, 0.13),
            (0.135, 2, 0.14),
            (-0.125, 2, -0.13),
            (2.5, 0, 3.0),
            (1.05, 1, 1.1),
            (13128.594905, 2, 13128.59),
            (16982.798703012984, 1, 16982.8),
            (0.0, 2, 0.0),
        ],
    )
    def test_half_up(self, value, places, expected):
        assert round_half_up(value, places) == expected

    def test_money_and_tenth_shortcuts(self):
        assert money(1.005) == 1.01
        assert tenth(1.25) == 1.3


@pytest.fixture(scope="module")
def evaluated():
    field = generate_field(seed=6, rows=10, cols=10)
    prescription = prescribe_field(field)
    return field, prescription


class TestEvaluateAttack:
    def test_zone_loss_grid_reproduces_ledger_total(self, evaluated):
        field, prescription = evaluated
        result = evaluate_attack(field, prescription, builtin_scenario(2), ECON, BOUNDS)
        total = sum(v for row in result.zone_loss for v in row)
        assert total == pytest.approx(result.ledger.profit_loss_gain, abs=1e-6)

    def test_identity_result_is_all_zero_loss(self, evaluated):
        field, prescription = evaluated
        result = evaluate_attack(
            field, prescription, AttackScenario.identity(10, 10, name="control"),
            ECON, BOUNDS, kind="control")
        assert result.kind == "control"
        assert all(v == 0.0 for row in result.zone_loss for v in row)
        assert result.ledger.profit_loss_gain == 0.0
        assert result.applied_n == result.prescribed_n

    def test_grids_are_row_major_reshapes(self, evaluated):
        field, prescription = evaluated
        result = evaluate_attack(field, prescription, builtin_scenario(3), ECON, BOUNDS)
        assert len(result.prescribed_n) == 10
        assert all(len(row) == 10 for row in result.prescribed_n)
        assert result.prescribed_n[0][0] == prescription.n_rec[0]
        assert result.prescribed_n[9][9] == prescription.n_rec[99]


class TestEvaluateRun:
    def test_control_first_then_scenarios_then_optimizer(self):
        cfg = RunConfig(
            seed=6, rows=10, cols=10,
            scenario_refs=("builtin:1", "builtin:2"),
            optimizer=OptimizerConfig(multiplier_set=(0.0, 0.5, 1.0), stealth_budget=25.0),
        )
        results, solution = evaluate_run(cfg)
        assert [r.kind for r in results] == ["control", "scenario", "scenario", "optimized"]
        assert results[0].name == "control"
        assert results[1].name == "scenario-1"
        assert solution is not None
        assert results[-1].ledger.profit_loss_gain == pytest.approx(solution.loss, abs=1e-6)

    def test_control_only_run(self):
        cfg = RunConfig(seed=6, rows=3, cols=3)
        results, solution = evaluate_run(cfg)
        assert len(results) == 1
        assert solution is None
        assert results[0].ledger.profit_loss_gain == 0.0


class TestBuildDocument:
    def test_document_shape_and_rounding(self):
        cfg = RunConfig(seed=6, rows=4, cols=4, scenario_refs=("identity",))
        results, _ = evaluate_run(cfg)
        document = build_document(cfg, results)
        assert list(document) == ["format_version", "meta", "summary", "scenarios"]
        assert document["format_version"] == 1
        meta = document["meta"]
        assert meta["tool"] == "sidedress"
        assert meta["seed"] == 6
        assert meta["field_source"] == "seed:6"
        assert meta["config_digest"] == cfg.digest()
        assert len(document["summary"]) == 2
        row = document["summary"][0]
        assert list(row) == ["scenario", "kind", "expected_profit", "actual_profit", "loss"]
        assert row["loss"] == money(results[0].ledger.profit_loss_gain)
        scenario = document["scenarios"][0]
        assert list(scenario) == ["name", "kind", "spoof_display", "ledger", "stealth", "grids"]
        assert list(scenario["grids"]) == ["prescribed_n", "applied_n", "yield", "zone_loss"]

    def test_summary_rounding_matches_ledger_view(self):
        cfg = RunConfig(seed=7, scenario_refs=("builtin:2",))
        results, _ = evaluate_run(cfg)
        document = build_document(cfg, results)
        for row, scenario in zip(document["summary"], document["scenarios"]):
            assert row["expected_profit"] == scenario["ledger"]["expected_profit"]
            assert row["actual_profit"] == scenario["ledger"]["actual_profit"]
            assert row["loss"] == scenario["ledger"]["profit_loss_gain"]

    def test_grids_embed_full_precision(self):
        cfg = RunConfig(seed=7, rows=3, cols=3)
        results, _ = evaluate_run(cfg)
        document = build_document(cfg, results)
        assert document["scenarios"][0]["grids"]["prescribed_n"] == results[0].prescribed_n

    def test_empty_results_rejected(self):
        with pytest.raises(ValueError, match="at least one"):
            build_document(RunConfig(seed=1), [])

    def test_file_sourced_field_named_in_meta(self, tmp_path):
        from sidedress.gridio import write_field_csv

        write_field_csv(tmp_path / "acres.csv", generate_field(seed=2, rows=2, cols=2))
        cfg = RunConfig(seed=None, field_path=tmp_path / "acres.csv", rows=2, cols=2)
        results, _ = evaluate_run(cfg)
        document = build_document(cfg, results)
        assert document["meta"]["field_source"] == "file:acres.csv"
        assert document["meta"]["seed"] is None


class TestEmitReport:
    def test_bundle_layout(self, tmp_path):
        cfg = RunConfig(seed=6, scenario_refs=("builtin:2",))
        results, _ = evaluate_run(cfg)
        paths = emit_report(cfg, results, tmp_path / "out")
        names = [p.name for p in paths]
        assert names[0] == "report.json"
        assert "control_prescribed_n.csv" in names
        assert "scenario-2_zone_loss.csv" in names
        assert len(names) == 1 + 4 * len(results)
        for path in paths:
            assert path.exists()

    def test_emission_is_byte_reproducible(self, tmp_path):
        cfg = RunConfig(
            seed=6, scenario_refs=("builtin:2",),
            optimizer=OptimizerConfig(multiplier_set=(0.0, 0.5, 1.0), stealth_budget=20.0),
        )
        first_doc, first_paths, _ = run_report(cfg, tmp_path / "a")
        second_doc, second_paths, _ = run_report(cfg, tmp_path / "b")
        assert first_doc == second_doc
        for pa, pb in zip(first_paths, second_paths):
            assert pa.name == pb.name
            assert pa.read_bytes() == pb.read_bytes()

    def test_duplicate_scenario_names_get_suffixes(self, tmp_path):
        cfg = RunConfig(seed=6, scenario_refs=("builtin:2", "builtin:2"))
        results, _ = evaluate_run(cfg)
        paths = emit_report(cfg, results, tmp_path)
        names = {p.name for p in paths}
        assert "scenario-2_yield.csv" in names
        assert "scenario-2-2_yield.csv" in names

    def test_report_json_round_trips(self, tmp_path):
        cfg = RunConfig(seed=9, rows=2, cols=2)
        document, paths, _ = run_report(cfg, tmp_path)
        loaded = json.loads(paths[0].read_text(encoding="utf-8"))
        assert loaded == document

    def test_csv_grids_are_display_rounded(self, tmp_path):
        from sidedress.gridio import read_grid_csv

        cfg = RunConfig(seed=9, rows=2, cols=2)
        results, _ = evaluate_run(cfg)
        paths = emit_report(cfg, results, tmp_path)
        grid = read_grid_csv(tmp_path / "control_prescribed_n.csv")
        for written, full in zip(grid, results[0].prescribed_n):
            for w, f in zip(written, full):
                assert w == round_half_up(f, 1)
