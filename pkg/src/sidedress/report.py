"""Run evaluation and report emission.

A report bundles, for every evaluated scenario, the financial ledger,
stealth metrics, and four per-zone grids: prescribed N, applied N,
harvested yield, and per-zone loss. The JSON document embeds the grids
at full precision so every summary figure can be recomputed from it;
display rounding (cents for money, one decimal for pounds and bushels)
applies to the ledger and summary fields and to the emitted grid CSVs.

Everything here is a pure function of the run config, so re-running the
same config byte-reproduces the report and every CSV.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

from . import __version__
from .agronomy import (
    EconParams,
    Prescription,
    YieldBounds,
    _ordered_sum,
    harvest,
    prescribe_field,
)
from .attacks import AttackScenario, StealthMetrics, apply_attack, simulate_pass
from .config import RunConfig, resolve_field, resolve_scenario
from .economics import Ledger, Totals, compile_ledger
from .field import FieldGrid
from .gridio import Grid, format_grid_csv
from .optimizer import AttackSolution, optimize

FORMAT_VERSION = 1

GRID_NAMES = ("prescribed_n", "applied_n", "yield", "zone_loss")


def round_half_up(value: float, places: int) -> float:
    """Half-up decimal rounding of a float's shortest repr.

    Banker's rounding would turn 0.125 into 0.12; ledgers round half
    away from zero, so 0.125 must render as 0.13.
    """
    quantum = Decimal(1).scaleb(-places)
    return float(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_UP))


def money(value: float) -> float:
    return round_half_up(value, 2)


def tenth(value: float) -> float:
    return round_half_up(value, 1)


@dataclass(frozen=True)
class ScenarioResult:
    """One evaluated scenario: ledger, stealth metrics, per-zone grids."""

    name: str
    kind: str  # "control" | "scenario" | "optimized"
    spoof_display: bool
    ledger: Ledger
    metrics: StealthMetrics
    prescribed_n: Grid
    applied_n: Grid
    yields: Grid
    zone_loss: Grid


def _reshape(values, rows: int, cols: int) -> Grid:
    flat = list(values)
    return [flat[r * cols : (r + 1) * cols] for r in range(rows)]


def evaluate_attack(
    field: FieldGrid,
    prescription: Prescription,
    scenario: AttackScenario,
    econ: EconParams,
    bounds: YieldBounds,
    kind: str = "scenario",
) -> ScenarioResult:
    """Evaluate one scenario against the untampered baseline.

    The per-zone loss combines lost sales and the fertilizer-cost delta,
    so the grid total reproduces the ledger's profit loss/gain.
    """
    expected = harvest(field, prescription.n_rec, bounds, econ)
    applied = apply_attack(prescription, scenario)
    actual = harvest(field, applied, bounds, econ)
    ledger = compile_ledger(
        Totals(yield_total=expected.total, n_total=prescription.total),
        Totals(yield_total=actual.total, n_total=_ordered_sum(applied)),
        econ,
    )
    _, metrics = simulate_pass(prescription, scenario)
    zone_loss = [
        econ.corn_price * (ey - ay) + econ.nitrogen_price * (n_act - n_exp)
        for ey, ay, n_act, n_exp in zip(expected.yields, actual.yields, applied, prescription.n_rec)
    ]
    rows, cols = prescription.rows, prescription.cols
    return ScenarioResult(
        name=scenario.name,
        kind=kind,
        spoof_display=scenario.spoof_display,
        ledger=ledger,
        metrics=metrics,
        prescribed_n=_reshape(prescription.n_rec, rows, cols),
        applied_n=_reshape(applied, rows, cols),
        yields=_reshape(actual.yields, rows, cols),
        zone_loss=_reshape(zone_loss, rows, cols),
    )


def evaluate_run(cfg: RunConfig) -> tuple[list[ScenarioResult], AttackSolution | None]:
    """Control row, one row per configured scenario, optimizer row last."""
    field = resolve_field(cfg)
    prescription = prescribe_field(field, cfg.econ, cfg.split)
    control = evaluate_attack(
        field,
        prescription,
        AttackScenario.identity(field.rows, field.cols, name="control"),
        cfg.econ,
        cfg.bounds,
        kind="control",
    )
    results = [control]
    for ref in cfg.scenario_refs:
        scenario = resolve_scenario(ref, field.rows, field.cols, cfg.base_dir)
        results.append(evaluate_attack(field, prescription, scenario, cfg.econ, cfg.bounds))
    solution = None
    if cfg.optimizer is not None:
        solution = optimize(field, prescription, cfg.econ, cfg.bounds, cfg.optimizer)
        results.append(
            evaluate_attack(field, prescription, solution.scenario, cfg.econ, cfg.bounds,
                            kind="optimized")
        )
    return results, solution


def _ledger_view(ledger: Ledger) -> dict:
    return {
        "expected_yield_total": tenth(ledger.expected_yield_total),
        "actual_yield_total": tenth(ledger.actual_yield_total),
        "expected_n_total": tenth(ledger.expected_n_total),
        "actual_n_total": tenth(ledger.actual_n_total),
        "expected_revenue": money(ledger.expected_revenue),
        "expected_cost": money(ledger.expected_cost),
        "expected_profit": money(ledger.expected_profit),
        "actual_revenue": money(ledger.actual_revenue),
        "actual_cost": money(ledger.actual_cost),
        "actual_profit": money(ledger.actual_profit),
        "profit_loss_gain": money(ledger.profit_loss_gain),
    }


def _stealth_view(metrics: StealthMetrics) -> dict:
    return {
        "total_delta": tenth(metrics.total_delta),
        "visible_delta": tenth(metrics.visible_delta),
        "max_zone_deviation": round_half_up(metrics.max_zone_deviation, 4),
    }


def build_document(cfg: RunConfig, results: list[ScenarioResult]) -> dict:
    """Assemble the report document with a stable key order."""
    if not results:
        raise ValueError("report requires at least one evaluated scenario")
    field_source = (
        f"seed:{cfg.seed}" if cfg.field_path is None else f"file:{cfg.field_path.name}"
    )
    return {
        "format_version": FORMAT_VERSION,
        "meta": {
            "tool": "sidedress",
            "tool_version": __version__,
            "seed": cfg.seed,
            "field_source": field_source,
            "config_digest": cfg.digest(),
        },
        "summary": [
            {
                "scenario": r.name,
                "kind": r.kind,
                "expected_profit": money(r.ledger.expected_profit),
                "actual_profit": money(r.ledger.actual_profit),
                "loss": money(r.ledger.profit_loss_gain),
            }
            for r in results
        ],
        "scenarios": [
            {
                "name": r.name,
                "kind": r.kind,
                "spoof_display": r.spoof_display,
                "ledger": _ledger_view(r.ledger),
                "stealth": _stealth_view(r.metrics),
                "grids": {
                    "prescribed_n": r.prescribed_n,
                    "applied_n": r.applied_n,
                    "yield": r.yields,
                    "zone_loss": r.zone_loss,
                },
            }
            for r in results
        ],
    }


def _slug(name: str) -> str:
    return re.sub(r"[^a-z0-9]+", "-", name.lower()).strip("-") or "scenario"


def _result_grids(result: ScenarioResult) -> dict[str, Grid]:
    def q(grid: Grid, places: int) -> Grid:
        return [[round_half_up(v, places) for v in row] for row in grid]

    return {
        "prescribed_n": q(result.prescribed_n, 1),
        "applied_n": q(result.applied_n, 1),
        "yield": q(result.yields, 1),
        "zone_loss": q(result.zone_loss, 2),
    }


def emit_report(cfg: RunConfig, results: list[ScenarioResult], out_dir: Path) -> list[Path]:
    """Write report.json plus one display-rounded CSV per grid.

    Returns the written paths, report first. Scenario names repeat when a
    config lists the same reference twice; filenames get a numeric suffix
    so nothing is silently overwritten.
    """
    document = build_document(cfg, results)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    report_path = out_dir / "report.json"
    report_path.write_text(json.dumps(document, indent=2) + "\n", encoding="utf-8", newline="\n")
    paths.append(report_path)
    used: set[str] = set()
    for result in results:
        slug = _slug(result.name)
        if slug in used:
            n = 2
            while f"{slug}-{n}" in used:
                n += 1
            slug = f"{slug}-{n}"
        used.add(slug)
        for grid_name, grid in _result_grids(result).items():
            path = out_dir / f"{slug}_{grid_name}.csv"
            path.write_text(format_grid_csv(grid), encoding="utf-8", newline="\n")
            paths.append(path)
    return paths


def run_report(cfg: RunConfig, out_dir: Path) -> tuple[dict, list[Path], AttackSolution | None]:
    """Evaluate the config and emit the full report bundle."""
    results, solution = evaluate_run(cfg)
    paths = emit_report(cfg, results, out_dir)
    return build_document(cfg, results), paths, solution
