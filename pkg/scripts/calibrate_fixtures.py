"""Regenerate the bundled calibrated field and scenario-1 multiplier map.

The published study never released its per-zone field inputs or the
scenario-1 multiplier layout, only aggregates. This script picks bundled
stand-ins:

1. a generation seed whose field, under default parameters, best
   approximates the stated control totals (16,983 bu expected yield,
   14,759 lb nitrogen) while containing at least one zone near the
   stated 147 lb/acre single-zone recommendation, and

2. a scenario-1 multiplier assignment over the stated value set
   {0.5, 0.75, 1.0, 1.5, 2.0} (with B5 pinned to 0.5, as the study
   describes) whose net in-season delta on that field is as close as
   possible to the stated +24 lb, breaking ties toward the stated
   $13,128.60 loss.

Writes src/sidedress/data/calibrated_field.csv and
src/sidedress/data/scenario1_multipliers.csv, then prints the constants
block to pin in sidedress/fixtures.py.

Usage: python scripts/calibrate_fixtures.py [--field-seeds N] [--map-seeds N]
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from sidedress import fixtures
from sidedress.agronomy import EconParams, SplitFractions, YieldBounds, prescribe_field
from sidedress.attacks import AttackScenario, simulate_pass
from sidedress.field import GenerationRanges, generate_field
from sidedress.gridio import format_field_csv, format_grid_csv, write_field_csv, write_grid_csv
from sidedress.optimizer import evaluate_scenario, zone_loss_table

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "sidedress" / "data"

# Scenario-1 value multiset: 100 zones split so the expected net delta is
# zero (0.5 and 0.75 under-apply what 1.5 and 2.0 over-apply).
MAP_VALUES = (0.5, 0.75, 1.0, 1.5, 2.0)
MAP_COUNTS = (30, 20, 20, 20, 10)
B5_INDEX = (5 - 1) * 10 + 1  # row-major index of zone B5


def field_candidates(n_seeds: int) -> list[tuple[float, int, float, float]]:
    """Score every seed; return (error, seed, yield_total, n_total) candidates."""
    econ = EconParams()
    pa_ta = econ.price_adjustment() * econ.timing_adj
    target_yield = fixtures.CONTROL.yield_total
    target_n = fixtures.CONTROL.n_total
    ranges = GenerationRanges()
    (ey_lo, ey_hi), (no3_lo, no3_hi), (om_lo, om_hi) = (
        ranges.yield_goal, ranges.soil_nitrate, ranges.organic_matter,
    )
    out = []
    t0 = time.time()
    for seed in range(n_seeds):
        # Same stream generate_field consumes: 3 doubles per zone, row-major.
        u = np.random.Generator(np.random.PCG64(seed)).random(300)
        ey = ey_lo + (ey_hi - ey_lo) * u[0::3]
        no3 = no3_lo + (no3_hi - no3_lo) * u[1::3]
        om = om_lo + (om_hi - om_lo) * u[2::3]
        nrec = (35.0 + 1.2 * ey - 8.0 * no3 - 0.14 * ey * om) * pa_ta
        if np.min(np.abs(nrec - fixtures.ZONE_A1_N_REC_STATED)) > 0.45:
            continue
        err = abs(float(ey.sum()) - target_yield) + abs(float(nrec.sum()) - target_n)
        if err < 25.0:
            out.append((err, seed, float(ey.sum()), float(nrec.sum())))
        if seed and seed % 200_000 == 0:
            print(f"  scanned {seed} seeds ({time.time() - t0:.0f}s), {len(out)} candidates")
    out.sort()
    return out


def choose_field(n_seeds: int):
    print(f"stage 1: scanning {n_seeds} field seeds")
    candidates = field_candidates(n_seeds)
    if not candidates:
        raise SystemExit("no candidate seeds; widen the search")
    err, seed, approx_yield, approx_n = candidates[0]
    # Re-derive the pins through the package path (ordered sums), not the
    # vectorized search arithmetic.
    field = generate_field(seed)
    prescription = prescribe_field(field)
    from sidedress.agronomy import harvest

    expected = harvest(field, prescription.n_rec)
    print(f"  best seed {seed}: yield_total {expected.total!r} (target {fixtures.CONTROL.yield_total}),"
          f" n_total {prescription.total!r} (target {fixtures.CONTROL.n_total})")
    print(f"  planting {prescription.planting_total!r} / in-season {prescription.inseason_total!r}")
    return seed, field, prescription, expected.total


def choose_map(field, prescription, n_seeds: int):
    print(f"stage 2: scanning {n_seeds} map shuffles")
    econ = EconParams()
    table = zone_loss_table(field, prescription, econ, YieldBounds(), (0.5, 0.75, 1.0, 1.5, 2.0))
    losses = np.asarray(table.losses)
    deltas = np.asarray(table.deltas)
    value_col = {v: k for k, v in enumerate(table.multipliers)}
    base = np.repeat(np.asarray(MAP_VALUES), MAP_COUNTS)
    target_delta = fixtures.SCENARIO_1.inseason_total - fixtures.CONTROL.inseason_total
    target_loss = fixtures.SCENARIO_1.loss

    best = None
    for seed in range(n_seeds):
        rng = np.random.Generator(np.random.PCG64(seed))
        values = base[rng.permutation(100)]
        if values[B5_INDEX] != 0.5:
            swap = int(np.nonzero(values == 0.5)[0][0])
            values[B5_INDEX], values[swap] = values[swap], values[B5_INDEX]
        cols = np.asarray([value_col[v] for v in values])
        idx = np.arange(100)
        delta = float(deltas[idx, cols].sum())
        # Hold the net delta within a pound of the stated +24, then chase
        # the stated loss.
        if abs(delta - target_delta) > 1.0:
            continue
        loss = float(losses[idx, cols].sum())
        key = abs(loss - target_loss)
        if best is None or key < best[0]:
            best = (key, seed, values.copy(), delta, loss)
    if best is None:
        raise SystemExit("no map shuffle hit the delta window; widen the search")
    _, seed, values, delta, loss = best
    print(f"  best shuffle {seed}: delta {delta:+.3f} lb (target {target_delta:+.0f}),"
          f" loss {loss:.2f} (target {target_loss:.2f})")
    return [[float(values[r * 10 + c]) for c in range(10)] for r in range(10)]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--field-seeds", type=int, default=1_000_000)
    parser.add_argument("--map-seeds", type=int, default=300_000)
    args = parser.parse_args(argv)

    seed, field, prescription, yield_total = choose_field(args.field_seeds)
    grid = choose_map(field, prescription, args.map_seeds)

    write_field_csv(DATA_DIR / "calibrated_field.csv", field)
    write_grid_csv(DATA_DIR / "scenario1_multipliers.csv", grid)

    # Recompute the map pins exactly as the package reports them.
    scenario = AttackScenario(
        name="scenario-1", rows=10, cols=10,
        multipliers=tuple(v for row in grid for v in row),
    )
    _, metrics = simulate_pass(prescription, scenario)
    ledger = evaluate_scenario(field, prescription, scenario)

    print("\npins for sidedress/fixtures.py:")
    print(f"CALIBRATED_FIELD_SEED = {seed}")
    print(f"CALIBRATED_YIELD_TOTAL = {yield_total!r}")
    print(f"CALIBRATED_N_TOTAL = {prescription.total!r}")
    print(f"SCENARIO_1_MAP_DELTA = {metrics.total_delta!r}")
    print(f"SCENARIO_1_MAP_LOSS = {ledger.profit_loss_gain!r}")
    # Round-trip sanity: the written field reparses identically.
    assert format_field_csv(field) == (DATA_DIR / "calibrated_field.csv").read_text(encoding="utf-8")
    assert format_grid_csv(grid) == (DATA_DIR / "scenario1_multipliers.csv").read_text(encoding="utf-8")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
