"""Reproduction of the published case study's aggregate results.

Three tiers of comparison, in decreasing strictness:

* Ledger identities. The study's stated whole-field totals, pushed
  through the revenue/cost/profit arithmetic, must reproduce its stated
  dollar figures to the cent. These rows gate the exit status.
* Reference grid checksums. The transcribed per-zone tables must sum to
  within +/-0.5 per cell of the stated unrounded totals, and exactly to
  their pinned transcription sums.
* Calibrated stand-in rows. The bundled field only approximates the
  study's unpublished field, so whole-pipeline numbers computed from it
  are reported with their deviation and never gate.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import fixtures as fx
from .agronomy import EconParams, _ordered_sum, harvest, prescribe_field, price_adjustment
from .attacks import builtin_scenario, simulate_pass
from .economics import Totals, compile_ledger
from .optimizer import evaluate_scenario

LEDGER_TOLERANCE = 0.005  # cent-exact after display rounding
CHECKSUM_TOLERANCE = 50.0  # 100 cells x 0.5 integer-printing bound


@dataclass(frozen=True)
class ComparisonRow:
    section: str
    label: str
    stated: float
    computed: float
    tolerance: float | None  # None marks an informational row
    places: int = 2
    note: str = ""

    @property
    def delta(self) -> float:
        return self.computed - self.stated

    @property
    def status(self) -> str:
        if self.tolerance is None:
            return "INFO"
        return "PASS" if abs(self.delta) <= self.tolerance else "FAIL"


def _ledger_rows() -> list[ComparisonRow]:
    rows = [
        ComparisonRow(
            "price coefficient", "price_adjustment(7.53, 1.10)",
            fx.PRICE_ADJUSTMENT_STATED, price_adjustment(7.53, 1.10),
            tolerance=0.0005, places=6,
        )
    ]
    econ = EconParams()
    control = Totals(yield_total=fx.CONTROL.yield_total, n_total=fx.CONTROL.n_total)
    base = compile_ledger(control, control, econ)
    rows += [
        ComparisonRow("ledger: control", "revenue", fx.CONTROL.revenue,
                      base.expected_revenue, LEDGER_TOLERANCE),
        ComparisonRow("ledger: control", "cost", fx.CONTROL.cost,
                      base.expected_cost, LEDGER_TOLERANCE),
        ComparisonRow("ledger: control", "profit", fx.CONTROL.profit,
                      base.expected_profit, LEDGER_TOLERANCE),
    ]
    for ref in fx.REFERENCE_SCENARIOS:
        actual = Totals(yield_total=ref.yield_total, n_total=ref.n_total)
        led = compile_ledger(control, actual, econ)
        section = f"ledger: {ref.name}"
        rows += [
            ComparisonRow(section, "revenue", ref.revenue, led.actual_revenue, LEDGER_TOLERANCE),
            ComparisonRow(section, "cost", ref.cost, led.actual_cost, LEDGER_TOLERANCE),
            ComparisonRow(section, "profit", ref.profit, led.actual_profit, LEDGER_TOLERANCE),
            ComparisonRow(section, "profit loss/gain", ref.loss, led.profit_loss_gain,
                          LEDGER_TOLERANCE),
        ]
    rows += [
        ComparisonRow("ledger: scenario-1", "sales loss", fx.SCENARIO_1_SALES_LOSS,
                      econ.corn_price * (fx.CONTROL.yield_total - fx.SCENARIO_1.yield_total),
                      LEDGER_TOLERANCE),
        ComparisonRow("ledger: scenario-1", "extra fertilizer cost",
                      fx.SCENARIO_1_EXTRA_FERTILIZER_COST,
                      econ.nitrogen_price * (fx.SCENARIO_1.n_total - fx.CONTROL.n_total),
                      LEDGER_TOLERANCE),
        ComparisonRow("ledger: scenario-2", "sales loss", fx.SCENARIO_2_SALES_LOSS,
                      econ.corn_price * (fx.CONTROL.yield_total - fx.SCENARIO_2.yield_total),
                      LEDGER_TOLERANCE),
        ComparisonRow("ledger: scenario-2", "fertilizer saving", fx.SCENARIO_2_FERTILIZER_SAVING,
                      econ.nitrogen_price * (fx.CONTROL.n_total - fx.SCENARIO_2.n_total),
                      LEDGER_TOLERANCE),
        ComparisonRow("ledger: scenario-3", "sales loss (consistent)",
                      fx.SCENARIO_3_SALES_LOSS_CONSISTENT,
                      econ.corn_price * (fx.CONTROL.yield_total - fx.SCENARIO_3.yield_total),
                      LEDGER_TOLERANCE,
                      note="study prints $14,476.66; $4.00 off its own revenue totals"),
    ]
    return rows


def _checksum_rows() -> list[ComparisonRow]:
    rows = []
    sums = fx.fixture_checksums()
    for name, stated in fx.FIXTURE_STATED_TOTALS.items():
        total = sums[name][0]
        rows.append(
            ComparisonRow("grid checksums", f"{name} sum", stated, total, CHECKSUM_TOLERANCE,
                          places=0)
        )
        rows.append(
            ComparisonRow("grid checksums", f"{name} pinned sum", fx.FIXTURE_PINNED_SUMS[name],
                          total, 0.0, places=0)
        )
    return rows


def _calibrated_rows() -> list[ComparisonRow]:
    field = fx.calibrated_field()
    prescription = prescribe_field(field)
    control_yield = harvest(field, prescription.n_rec)
    rows = [
        ComparisonRow("calibrated field", "control yield total (bu)",
                      fx.CONTROL.yield_total, control_yield.total, None, places=1),
        ComparisonRow("calibrated field", "control nitrogen total (lb)",
                      fx.CONTROL.n_total, prescription.total, None, places=1),
        ComparisonRow("calibrated field", "planting nitrogen (lb)",
                      fx.CONTROL_PLANTING_TOTAL, _ordered_sum(prescription.planting), None,
                      places=1),
        ComparisonRow("calibrated field", "in-season nitrogen (lb)",
                      fx.CONTROL.inseason_total, _ordered_sum(prescription.inseason), None,
                      places=1),
    ]
    for ref, sid in zip(fx.REFERENCE_SCENARIOS, (1, 2, 3)):
        scenario = builtin_scenario(sid)
        led = evaluate_scenario(field, prescription, scenario)
        _, metrics = simulate_pass(prescription, scenario)
        rows.append(
            ComparisonRow("calibrated field", f"{ref.name} loss ($)", ref.loss,
                          led.profit_loss_gain, None)
        )
        rows.append(
            ComparisonRow("calibrated field", f"{ref.name} net in-season delta (lb)",
                          ref.inseason_total - fx.CONTROL.inseason_total, metrics.total_delta,
                          None, places=1)
        )
    return rows


def comparison_rows() -> list[ComparisonRow]:
    return _ledger_rows() + _checksum_rows() + _calibrated_rows()


def render_table(rows: list[ComparisonRow]) -> str:
    header = f"{'section':<20} {'target':<36} {'stated':>14} {'computed':>14} {'delta':>12} {'status':<6}"
    lines = [header, "-" * len(header)]
    for row in rows:
        fmt = f"{{:>14.{row.places}f}}"
        delta_fmt = f"{{:>+12.{max(row.places, 2)}f}}"
        lines.append(
            f"{row.section:<20} {row.label:<36} "
            f"{fmt.format(row.stated)} {fmt.format(row.computed)} "
            f"{delta_fmt.format(row.delta)} {row.status:<6}"
        )
        if row.note:
            lines.append(f"{'':<20} note: {row.note}")
    return "\n".join(lines) + "\n"


def reproduce() -> tuple[str, bool]:
    """Comparison table and whether every gated identity passed."""
    rows = comparison_rows()
    ok = all(row.status == "PASS" for row in rows if row.tolerance is not None)
    verdict = "all gated identities PASS" if ok else "GATED IDENTITY FAILURE"
    text = render_table(rows) + f"\n{verdict}\n"
    return text, ok
