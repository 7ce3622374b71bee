"""Rate-tampering attacks on the in-season application pass.

An attack is a per-zone multiplier map applied to the in-season share of
the prescription while the implement drives the field. The at-planting
share was applied before the attacker touched anything, so it is immune
by construction; only the in-season rate command stream is tamperable.

A scenario may also spoof the operator display, in which case the cab
shows the commanded rate regardless of what the implement actually
applied. Stealth metrics quantify what an operator could notice: the net
fertilizer delta across the pass, the worst per-zone relative deviation,
and the delta visible on the (possibly spoofed) display.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .agronomy import Prescription
from .field import ZoneId, column_letter

BUILTIN_IDS = (1, 2, 3)

# Column multiplier assignments for the two fully specified builtin
# scenarios, on the standard 10-column grid.
_SCENARIO_2_COLUMNS = {
    "A": 0.45, "B": 0.45, "C": 0.45, "D": 0.45, "E": 2.80,
    "F": 0.45, "G": 0.45, "H": 0.45, "I": 0.45, "J": 2.80,
}
_SCENARIO_3_COLUMNS = {
    "A": 1.00, "B": 0.25, "C": 2.00, "D": 0.25, "E": 1.00,
    "F": 0.25, "G": 2.00, "H": 0.25, "I": 2.00, "J": 1.00,
}


@dataclass(frozen=True)
class AttackScenario:
    """Named per-zone multiplier map (row-major) with a display-spoof flag."""

    name: str
    rows: int
    cols: int
    multipliers: tuple[float, ...]
    spoof_display: bool = False

    def __post_init__(self) -> None:
        if len(self.multipliers) != self.rows * self.cols:
            raise ValueError(
                f"scenario {self.name!r}: expected {self.rows * self.cols} multipliers,"
                f" got {len(self.multipliers)}"
            )
        for i, m in enumerate(self.multipliers):
            if m < 0:
                raise ValueError(f"scenario {self.name!r}: negative multiplier {m} at index {i}")

    @classmethod
    def identity(cls, rows: int, cols: int, name: str = "identity") -> "AttackScenario":
        return cls(name=name, rows=rows, cols=cols, multipliers=(1.0,) * (rows * cols))

    def multiplier_at(self, zone_id: ZoneId) -> float:
        if not (0 <= zone_id.col < self.cols and 1 <= zone_id.row <= self.rows):
            raise ValueError(f"zone {zone_id} outside {self.rows}x{self.cols} scenario")
        return self.multipliers[(zone_id.row - 1) * self.cols + zone_id.col]


@dataclass(frozen=True)
class AppliedRecord:
    """One zone of the pass: prescribed, actually applied, and shown rates."""

    zone: ZoneId
    commanded: float
    applied: float
    displayed: float


@dataclass(frozen=True)
class StealthMetrics:
    """What the tampering looks like from the cab and the invoice.

    total_delta         net in-season lb actually applied minus commanded
    max_zone_deviation  worst per-zone |applied - commanded| / commanded
    visible_delta       same net delta computed from displayed rates
    """

    total_delta: float
    max_zone_deviation: float
    visible_delta: float


def _scenario_from_columns(name: str, column_map: dict[str, float], rows: int, cols: int) -> AttackScenario:
    per_row = tuple(column_map[column_letter(c)] for c in range(cols))
    return AttackScenario(name=name, rows=rows, cols=cols, multipliers=per_row * rows)


def builtin_scenario(scenario_id: int, rows: int = 10, cols: int = 10) -> AttackScenario:
    """One of the three published attack scenarios.

    2: 45% of the prescribed in-season rate on columns A-D and F-I,
       280% on columns E and J.
    3: 25% on columns B, D, F, H; unchanged on A, E, J; 200% on C, G, I.
    1: a bundled per-zone map with values from {0.5, 0.75, 1.0, 1.5, 2.0};
       the published map itself was only shown as a heatmap, so the
       bundled reconstruction matches its value set and its near-zero net
       fertilizer delta, not the exact cell layout.

    All three are defined on the standard 10x10 grid.
    """
    if scenario_id not in BUILTIN_IDS:
        raise ValueError(f"unknown builtin scenario id {scenario_id}; expected one of {BUILTIN_IDS}")
    if (rows, cols) != (10, 10):
        raise ValueError(f"builtin scenario {scenario_id} is defined on a 10x10 grid, got {rows}x{cols}")
    if scenario_id == 2:
        return _scenario_from_columns("scenario-2", _SCENARIO_2_COLUMNS, rows, cols)
    if scenario_id == 3:
        return _scenario_from_columns("scenario-3", _SCENARIO_3_COLUMNS, rows, cols)
    from .fixtures import scenario1_multiplier_grid

    grid = scenario1_multiplier_grid()
    flat = tuple(v for row in grid for v in row)
    return AttackScenario(name="scenario-1", rows=rows, cols=cols, multipliers=flat)


def _check_congruent(prescription: Prescription, scenario: AttackScenario) -> None:
    if (prescription.rows, prescription.cols) != (scenario.rows, scenario.cols):
        raise ValueError(
            f"scenario {scenario.name!r} is {scenario.rows}x{scenario.cols},"
            f" prescription is {prescription.rows}x{prescription.cols}"
        )


def apply_attack(prescription: Prescription, scenario: AttackScenario) -> tuple[float, ...]:
    """Per-zone total applied nitrogen under the scenario, row-major lb/acre.

    applied = planting_share + multiplier * inseason_share per zone. The
    planting share passes through untouched.
    """
    _check_congruent(prescription, scenario)
    return tuple(
        plant + m * season
        for plant, season, m in zip(prescription.planting, prescription.inseason, scenario.multipliers)
    )


def serpentine(rows: int, cols: int) -> list[ZoneId]:
    """Boustrophedon pass order: row 1 left to right, row 2 right to left, ..."""
    order = []
    for row in range(1, rows + 1):
        cols_iter = range(cols) if row % 2 == 1 else range(cols - 1, -1, -1)
        for col in cols_iter:
            order.append(ZoneId(col=col, row=row))
    return order


def simulate_pass(
    prescription: Prescription,
    scenario: AttackScenario,
    traversal: Sequence[ZoneId] | None = None,
) -> tuple[list[AppliedRecord], StealthMetrics]:
    """Replay the in-season pass zone by zone under tampering.

    Returns one record per zone in traversal order (serpentine by
    default) plus stealth metrics. Metric totals are reduced in row-major
    zone order, not traversal order, so they agree bit for bit with
    apply_attack regardless of how the implement drives the field.
    """
    _check_congruent(prescription, scenario)
    rows, cols = prescription.rows, prescription.cols
    if traversal is None:
        traversal = serpentine(rows, cols)
    expected_ids = {ZoneId(col=c, row=r) for r in range(1, rows + 1) for c in range(cols)}
    if len(traversal) != len(expected_ids) or set(traversal) != expected_ids:
        raise ValueError("traversal must visit every zone exactly once")

    row_major: list[AppliedRecord] = []
    for row in range(1, rows + 1):
        for col in range(cols):
            idx = (row - 1) * cols + col
            commanded = prescription.inseason[idx]
            applied = scenario.multipliers[idx] * commanded
            displayed = commanded if scenario.spoof_display else applied
            row_major.append(
                AppliedRecord(zone=ZoneId(col=col, row=row), commanded=commanded,
                              applied=applied, displayed=displayed)
            )
    records = [row_major[(z.row - 1) * cols + z.col] for z in traversal]

    total_delta = 0.0
    visible_delta = 0.0
    max_dev = 0.0
    for rec in row_major:
        total_delta += rec.applied - rec.commanded
        visible_delta += rec.displayed - rec.commanded
        if rec.commanded != 0.0:
            max_dev = max(max_dev, abs(rec.applied - rec.commanded) / rec.commanded)
    metrics = StealthMetrics(
        total_delta=total_delta,
        max_zone_deviation=max_dev,
        visible_delta=visible_delta,
    )
    return records, metrics


def _parse_zone_range(text: str, rows: int, cols: int) -> list[ZoneId]:
    parts = text.split(":")
    if len(parts) != 2:
        raise ValueError(f"malformed zone range {text!r}; expected '<COL><ROW>:<COL><ROW>'")
    try:
        first = ZoneId.parse(parts[0])
        second = ZoneId.parse(parts[1])
    except ValueError as exc:
        raise ValueError(f"malformed zone range {text!r}: {exc}") from exc
    col_lo, col_hi = sorted((first.col, second.col))
    row_lo, row_hi = sorted((first.row, second.row))
    if col_hi >= cols or row_hi > rows:
        raise ValueError(f"zone range {text!r} extends outside the {rows}x{cols} grid")
    return [
        ZoneId(col=c, row=r)
        for r in range(row_lo, row_hi + 1)
        for c in range(col_lo, col_hi + 1)
    ]


def load_scenario(document: dict, rows: int, cols: int, base_dir: Path | None = None) -> AttackScenario:
    """Build a scenario from a parsed scenario document.

    The document carries a name, an optional spoof_display flag, and
    either rectangle rules or a path to a multiplier grid CSV. Rules are
    applied in order over an all-ones map, so later rules override
    earlier ones; zones no rule touches stay at 1.0.
    """
    if not isinstance(document, dict):
        raise ValueError("scenario document must be a table of keys")
    unknown = set(document) - {"format_version", "name", "spoof_display", "rules", "grid"}
    if unknown:
        raise ValueError(f"unknown scenario document keys: {sorted(unknown)}")
    name = document.get("name")
    if not isinstance(name, str) or not name:
        raise ValueError("scenario document must carry a nonempty 'name'")
    spoof = document.get("spoof_display", False)
    if not isinstance(spoof, bool):
        raise ValueError(f"spoof_display must be a boolean, got {spoof!r}")
    has_rules = "rules" in document
    has_grid = "grid" in document
    if has_rules and has_grid:
        raise ValueError("scenario document must carry 'rules' or 'grid', not both")

    if has_grid:
        from .gridio import read_grid_csv

        path = Path(document["grid"])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        grid = read_grid_csv(path)
        if (len(grid), len(grid[0])) != (rows, cols):
            raise ValueError(
                f"multiplier grid {path} is {len(grid)}x{len(grid[0])}, expected {rows}x{cols}"
            )
        flat = tuple(v for row in grid for v in row)
        return AttackScenario(name=name, rows=rows, cols=cols, multipliers=flat, spoof_display=spoof)

    multipliers = [1.0] * (rows * cols)
    for rule in document.get("rules", []):
        if not isinstance(rule, dict) or set(rule) != {"zones", "multiplier"}:
            raise ValueError(f"each rule needs exactly 'zones' and 'multiplier', got {rule!r}")
        factor = rule["multiplier"]
        if not isinstance(factor, (int, float)) or isinstance(factor, bool):
            raise ValueError(f"rule multiplier must be a number, got {factor!r}")
        if factor < 0:
            raise ValueError(f"rule multiplier must be nonnegative, got {factor}")
        for zone_id in _parse_zone_range(str(rule["zones"]), rows, cols):
            multipliers[(zone_id.row - 1) * cols + zone_id.col] = float(factor)
    return AttackScenario(
        name=name, rows=rows, cols=cols, multipliers=tuple(multipliers), spoof_display=spoof
    )
