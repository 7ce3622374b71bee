"""Management-zone field model.

A field is a rectangular grid of management zones. Columns are lettered
(A, B, C, ...) and rows are numbered starting at 1, so the zone in the
top-left corner is A1. Each zone carries the soil attributes that drive
the nitrogen recommendation: an expected yield goal, a residual soil
nitrate test value, percent organic matter, and any other nitrogen
credits.

Synthetic fields are drawn with a fixed, documented generator (numpy's
PCG64 bit stream, consumed as 53-bit doubles) so that a seed identifies
one field forever, independent of platform.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Iterator

import numpy as np

_ALPHABET = string.ascii_uppercase


def column_letter(index: int) -> str:
    """Spreadsheet-style column label for a 0-based index (A, B, ..., Z, AA, ...)."""
    if index < 0:
        raise ValueError(f"column index must be >= 0, got {index}")
    label = ""
    index += 1
    while index > 0:
        index, rem = divmod(index - 1, 26)
        label = _ALPHABET[rem] + label
    return label


def column_index(label: str) -> int:
    """Inverse of :func:`column_letter`."""
    if not label or any(ch not in _ALPHABET for ch in label):
        raise ValueError(f"malformed column label {label!r}")
    index = 0
    for ch in label:
        index = index * 26 + (ord(ch) - ord("A") + 1)
    return index - 1


@dataclass(frozen=True)
class ZoneId:
    """Grid position of a management zone.

    ``col`` is 0-based, ``row`` is 1-based; the canonical text form is the
    column letter followed by the row number, e.g. B5.
    """

    col: int
    row: int

    def __str__(self) -> str:
        return f"{column_letter(self.col)}{self.row}"

    @classmethod
    def parse(cls, text: str) -> "ZoneId":
        letters = text.rstrip("0123456789")
        digits = text[len(letters):]
        if not letters or not digits:
            raise ValueError(f"malformed zone id {text!r}")
        row = int(digits)
        if row < 1:
            raise ValueError(f"zone row must be >= 1, got {text!r}")
        return cls(col=column_index(letters), row=row)


@dataclass(frozen=True)
class Zone:
    """One management zone and its soil attributes.

    yield_goal      expected yield, bu/acre
    soil_nitrate    residual nitrate test, ppm
    organic_matter  percent organic matter
    n_credits       other nitrogen credits, lb/acre
    """

    id: ZoneId
    yield_goal: float
    soil_nitrate: float
    organic_matter: float
    n_credits: float = 0.0


@dataclass(frozen=True)
class GenerationRanges:
    """Closed sampling ranges for synthetic zone attributes.

    Nitrogen credits are a fixed per-zone value, not a sampled range; no
    published scenario assigns them, so they default to zero.
    """

    yield_goal: tuple[float, float] = (150.0, 190.0)
    soil_nitrate: tuple[float, float] = (2.0, 4.0)
    organic_matter: tuple[float, float] = (1.8, 2.2)
    n_credits: float = 0.0

    def spans(self) -> list[tuple[str, tuple[float, float]]]:
        return [
            ("yield_goal", self.yield_goal),
            ("soil_nitrate", self.soil_nitrate),
            ("organic_matter", self.organic_matter),
        ]


@dataclass(frozen=True)
class FieldGrid:
    """Immutable rectangular grid of zones, stored row-major."""

    rows: int
    cols: int
    zones: tuple[Zone, ...]

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"grid must have at least one row and column, got {self.rows}x{self.cols}")
        if len(self.zones) != self.rows * self.cols:
            raise ValueError(f"expected {self.rows * self.cols} zones, got {len(self.zones)}")

    def __iter__(self) -> Iterator[Zone]:
        return iter(self.zones)

    def __len__(self) -> int:
        return len(self.zones)

    def index_of(self, zone_id: ZoneId) -> int:
        if not (0 <= zone_id.col < self.cols and 1 <= zone_id.row <= self.rows):
            raise ValueError(f"zone {zone_id} outside {self.rows}x{self.cols} grid")
        return (zone_id.row - 1) * self.cols + zone_id.col

    def zone_at(self, zone_id: ZoneId) -> Zone:
        return self.zones[self.index_of(zone_id)]

    def zone(self, text: str) -> Zone:
        return self.zone_at(ZoneId.parse(text))


def generate_field(
    seed: int,
    rows: int = 10,
    cols: int = 10,
    ranges: GenerationRanges = GenerationRanges(),
) -> FieldGrid:
    """Draw a synthetic field from a seed.

    Zone attributes are independent uniform draws on the configured closed
    ranges. The draw order is fixed: zones row-major (A1, B1, ..., then
    A2, ...), and within a zone yield_goal, then soil_nitrate, then
    organic_matter. Each draw consumes one 53-bit double u from PCG64
    seeded with ``seed`` and maps it to lo + (hi - lo) * u, so a seed pins
    the field bit for bit across platforms and releases.
    """
    if rows < 1 or cols < 1:
        raise ValueError(f"grid must have at least one row and column, got {rows}x{cols}")
    for name, (lo, hi) in ranges.spans():
        if not (lo <= hi):
            raise ValueError(f"invalid {name} range: lo {lo} > hi {hi}")

    rng = np.random.Generator(np.random.PCG64(seed))
    zones = []
    for row in range(1, rows + 1):
        for col in range(cols):
            drawn = {}
            for name, (lo, hi) in ranges.spans():
                drawn[name] = lo + (hi - lo) * rng.random()
            zones.append(Zone(id=ZoneId(col=col, row=row), n_credits=ranges.n_credits, **drawn))
    return FieldGrid(rows=rows, cols=cols, zones=tuple(zones))


def validate_field(field: FieldGrid) -> list[str]:
    """Return one message per violated zone or grid constraint.

    An empty list means the field is valid. Violations are reported as
    data, not raised, so callers can batch them.
    """
    violations = []
    seen: set[ZoneId] = set()
    for zone in field:
        zid = zone.id
        if zid in seen:
            violations.append(f"zone {zid}: duplicate zone id")
        seen.add(zid)
        if not (0 <= zid.col < field.cols and 1 <= zid.row <= field.rows):
            violations.append(f"zone {zid}: position outside {field.rows}x{field.cols} grid")
        if not zone.yield_goal > 0:
            violations.append(f"zone {zid}: yield_goal {zone.yield_goal} must be positive")
        if not zone.soil_nitrate >= 0:
            violations.append(f"zone {zid}: soil_nitrate {zone.soil_nitrate} must be nonnegative")
        if not 0.5 <= zone.organic_matter <= 3.0:
            violations.append(f"zone {zid}: organic_matter {zone.organic_matter} outside [0.5, 3.0]")
        if not zone.n_credits >= 0:
            violations.append(f"zone {zid}: n_credits {zone.n_credits} must be nonnegative")
    return violations
