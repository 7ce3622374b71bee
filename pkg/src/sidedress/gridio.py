"""CSV serialization for grids and fields.

Both formats mirror the familiar spreadsheet layout: a header line of
column letters with an empty corner cell, then one line per row labeled
by its number.

    ,A,B,C
    1,110,153,57
    2,213,76,95

Field files use the same frame but pack the four zone attributes into
each cell as ``EY|NO3|OM|credits``. Files are UTF-8 with LF endings and
no quoting; numbers are written in canonical form (no decimal point for
integer values, shortest round-trip representation otherwise), so
writing what was read reproduces a canonical file byte for byte.
"""

from __future__ import annotations

import math
from pathlib import Path

from .field import FieldGrid, Zone, ZoneId, column_letter

Grid = list[list[float]]


def _format_number(value: float) -> str:
    value = float(value)
    if value.is_integer():
        return str(int(value))
    return repr(value)


def _parse_number(cell: str, where: str) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise ValueError(f"non-numeric cell {cell!r} at {where}") from None
    if not math.isfinite(value):
        raise ValueError(f"non-finite cell {cell!r} at {where}")
    return value


def _split_lines(text: str) -> list[str]:
    lines = text.split("\n")
    # A canonical file ends with a newline, leaving one empty trailing chunk.
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def _parse_frame(text: str) -> tuple[int, int, list[list[str]]]:
    """Validate the header/label frame; return (rows, cols, cell matrix)."""
    lines = _split_lines(text)
    if not lines:
        raise ValueError("empty document")
    header = lines[0].split(",")
    if header[0] != "" or len(header) < 2:
        raise ValueError("missing header; first line must be ',A,B,...'")
    cols = len(header) - 1
    for i, label in enumerate(header[1:]):
        if label != column_letter(i):
            raise ValueError(f"header column {i + 1} is {label!r}, expected {column_letter(i)!r}")
    body = []
    for row_num, line in enumerate(lines[1:], start=1):
        parts = line.split(",")
        if parts[0] != str(row_num):
            raise ValueError(f"row label {parts[0]!r} on line {row_num + 1}, expected {row_num!r}")
        if len(parts) - 1 != cols:
            raise ValueError(
                f"ragged row {row_num}: {len(parts) - 1} cells, header has {cols} columns"
            )
        body.append(parts[1:])
    if not body:
        raise ValueError("document has a header but no rows")
    return len(body), cols, body


def parse_grid_csv(text: str) -> Grid:
    rows, cols, body = _parse_frame(text)
    return [
        [_parse_number(cell, f"{column_letter(c)}{r + 1}") for c, cell in enumerate(row)]
        for r, row in enumerate(body)
    ]


def format_grid_csv(grid: Grid) -> str:
    if not grid or not grid[0]:
        raise ValueError("grid must have at least one row and column")
    cols = len(grid[0])
    if any(len(row) != cols for row in grid):
        raise ValueError("grid rows must all have the same length")
    lines = ["," + ",".join(column_letter(c) for c in range(cols))]
    for r, row in enumerate(grid, start=1):
        lines.append(str(r) + "," + ",".join(_format_number(v) for v in row))
    return "\n".join(lines) + "\n"


def read_grid_csv(path: Path | str) -> Grid:
    return parse_grid_csv(Path(path).read_text(encoding="utf-8"))


def write_grid_csv(path: Path | str, grid: Grid) -> None:
    Path(path).write_text(format_grid_csv(grid), encoding="utf-8", newline="\n")


def parse_field_csv(text: str) -> FieldGrid:
    rows, cols, body = _parse_frame(text)
    zones = []
    for r, row in enumerate(body, start=1):
        for c, cell in enumerate(row):
            where = f"{column_letter(c)}{r}"
            parts = cell.split("|")
            if len(parts) != 4:
                raise ValueError(
                    f"field cell at {where} must be 'EY|NO3|OM|credits', got {cell!r}"
                )
            ey, no3, om, credits = (_parse_number(p, where) for p in parts)
            zones.append(
                Zone(id=ZoneId(col=c, row=r), yield_goal=ey, soil_nitrate=no3,
                     organic_matter=om, n_credits=credits)
            )
    return FieldGrid(rows=rows, cols=cols, zones=tuple(zones))


def format_field_csv(field: FieldGrid) -> str:
    lines = ["," + ",".join(column_letter(c) for c in range(field.cols))]
    for r in range(1, field.rows + 1):
        cells = []
        for c in range(field.cols):
            zone = field.zones[(r - 1) * field.cols + c]
            cells.append(
                "|".join(
                    _format_number(v)
                    for v in (zone.yield_goal, zone.soil_nitrate, zone.organic_matter, zone.n_credits)
                )
            )
        lines.append(str(r) + "," + ",".join(cells))
    return "\n".join(lines) + "\n"


def read_field_csv(path: Path | str) -> FieldGrid:
    return parse_field_csv(Path(path).read_text(encoding="utf-8"))


def write_field_csv(path: Path | str, field: FieldGrid) -> None:
    Path(path).write_text(format_field_csv(field), encoding="utf-8", newline="\n")
