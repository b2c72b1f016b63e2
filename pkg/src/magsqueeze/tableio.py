"""Deterministic tabular serialization: CSV with a metadata header, and JSON.

Floats are written with their shortest round-trip decimal representation
(``repr``), nulls as empty fields, newlines as ``\\n``; identical inputs
therefore produce byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .analysis import SweepResult
from .errors import InvalidInputError

__all__ = ["ResultTable", "sweep_table", "write_csv", "read_csv", "write_json"]

Cell = float | int | None

_INT_COLUMNS = {"stable"}


@dataclass
class ResultTable:
    """Column-named rows plus ordered metadata key/value pairs."""

    columns: list[str]
    rows: list[tuple[Cell, ...]]
    metadata: list[tuple[str, str]] = field(default_factory=list)

    def __post_init__(self) -> None:
        width = len(self.columns)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise InvalidInputError(
                    f"row {i} has {len(row)} cells, expected {width}"
                )

    def column(self, name: str) -> list[Cell]:
        try:
            k = self.columns.index(name)
        except ValueError:
            raise InvalidInputError(f"no column named {name!r}") from None
        return [row[k] for row in self.rows]


def _format_cell(value: Cell) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def sweep_table(
    result: SweepResult,
    axis_columns: Sequence[tuple[str, Sequence[float]]] | None = None,
    extra_metadata: Sequence[tuple[str, str]] = (),
) -> ResultTable:
    """Flatten a SweepResult into a table.

    ``axis_columns`` optionally renames the axis columns and substitutes
    display-unit grids (one per axis, same lengths as the sweep grids);
    without it the records' own axis values and names are used.
    """
    shape = tuple(len(grid) for _, grid in result.axes)
    if axis_columns is None:
        names = [name for name, _ in result.axes]
        grids: list[Sequence[float]] | None = None
    else:
        if len(axis_columns) != len(result.axes) or any(
            len(grid) != n for (_, grid), n in zip(axis_columns, shape)
        ):
            raise InvalidInputError("axis_columns must match the sweep axes in count and length")
        names = [name for name, _ in axis_columns]
        grids = [list(grid) for _, grid in axis_columns]

    columns = names + ["stable", "E_am", "E_ab", "E_mb", "R_min"]
    with_contrasts = result.pairing is not None
    if with_contrasts:
        columns += ["C_E_am", "C_E_ab", "C_E_mb", "C_R"]

    rows: list[tuple[Cell, ...]] = []
    strides = [1] * len(shape)
    for k in range(len(shape) - 2, -1, -1):
        strides[k] = strides[k + 1] * shape[k + 1]
    for index, record in enumerate(result.records):
        if grids is None:
            row: list[Cell] = list(record.axis_values)
        else:
            row = [grids[k][(index // strides[k]) % shape[k]] for k in range(len(shape))]
        row.append(int(record.stable))
        row += [record.e_am, record.e_ab, record.e_mb, record.r_min]
        if with_contrasts:
            row += [record.c_am, record.c_ab, record.c_mb, record.c_r]
        rows.append(tuple(row))

    n_stable = sum(1 for r in result.records if r.stable)
    metadata = list(extra_metadata)
    metadata.append(("stable_points", str(n_stable)))
    metadata.append(("unstable_points", str(len(result.records) - n_stable)))
    return ResultTable(columns=columns, rows=rows, metadata=metadata)


def to_csv_text(table: ResultTable) -> str:
    lines = [f"# {key} = {value}" for key, value in table.metadata]
    lines.append(",".join(table.columns))
    for row in table.rows:
        lines.append(",".join(_format_cell(cell) for cell in row))
    return "\n".join(lines) + "\n"


def write_csv(table: ResultTable, path: str | Path) -> None:
    Path(path).write_text(to_csv_text(table), encoding="utf-8", newline="\n")


def read_csv(path: str | Path) -> ResultTable:
    """Parse a file written by write_csv back into a ResultTable."""
    metadata: list[tuple[str, str]] = []
    columns: list[str] | None = None
    rows: list[tuple[Cell, ...]] = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            key, _, value = body.partition(" = ")
            metadata.append((key, value))
            continue
        if columns is None:
            columns = line.split(",")
            continue
        cells: list[Cell] = []
        for name, text in zip(columns, line.split(",")):
            if text == "":
                cells.append(None)
            elif name in _INT_COLUMNS:
                cells.append(int(text))
            else:
                cells.append(float(text))
        rows.append(tuple(cells))
    if columns is None:
        raise InvalidInputError(f"{path} has no header row")
    return ResultTable(columns=columns, rows=rows, metadata=metadata)


def to_json_text(table: ResultTable) -> str:
    payload = {
        "metadata": {key: value for key, value in table.metadata},
        "columns": {
            name: [row[k] for row in table.rows] for k, name in enumerate(table.columns)
        },
    }
    return json.dumps(payload, indent=2) + "\n"


def write_json(table: ResultTable, path: str | Path) -> None:
    Path(path).write_text(to_json_text(table), encoding="utf-8", newline="\n")
