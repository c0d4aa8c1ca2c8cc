"""Result tables and their CSV / JSON serializations.

CSV layout::

    # gamowlab <table name>
    # columns: n [-], E_R [energy], ...
    # note <key>: <value>
    n,E_R,...
    1,2.8,...

Floats are written with ``repr`` (shortest round-trip form), missing values
as empty cells.  The JSON form carries the same fields, with non-finite
floats as ``null``.  Neither contains
timestamps, so identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any


@dataclass
class Table:
    name: str
    columns: list[tuple[str, str]]
    rows: list[list[Any]] = field(default_factory=list)
    notes: dict[str, str] = field(default_factory=dict)

    @property
    def column_names(self) -> list[str]:
        return [c for c, _ in self.columns]

    def column(self, name: str) -> list[Any]:
        i = self.column_names.index(name)
        return [row[i] for row in self.rows]

    def records(self) -> list[dict[str, Any]]:
        names = self.column_names
        return [dict(zip(names, row)) for row in self.rows]


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def to_csv(table: Table) -> str:
    buf = io.StringIO()
    buf.write(f"# gamowlab {table.name}\n")
    buf.write("# columns: " + ", ".join(f"{c} [{u}]" for c, u in table.columns) + "\n")
    for key, value in table.notes.items():
        buf.write(f"# note {key}: {value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.column_names)
    for row in table.rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _jsonable(value):
    # JSON has no NaN or infinity
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def to_json(table: Table) -> str:
    doc = {
        "table": table.name,
        "columns": [{"name": c, "unit": u} for c, u in table.columns],
        "rows": [{c: _jsonable(v) for c, v in zip(table.column_names, row)} for row in table.rows],
        "notes": table.notes,
    }
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def render(table: Table, fmt: str) -> str:
    if fmt == "csv":
        return to_csv(table)
    if fmt == "json":
        return to_json(table)
    raise ValueError(f"unknown format {fmt!r}")


def _parse_cell(text: str):
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def from_csv(text: str) -> Table:
    name, columns, notes = "", [], {}
    body = []
    for line in text.splitlines():
        if line.startswith("# gamowlab "):
            name = line[len("# gamowlab ") :].strip()
        elif line.startswith("# columns: "):
            for part in line[len("# columns: ") :].split(", "):
                col, _, unit = part.partition(" [")
                columns.append((col, unit.rstrip("]")))
        elif line.startswith("# note "):
            key, _, value = line[len("# note ") :].partition(": ")
            notes[key] = value
        elif not line.startswith("#"):
            body.append(line)
    reader = csv.reader(body)
    header = next(reader)
    if columns and [c for c, _ in columns] != header:
        raise ValueError("column header does not match the '# columns' line")
    if not columns:
        columns = [(c, "") for c in header]
    rows = [[_parse_cell(c) for c in row] for row in reader]
    return Table(name=name, columns=columns, rows=rows, notes=notes)


def from_json(text: str) -> Table:
    doc = json.loads(text)
    columns = [(c["name"], c["unit"]) for c in doc["columns"]]
    names = [c for c, _ in columns]
    rows = [[r.get(c) for c in names] for r in doc["rows"]]
    return Table(name=doc["table"], columns=columns, rows=rows, notes=dict(doc.get("notes", {})))


def read_table(path) -> Table:
    """Load a table written by :func:`write_table`; format is sniffed from the content."""
    text = Path(path).read_text()
    return from_json(text) if text.lstrip().startswith("{") else from_csv(text)


def write_table(table: Table, path, fmt: str) -> None:
    Path(path).write_text(render(table, fmt))
