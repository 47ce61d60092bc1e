"""Reader for the pressure CSV written by `pforge pressure estimate`."""

import csv
import math
from dataclasses import dataclass, field

COLUMNS = ("t", "n", "upper", "lower", "target", "gap", "gamma_grid_spacing", "pruned_mass_bound")


class SchemaError(ValueError):
    pass


@dataclass
class PressureTable:
    manifest: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)


def _number(text, column, line):
    if text == "":
        return math.nan
    try:
        return float(text)
    except ValueError:
        raise SchemaError(f"line {line}: column {column!r} is not a number: {text!r}") from None


def parse_pressure_csv(text):
    table = PressureTable()
    lines = text.splitlines()
    body_start = 0
    for i, line in enumerate(lines):
        if not line.startswith("#"):
            body_start = i
            break
        key, sep, value = line[1:].strip().partition("=")
        if sep:
            table.manifest[key.strip()] = value.strip()
    else:
        body_start = len(lines)
    body = lines[body_start:]
    if not body:
        raise SchemaError("row count 0: missing header")
    reader = csv.reader(body)
    header = tuple(next(reader))
    if header != COLUMNS:
        raise SchemaError(f"column mismatch: expected {','.join(COLUMNS)}, got {','.join(header)}")
    for offset, cells in enumerate(reader):
        line = body_start + offset + 2
        if len(cells) != len(COLUMNS):
            raise SchemaError(f"line {line}: expected {len(COLUMNS)} fields, got {len(cells)}")
        row = dict(zip(COLUMNS, cells))
        try:
            t = tuple(float(x) for x in row["t"].split(";"))
            n = int(row["n"])
        except ValueError:
            raise SchemaError(f"line {line}: bad t or n") from None
        parsed = {"t": t, "n": n}
        for c in COLUMNS[2:]:
            parsed[c] = _number(row[c], c, line)
        table.rows.append(parsed)
    if not table.rows:
        raise SchemaError("row count 0: no data rows")
    return table


def read_pressure_csv(path):
    with open(path, newline="") as f:
        return parse_pressure_csv(f.read())
