"""CSV reading with fail-fast schema validation.

Figures never recompute physics; they render exactly what the CSVs carry.
A missing column, a ragged row, or an empty table is reported with the
offending name or line number before any drawing happens.
"""

import numpy as np


class SchemaError(ValueError):
    """Input CSV does not satisfy the figure's column contract."""


class CsvTable:
    def __init__(self, path, columns, rows):
        self.path = path
        self.columns = columns
        self.rows = rows  # list of string tuples

    def __len__(self):
        return len(self.rows)

    def floats(self, name):
        idx = self.columns.index(name)
        out = np.empty(len(self.rows))
        for k, row in enumerate(self.rows):
            text = row[idx]
            try:
                out[k] = float(text) if text else np.nan
            except ValueError as exc:
                raise SchemaError(
                    f"{self.path}: row {k + 2}, column {name!r}: not a number ({text!r})"
                ) from exc
        return out

    def strings(self, name):
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]


def read_csv(path, required):
    """Parse a CSV and verify the required columns; rejects truncated files."""
    with open(path) as fh:
        header_line = fh.readline().strip()
        if not header_line:
            raise SchemaError(f"{path}: empty file, no header")
        columns = header_line.split(",")
        missing = [c for c in required if c not in columns]
        if missing:
            raise SchemaError(f"{path}: missing required columns {missing}")
        rows = []
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = tuple(line.split(","))
            if len(parts) != len(columns):
                raise SchemaError(
                    f"{path}: row {lineno} has {len(parts)} fields, expected {len(columns)} "
                    "(truncated file?)"
                )
            rows.append(parts)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return CsvTable(path, columns, rows)
