"""Reader for the sweep CSV schema.

Files carry `# key=value` header comment lines (parameter record and
artifact version), then a column-name row, then data rows.  Numeric
columns are parsed to float arrays; the trailing method / flags / error
columns stay as strings.  No physics is recomputed here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_STRING_COLUMNS = {"method", "flags", "error"}


class SchemaError(ValueError):
    """The CSV does not conform to the sweep dataset schema."""


@dataclass(frozen=True)
class Dataset:
    path: str
    params: dict
    columns: list
    table: dict

    def column(self, name):
        if name not in self.table:
            raise SchemaError(f"{self.path}: missing required column '{name}'")
        return self.table[name]

    def require(self, *names):
        for name in names:
            self.column(name)

    def param(self, key, default=None):
        return self.params.get(key, default)


def read_dataset(path):
    params = {}
    header = None
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                params[key.strip()] = value
            elif header is None:
                header = line.split(",")
            else:
                rows.append(line.split(","))
    if header is None:
        raise SchemaError(f"{path}: no header row found")
    if not rows:
        raise SchemaError(f"{path}: dataset contains no data rows")
    bad = [r for r in rows if len(r) != len(header)]
    if bad:
        raise SchemaError(f"{path}: ragged row with {len(bad[0])} fields, "
                          f"expected {len(header)}")

    table = {}
    for i, name in enumerate(header):
        raw = [r[i] for r in rows]
        if name in _STRING_COLUMNS:
            table[name] = raw
        else:
            try:
                table[name] = np.array([float(v) for v in raw])
            except ValueError as exc:
                raise SchemaError(f"{path}: column '{name}' is not numeric: {exc}") from exc
    return Dataset(path=str(path), params=params, columns=header, table=table)


def caption_from_params(params):
    """One-line caption echoing the physics parameters in the header."""
    keys = ("sweep_id", "m", "omega", "lambda", "tau_i", "tau_f", "delta_tau",
            "x0", "k0", "artifact_version")
    parts = []
    for key in keys:
        if key in params:
            value = params[key]
            try:
                value = f"{float(value):g}"
            except ValueError:
                pass
            parts.append(f"{key}={value}")
    return ", ".join(parts)
