"""Delimited and structured output: fixed precision, stable ordering.

Reruns with identical inputs must be byte-identical, so floats are always
rendered at 17 significant digits (lossless for doubles), JSON keys are
sorted, and line endings are plain line feeds on every platform.
"""

from __future__ import annotations

import csv
import json
import sys

import numpy as np


def format_value(value) -> str:
    """Render one CSV cell: full precision for reals, plain digits for ints."""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    if isinstance(value, str):
        return value
    raise TypeError(f"cannot format {type(value).__name__} cell")


def _write_csv(fh, schema, rendered) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(schema)
    writer.writerows(rendered)


def emit_table(rows, schema, path: str | None = None) -> None:
    """Write rows as CSV with a header; `path` None means stdout.

    Complex quantities arrive pre-split into re/im columns; every row must
    match the schema width.
    """
    width = len(schema)
    rendered = []
    for row in rows:
        if len(row) != width:
            raise ValueError(f"row has {len(row)} cells, schema has {width}")
        rendered.append([format_value(v) for v in row])
    if path is None:
        _write_csv(sys.stdout, schema, rendered)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            _write_csv(fh, schema, rendered)


def emit_json(data, path: str | None = None) -> None:
    """Write a JSON document: sorted keys, two-space indent, trailing newline."""
    text = json.dumps(data, sort_keys=True, indent=2, allow_nan=False) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
