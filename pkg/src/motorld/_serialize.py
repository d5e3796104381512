"""Helpers for writing results as JSON and delimited text.

Infinities are encoded as the strings "inf"/"-inf" so that every emitted
document is strict JSON; NaN is never written.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Any

import numpy as np

__all__ = ["jsonable", "dump_json", "write_csv", "format_cell"]


def jsonable(obj: Any) -> Any:
    """Recursively convert a result object to strict-JSON-safe values."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if math.isnan(x):
            raise ValueError("refusing to serialize NaN")
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def dump_json(obj: Any, path: str | Path) -> None:
    Path(path).write_text(json.dumps(jsonable(obj), indent=2) + "\n")


def format_cell(value: Any) -> str:
    """Render one table cell; floats get full precision, infinities by name."""
    if isinstance(value, (float, np.floating)):
        x = float(value)
        if math.isnan(x):
            raise ValueError("refusing to serialize NaN")
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return repr(x)
    return str(value)


def write_csv(
    path: str | Path,
    header: list[str],
    rows: list[list[Any]],
    config: dict | None = None,
) -> None:
    """Write a delimited table, optionally preceded by a config comment line."""
    with open(path, "w", newline="") as fh:
        if config is not None:
            fh.write("# config: " + json.dumps(jsonable(config)) + "\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_cell(v) for v in row])
