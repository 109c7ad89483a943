"""CSV input for matrices and moment sequences, and canonical JSON output."""

from __future__ import annotations

import csv
import json
from importlib import resources
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import InvalidInput

__all__ = ["load_report_schema", "read_matrix_csv", "write_matrix_csv", "read_moments_csv", "parse_number", "to_json", "jsonable"]


def parse_number(text: str) -> Fraction:
    """Exact value of a decimal or ``p/q`` string."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(f"not a number: {text!r}") from exc


def _rows(path) -> list[list[str]]:
    with open(Path(path), newline="") as fh:
        rows = [[cell for cell in row if cell.strip()] for row in csv.reader(fh)]
    rows = [r for r in rows if r and not r[0].lstrip().startswith("#")]
    if not rows:
        raise InvalidInput(f"{path}: no data")
    return rows


def read_matrix_csv(path, exact: bool = False):
    """A rectangular matrix, one row per line.

    ``exact=True`` returns nested lists of Fractions, otherwise a float array.
    """
    rows = [[parse_number(c) for c in r] for r in _rows(path)]
    if len({len(r) for r in rows}) != 1:
        raise InvalidInput(f"{path}: ragged rows")
    if exact:
        return rows
    return np.array([[float(x) for x in r] for r in rows])


def write_matrix_csv(path, a) -> None:
    with open(Path(path), "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in a:
            writer.writerow([_number_text(x) for x in row])


def read_moments_csv(path) -> list[float]:
    """All numbers in the file, row-major (one row or one column both work)."""
    return [float(parse_number(c)) for r in _rows(path) for c in r]


def _number_text(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def jsonable(obj):
    """Convert to plain JSON types; Fractions become ``"p/q"`` strings,
    complex numbers ``[re, im]`` pairs."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def _encode(obj, indent: int) -> str:
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {_encode(obj[k], indent + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if not any(isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_encode(v, indent + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + _encode(v, indent + 1) for v in obj) + "\n" + pad + "]"
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return json.dumps("nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf"))
        text = format(obj, ".17g")
        # keep floats recognisable as floats
        return text if any(ch in text for ch in ".en") else text + ".0"
    return json.dumps(obj)


def to_json(obj) -> str:
    """Deterministic JSON: sorted keys, floats at 17 significant digits,
    non-finite floats as the strings "inf", "-inf", "nan"."""
    return _encode(jsonable(obj), 0) + "\n"


def load_report_schema() -> dict:
    """The JSON Schema every CLI report validates against."""
    return json.loads(resources.files(__package__).joinpath("report.schema.json").read_text())
