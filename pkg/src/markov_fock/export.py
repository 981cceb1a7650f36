"""
Export Module

Turns results into JSON, JSON lines or CSV text. Every number is written as
a decimal string and every inexact number carries its error bound, so
identical runs produce byte-identical files.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import sys
from enum import Enum
from pathlib import Path

import mpmath
from mpmath import mpf

from .cohn import Mat2
from .farey import ContinuedFraction, Fraction, SBPath
from .fock_norm import HomologyClass, SlopeSequence
from .hpreal import HPReal
from .markov import MarkovTriple, SurfaceParam

BOUND_DIGITS = 20


def bound_str(x: mpf, direction: str, digits: int = BOUND_DIGITS) -> str:
    """Decimal string for a bound, rounded outward ("down" or "up")."""
    if x == 0:
        return "0"
    step = abs(x) * mpmath.power(10, 1 - digits)
    return mpmath.nstr(x - step if direction == "down" else x + step, digits)


def make_json_safe(obj):
    """Recursively convert results into plain JSON types with decimal strings."""
    if isinstance(obj, HPReal):
        return obj.to_json()
    if isinstance(obj, (MarkovTriple, Mat2)):
        return obj.to_json()
    if isinstance(obj, SurfaceParam):
        return obj.label
    if isinstance(obj, (Fraction, SBPath, ContinuedFraction, HomologyClass)):
        return str(obj)
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, mpf):
        return mpmath.nstr(obj, BOUND_DIGITS)
    if dataclasses.is_dataclass(obj):
        return {f.name: make_json_safe(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): make_json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [make_json_safe(v) for v in obj]
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"Cannot export {type(obj).__name__}")


def render_json(payload) -> str:
    return json.dumps(make_json_safe(payload), indent=2) + "\n"


def render_json_lines(records: list[dict]) -> str:
    return "".join(json.dumps(make_json_safe(record)) + "\n" for record in records)


def render_csv(header: list[str], rows: list[list]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(value) for value in row])
    return buffer.getvalue()


def _cell(value) -> str:
    safe = make_json_safe(value)
    if isinstance(safe, (dict, list)):
        return json.dumps(safe)
    return "" if safe is None else str(safe)


def emit(text: str, output: str | None) -> None:
    """Write to ``output`` or, when it is None, to stdout."""
    if output is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = Path(output)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as f:
        f.write(text)


# ---------------------------------------------------------------------------
# table layouts
# ---------------------------------------------------------------------------

def tree_records(nodes: list[tuple[Fraction, MarkovTriple]], s: SurfaceParam) -> list[dict]:
    """One JSON-lines record per tree node."""
    a = s.a if s.mode.value == "a-family" else None
    return [
        {"fraction": str(x), "triple": node.to_json(), "a": a, "surface": s.label}
        for x, node in nodes
    ]


def tree_table(nodes: list[tuple[Fraction, MarkovTriple]]) -> tuple[list[str], list[list]]:
    header = ["fraction", "X", "Y", "Z"]
    return header, [[x, *node.entries()] for x, node in nodes]


def ball_table(points) -> tuple[list[str], list[list]]:
    header = ["p", "q", "x", "y", "x_err", "y_err"]
    rows = []
    for h, (x, y) in points:
        xj, yj = x.to_json(), y.to_json()
        rows.append([h.h1, h.h2, xj["value"], yj["value"], xj["err"], yj["err"]])
    return header, rows


def slope_table(sequence: SlopeSequence) -> tuple[list[str], list[list]]:
    header = ["depth", "approach_p", "approach_q", "slope", "err"]
    rows = []
    for point in sequence.quotients:
        payload = point.slope.to_json()
        rows.append([point.depth, point.approach.p, point.approach.q, payload["value"], payload["err"]])
    return header, rows


def bracket_table(sequence: SlopeSequence) -> tuple[list[str], list[list]]:
    header = ["depth", "lower", "upper", "width", "width_err"]
    rows = []
    for bracket in sequence.brackets:
        width = bracket.width.to_json()
        rows.append([
            bracket.depth,
            bound_str(bracket.lower.lower, "down"),
            bound_str(bracket.upper.upper, "up"),
            width["value"],
            width["err"],
        ])
    return header, rows
