"""Deterministic report writers.

CSV and TSV bodies are pure functions of the run's data (floats via
repr, rationals as p/q), so re-running a config byte-reproduces them;
wall-clock metadata goes only into JSON summaries.
"""

from __future__ import annotations

import csv
import json
import os
from fractions import Fraction
from typing import Any, Sequence

from .measure import rational_str
from .validators import Verdict


def fmt_cell(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return rational_str(v)
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, int):
        return str(v)
    if v is None:
        return ""
    return str(v)


def write_csv(path: str, header: Sequence[str], rows: Sequence[Sequence[Any]]):
    _write_delimited(path, header, rows,
                     lambda fh: csv.writer(fh, lineterminator="\n"))


def write_tsv(path: str, header: Sequence[str], rows: Sequence[Sequence[Any]]):
    _write_delimited(path, header, rows,
                     lambda fh: csv.writer(fh, delimiter="\t", lineterminator="\n"))


def _write_delimited(path, header, rows, make_writer):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = make_writer(fh)
        w.writerow(list(header))
        for row in rows:
            w.writerow([fmt_cell(v) for v in row])


def write_json(path: str, doc: dict):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")


def _json_default(v):
    if isinstance(v, Fraction):
        return rational_str(v)
    raise TypeError(f"not JSON-serializable: {type(v).__name__}")


def verdict_doc(check: str, params: dict, verdict: Verdict) -> dict:
    """The JSON shape every validator verdict is reported in."""
    return {
        "check": check,
        "params": params,
        "verdict": verdict.ok,
        "witness": verdict.witness,
        "horizon": verdict.horizon,
    }
