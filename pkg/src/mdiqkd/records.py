"""Flat result records and their CSV / JSON serialization.

Non-finite numbers are written as the strings ``"inf"`` and ``"nan"`` in
both formats so the JSON stays standard.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Dict, Iterable, List, Optional

from .config import eta_to_distance_km
from .keyrate import ScanRecord

__all__ = [
    "COLUMNS",
    "to_row",
    "format_csv",
    "format_json",
    "parse_csv",
    "parse_json",
    "write_atomic",
]

COLUMNS = ("eta", "method", "N", "mu2", "mu1", "y11_z", "e11_x", "Q_z", "E_z", "R_raw", "R")
DISTANCE_COLUMN = "distance_km"


def to_row(rec: ScanRecord, distance: bool = False) -> Dict[str, object]:
    pt = rec.point
    row = {
        "eta": rec.eta,
        "method": rec.method,
        "N": rec.N,
        "mu2": pt.alice.mu2 if pt.alice else math.nan,
        "mu1": pt.alice.mu1 if pt.alice else math.nan,
        "y11_z": pt.y11_z,
        "e11_x": pt.e11_x,
        "Q_z": pt.Q_z,
        "E_z": pt.E_z,
        "R_raw": pt.R_raw,
        "R": pt.R,
    }
    row = {k: (float(v) if k != "method" else v) for k, v in row.items()}
    if distance:
        row[DISTANCE_COLUMN] = eta_to_distance_km(rec.eta)
    return row


def _num_text(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".9e")


def _json_value(x):
    if isinstance(x, float) and not math.isfinite(x):
        return _num_text(x)
    return x


def _columns(rows: List[Dict[str, object]]):
    if rows and DISTANCE_COLUMN in rows[0]:
        return COLUMNS + (DISTANCE_COLUMN,)
    return COLUMNS


def format_csv(rows: List[Dict[str, object]]) -> str:
    """CSV text, numbers in scientific notation with 10 significant digits."""
    cols = _columns(rows)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for row in rows:
        writer.writerow([row[c] if c == "method" else _num_text(row[c]) for c in cols])
    return buf.getvalue()


def format_json(rows: List[Dict[str, object]]) -> str:
    data = [{k: _json_value(v) for k, v in row.items()} for row in rows]
    return json.dumps({"columns": list(_columns(rows)), "records": data}, indent=2) + "\n"


def _from_text(key: str, value):
    if key == "method":
        return value
    return float(value)


def parse_csv(text: str) -> List[Dict[str, object]]:
    reader = csv.DictReader(io.StringIO(text))
    return [{k: _from_text(k, v) for k, v in row.items()} for row in reader]


def parse_json(text: str) -> List[Dict[str, object]]:
    return [{k: _from_text(k, v) for k, v in rec.items()} for rec in json.loads(text)["records"]]


def write_atomic(path, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent if str(path.parent) else ".",
                               prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
