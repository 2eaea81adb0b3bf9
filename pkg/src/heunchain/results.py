"""Result rows and their CSV / JSON serialisation.

Floats are written with ``repr``, the shortest decimal string that parses
back to the same double, in both formats. Not-applicable values are empty
CSV cells and JSON ``null``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field, fields
from typing import Iterable, Optional

__all__ = ["ResultRow", "CSV_COLUMNS", "rows_to_csv", "rows_to_json", "rows_from_json", "rows_from_csv"]

CSV_COLUMNS = ("ell", "K", "S1", "commutator_residual", "max_rayleigh_residual", "method", "wall_time_ms")


@dataclass
class ResultRow:
    ell: int
    K: int
    S1: float
    commutator_residual: Optional[float]
    max_rayleigh_residual: float
    method: str
    wall_time_ms: float
    entropy_unit: str = "nats"
    sites: Optional[int] = None
    uniform_chain: bool = False
    flags: list = field(default_factory=list)
    nu: Optional[list] = None
    epsilon: Optional[list] = None

    @classmethod
    def from_dict(cls, d: dict) -> "ResultRow":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown result fields: {sorted(unknown)}")
        return cls(**d)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def rows_to_csv(rows: Iterable[ResultRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([_fmt(getattr(r, c)) for c in CSV_COLUMNS])
    return buf.getvalue()


def rows_from_csv(text: str) -> list[dict]:
    """Parse the CSV columns back; numeric cells become int/float, empty cells None."""
    out = []
    reader = csv.DictReader(io.StringIO(text))
    for rec in reader:
        row = {}
        for k, v in rec.items():
            if v == "":
                row[k] = None
            elif k in ("ell", "K"):
                row[k] = int(v)
            elif k == "method":
                row[k] = v
            else:
                row[k] = float(v)
        out.append(row)
    return out


def rows_to_json(rows: Iterable[ResultRow]) -> str:
    return json.dumps([asdict(r) for r in rows], indent=1, allow_nan=False) + "\n"


def rows_from_json(text: str) -> list[ResultRow]:
    return [ResultRow.from_dict(d) for d in json.loads(text)]
