"""Flat-file atlas: CSV and JSON rows with exact "p/q" rationals."""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Iterable, Optional

from gmpy2 import mpq

from .geometry import rat, rat_str
from .sweep import Probe

SCHEMA_VERSION = 1
HEADER_COMMENT = f"# obtuse-billiards atlas schema v{SCHEMA_VERSION}"


@dataclass(frozen=True)
class AtlasRow:
    shape: str
    x: int
    y: int
    a: str  # "p/q"
    theta_degrees: str  # display only, fixed 6 decimals
    period: Optional[int]
    T: Optional[str]  # "p/q" or empty
    N: Optional[int]
    branch: str
    status: str

    @classmethod
    def from_probe(cls, p: Probe) -> "AtlasRow":
        return cls(
            p.shape, p.x, p.y, rat_str(p.a), f"{p.theta:.6f}", p.period,
            None if p.T is None else rat_str(p.T), p.N, p.branch, p.status,
        )

    @property
    def offset(self) -> mpq:
        return rat(self.a)


FIELDS = [f.name for f in fields(AtlasRow)]
_INTS = {"x", "y", "period", "N"}


def _coerce(raw: dict) -> AtlasRow:
    vals = {}
    for k in FIELDS:
        v = raw.get(k)
        if v in ("", None):
            vals[k] = None
        elif k in _INTS:
            vals[k] = int(v)
        else:
            vals[k] = str(v)
    return AtlasRow(**vals)


def dumps_csv(rows: Iterable[AtlasRow]) -> str:
    buf = io.StringIO()
    buf.write(HEADER_COMMENT + "\n")
    w = csv.DictWriter(buf, fieldnames=FIELDS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: ("" if v is None else v) for k, v in asdict(r).items()})
    return buf.getvalue()


def dumps_json(rows: Iterable[AtlasRow]) -> str:
    return json.dumps([asdict(r) for r in rows], indent=1) + "\n"


def loads_csv(text: str) -> list:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# obtuse-billiards atlas schema v"):
        raise ValueError("missing atlas schema header")
    version = int(lines[0].rsplit("v", 1)[1])
    if version != SCHEMA_VERSION:
        raise ValueError(f"unsupported atlas schema v{version}")
    return [_coerce(r) for r in csv.DictReader(lines[1:])]


def loads_json(text: str) -> list:
    return [_coerce(r) for r in json.loads(text)]


def write(rows: list, path, fmt: Optional[str] = None) -> Path:
    """Write atomically: a failed write leaves no partial file behind."""
    path = Path(path)
    fmt = fmt or ("json" if path.suffix == ".json" else "csv")
    text = dumps_json(rows) if fmt == "json" else dumps_csv(rows)
    tmp = path.with_name(path.name + ".partial")
    try:
        tmp.write_text(text)
        os.replace(tmp, path)
    except BaseException:
        tmp.unlink(missing_ok=True)
        raise
    return path


def read(path) -> list:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json" or text.lstrip().startswith("["):
        return loads_json(text)
    return loads_csv(text)


def records_from_rows(rows: Iterable[AtlasRow]) -> list:
    """Hexagon atlas rows regrouped as hexlab records."""
    from collections import Counter

    from .hexlab import BranchRecord

    counts = Counter()
    for r in rows:
        if r.shape == "hexagon" and r.status == "periodic":
            counts[(r.x, r.y, r.period)] += 1
    return [BranchRecord.of(x, y, p, n) for (x, y, p), n in sorted(counts.items())]
