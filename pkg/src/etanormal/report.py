"""Residual records and verdict reports."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

PASS, FAIL, NA = "pass", "fail", "n/a"


@dataclass
class Check:
    """One identity or condition evaluated over the sample set."""

    id: str
    anchor: str
    max_residual: float | None
    tol: float | None
    verdict: str
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.verdict != FAIL


def max_abs(*arrays) -> float:
    """Largest absolute entry over all arrays (0 for empty input)."""
    out = 0.0
    for a in arrays:
        a = np.asarray(getattr(a, "val", a), dtype=float)
        if a.size:
            m = float(np.max(np.abs(a)))
            if math.isnan(m):
                return math.inf
            out = max(out, m)
    return out


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)
    labels: dict = field(default_factory=dict)

    def add(self, id: str, anchor: str, residual, tol: float, note: str = "") -> Check:
        r = float(residual)
        c = Check(id, anchor, r, tol, PASS if r < tol else FAIL, note)
        self.checks.append(c)
        return c

    def add_flag(self, id: str, anchor: str, ok: bool, note: str = "") -> Check:
        """Record a boolean condition such as agreement of several verdicts."""
        c = Check(id, anchor, None, None, PASS if ok else FAIL, note)
        self.checks.append(c)
        return c

    def add_na(self, id: str, anchor: str, note: str) -> Check:
        c = Check(id, anchor, None, None, NA, note)
        self.checks.append(c)
        return c

    def extend(self, other: "Report") -> "Report":
        self.checks.extend(other.checks)
        for k, v in other.labels.items():
            self.labels.setdefault(k, v)
        return self

    def __getitem__(self, id: str) -> Check:
        for c in self.checks:
            if c.id == id:
                return c
        raise KeyError(id)

    def __contains__(self, id: str) -> bool:
        return any(c.id == id for c in self.checks)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if c.verdict == FAIL]

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "passed": self.passed,
            "labels": _jsonable(self.labels),
            "checks": [_jsonable(asdict(c)) for c in self.checks],
        }

    def to_json(self, **extra) -> str:
        doc = self.to_dict()
        doc.update(_jsonable(extra))
        return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False)

    def summary(self) -> str:
        lines = [self.title]
        for c in self.checks:
            res = "-" if c.max_residual is None else f"{c.max_residual:.3e}"
            tol = "" if c.tol is None else f" (tol {c.tol:.0e})"
            note = f"  [{c.note}]" if c.note else ""
            lines.append(f"  {c.verdict:4s} {c.id:34s} {res}{tol}{note}")
        for k, v in self.labels.items():
            lines.append(f"  {k}: {v}")
        return "\n".join(lines)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [_jsonable(v) for v in items]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        if math.isinf(f) or math.isnan(f):
            return str(f)
        return float(f"{f:.12g}")
    return obj
