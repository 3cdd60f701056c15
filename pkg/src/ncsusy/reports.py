"""Machine- and human-readable reports."""

from __future__ import annotations

import csv
import io
import json
import math
import platform
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import scipy

from . import __version__

SCHEMA_VERSION = "1.0"


def schema() -> dict:
    return json.loads(resources.files("ncsusy").joinpath("schema/report.schema.json").read_text())


def _clean(v: Any):
    if isinstance(v, (np.floating, np.integer)):
        v = v.item()
    if isinstance(v, complex):
        return v.real if abs(v.imag) <= 1e-15 * max(1.0, abs(v.real)) else str(v)
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if isinstance(v, np.ndarray):
        return [_clean(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    return v


@dataclass
class Check:
    id: str
    anchor: str
    value: Any
    tolerance: Optional[float]
    passed: bool
    expected: Any = None
    note: str = ""

    def to_dict(self) -> dict:
        d = {"id": self.id, "anchor": self.anchor, "value": _clean(self.value),
             "tolerance": self.tolerance, "pass": bool(self.passed)}
        if self.expected is not None:
            d["expected"] = _clean(self.expected)
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class Report:
    suite: str
    parameters: Dict[str, Any] = field(default_factory=dict)
    checks: List[Check] = field(default_factory=list)
    tables: Dict[str, List[dict]] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    def add(self, id: str, anchor: str, value, tolerance, passed: bool, **kw) -> Check:
        if not anchor:
            raise ValueError("every check needs an anchor")
        c = Check(id, anchor, value, tolerance, bool(passed), **kw)
        self.checks.append(c)
        return c

    def residual(self, id: str, anchor: str, residual: float, tolerance: float, **kw) -> Check:
        return self.add(id, anchor, residual, tolerance, residual < tolerance, **kw)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "suite": self.suite,
            "passed": self.passed,
            "parameters": _clean(self.parameters),
            "checks": [c.to_dict() for c in self.checks],
            "tables": {k: [_clean(r) for r in v] for k, v in self.tables.items()},
            "notes": list(self.notes),
            "environment": {
                "package_version": __version__,
                "python": platform.python_version(),
                "numpy": np.__version__,
                "scipy": scipy.__version__,
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    def to_text(self) -> str:
        lines = [f"suite: {self.suite}"]
        if self.parameters:
            lines.append("parameters: " + ", ".join(f"{k}={v}" for k, v in self.parameters.items()))
        width = max((len(c.id) for c in self.checks), default=10)
        for c in self.checks:
            val = c.value
            if isinstance(val, float):
                val = f"{val:.3e}"
            tol = "" if c.tolerance is None else f"tol={c.tolerance:.1e}"
            lines.append(f"  [{'PASS' if c.passed else 'FAIL'}] {c.id:<{width}}  {val}  {tol}  ({c.anchor})"
                         + (f"  {c.note}" if c.note else ""))
        for name, rows in self.tables.items():
            lines.append(f"table {name}:")
            lines.extend("  " + line for line in table_text(rows).splitlines())
        lines.extend(f"note: {n}" for n in self.notes)
        lines.append(f"result: {'PASS' if self.passed else 'FAIL'} "
                     f"({sum(c.passed for c in self.checks)}/{len(self.checks)} checks)")
        return "\n".join(lines)

    def write(self, out_dir: Path, stem: str = "report") -> List[Path]:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        paths = [out_dir / f"{stem}.json", out_dir / f"{stem}.txt"]
        paths[0].write_text(self.to_json() + "\n")
        paths[1].write_text(self.to_text() + "\n")
        for name, rows in self.tables.items():
            p = out_dir / f"{stem}_{name}.csv"
            p.write_text(rows_to_csv(rows))
            paths.append(p)
        return paths


def rows_to_csv(rows: List[dict], columns=None) -> str:
    if not rows:
        return ""
    columns = list(columns or rows[0].keys())
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _clean(r.get(k)) for k in columns})
    return buf.getvalue()


def table_text(rows: List[dict]) -> str:
    if not rows:
        return "(empty)"
    cols = list(rows[0].keys())

    def fmt(v):
        v = _clean(v)
        if isinstance(v, float):
            return f"{v:.10g}"
        if isinstance(v, list):
            return "[" + ", ".join(fmt(x) for x in v) + "]"
        return str(v)

    cells = [[fmt(r.get(c)) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    out = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    out += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(out)
