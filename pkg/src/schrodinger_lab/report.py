"""Experiment reports and their deterministic serialization."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

__all__ = ["Metric", "ExperimentReport", "emit_report", "atomic_write", "format_value"]


@dataclass(frozen=True)
class Metric:
    """A scalar result with the interval it must fall in (bounds may be None)."""

    name: str
    value: float
    lower: float | None = None
    upper: float | None = None

    @property
    def passed(self) -> bool:
        v = self.value
        if isinstance(v, float) and math.isnan(v):
            return False
        if self.lower is not None and v < self.lower:
            return False
        if self.upper is not None and v > self.upper:
            return False
        return True

    def as_dict(self) -> dict:
        return {"value": self.value, "lower": self.lower, "upper": self.upper, "passed": self.passed}


@dataclass
class ExperimentReport:
    kind: str
    config: dict
    columns: tuple
    rows: list = field(default_factory=list)
    metrics: list = field(default_factory=list)
    info: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(m.passed for m in self.metrics)

    def metric(self, name: str) -> Metric:
        for m in self.metrics:
            if m.name == name:
                return m
        raise KeyError(name)

    def summary(self) -> dict:
        """Everything except timings, which would break byte-identical re-runs."""
        return {
            "kind": self.kind,
            "config": self.config,
            "metrics": {m.name: m.as_dict() for m in self.metrics},
            "info": self.info,
            "passed": self.passed,
        }


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if v is None:
        return ""
    return str(v)


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "item"):
        return _jsonable(v.item())
    return v


def atomic_write(path, text: str) -> None:
    """Write to a sibling temporary file and rename it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def table_csv(report: ExperimentReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(report.columns)
    for row in report.rows:
        w.writerow([format_value(row.get(c)) for c in report.columns])
    return buf.getvalue()


def summary_json(report: ExperimentReport) -> str:
    return json.dumps(_jsonable(report.summary()), indent=2, sort_keys=True) + "\n"


def summary_text(report: ExperimentReport) -> str:
    lines = [f"[{report.kind}]"]
    for k in sorted(report.config):
        lines.append(f"config.{k} = {format_value(report.config[k])}")
    for m in report.metrics:
        bounds = f"[{format_value(m.lower)}, {format_value(m.upper)}]"
        lines.append(f"metric.{m.name} = {format_value(m.value)} {bounds} {'PASS' if m.passed else 'FAIL'}")
    for k in sorted(report.info):
        lines.append(f"info.{k} = {format_value(report.info[k])}")
    lines.append(f"passed = {format_value(report.passed)}")
    lines.append("")
    lines.append("\t".join(report.columns))
    for row in report.rows:
        lines.append("\t".join(format_value(row.get(c)) for c in report.columns))
    return "\n".join(lines) + "\n"


def emit_report(report: ExperimentReport, out_dir, fmt: str = "csv") -> list:
    """Write ``<kind>.csv`` plus ``<kind>.json`` (csv) or ``<kind>.txt`` (text); return the paths."""
    out = Path(out_dir)
    if fmt == "csv":
        files = [(out / f"{report.kind}.csv", table_csv(report)), (out / f"{report.kind}.json", summary_json(report))]
    elif fmt == "text":
        files = [(out / f"{report.kind}.txt", summary_text(report))]
    else:
        raise ValueError(f"unknown format {fmt!r}")
    for path, text in files:
        atomic_write(path, text)
    return [p for p, _ in files]
