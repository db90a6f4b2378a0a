"""Report rows and deterministic CSV serialization.

One fixed schema serves every experiment kind:

    kind, param_json, value, slope, predicted_slope, pass, seconds

``report.csv`` is the deterministic deliverable: identical config and seed
reproduce it byte for byte, so its seconds column is pinned to zero.  The
measured wall-clock timings go to ``timings.csv`` alongside, which makes no
determinism promise.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

CSV_COLUMNS = ["kind", "param_json", "value", "slope", "predicted_slope",
               "pass", "seconds"]

__all__ = ["ReportRow", "CSV_COLUMNS", "write_report_csv", "write_timings_csv",
           "format_number"]


@dataclass
class ReportRow:
    kind: str
    params: dict
    value: float | None = None
    slope: float | None = None
    predicted_slope: float | None = None
    passed: bool | None = None
    seconds: float = 0.0

    @property
    def param_json(self) -> str:
        return json.dumps(self.params, sort_keys=True, separators=(",", ":"))


def format_number(x: float | None) -> str:
    if x is None:
        return ""
    return format(float(x), ".12g")


def _format_pass(p: bool | None) -> str:
    if p is None:
        return ""
    return "true" if p else "false"


def _write(path: Path, rows: list[ReportRow], real_seconds: bool) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow([
                row.kind,
                row.param_json,
                format_number(row.value),
                format_number(row.slope),
                format_number(row.predicted_slope),
                _format_pass(row.passed),
                format_number(row.seconds if real_seconds else 0.0),
            ])


def write_report_csv(path, rows: list[ReportRow]) -> None:
    """Deterministic report: seconds column pinned to 0."""
    _write(Path(path), rows, real_seconds=False)


def write_timings_csv(path, rows: list[ReportRow]) -> None:
    """Same rows with measured wall-clock seconds; not byte-reproducible."""
    _write(Path(path), rows, real_seconds=True)
