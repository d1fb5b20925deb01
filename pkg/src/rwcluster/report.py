"""Machine-readable run reports: key-value document plus flat CSV tables."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

REPORT_FILE = "report.txt"
TRACE_FILE = "trace.csv"
ASSIGNMENTS_FILE = "assignments.csv"
SWEEP_FILE = "sweep.csv"


@dataclass
class RunReport:
    config: dict
    trace: list[float]
    assignments: list[int]
    labels: list[str] | None
    raw_clusters: int
    merged_clusters: int
    accuracy: float | None
    duration_seconds: float

    def scalar_items(self) -> dict:
        items = dict(self.config)
        items.update(raw_clusters=self.raw_clusters,
                     merged_clusters=self.merged_clusters,
                     accuracy=self.accuracy,
                     duration_seconds=self.duration_seconds,
                     iterations=len(self.trace))
        return items


def write_run_report(report: RunReport, out_dir) -> None:
    """Write report.txt (key: json-value lines), trace.csv and assignments.csv."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    lines = [f"{key}: {json.dumps(value)}" for key, value in report.scalar_items().items()]
    (out_dir / REPORT_FILE).write_text("\n".join(lines) + "\n")
    with (out_dir / TRACE_FILE).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "sum_omega"])
        for it, value in enumerate(report.trace):
            writer.writerow([it, repr(float(value))])
    with (out_dir / ASSIGNMENTS_FILE).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "cluster", "label"])
        labels = report.labels if report.labels is not None else [""] * len(report.assignments)
        for i, (cluster, label) in enumerate(zip(report.assignments, labels)):
            writer.writerow([i, int(cluster), label])


def read_run_report(out_dir) -> RunReport:
    """Parse a directory written by write_run_report back into a RunReport."""
    out_dir = Path(out_dir)
    scalars = {}
    for line in (out_dir / REPORT_FILE).read_text().splitlines():
        key, _, value = line.partition(": ")
        scalars[key] = json.loads(value)
    trace = []
    with (out_dir / TRACE_FILE).open() as fh:
        for row in list(csv.reader(fh))[1:]:
            trace.append(float(row[1]))
    assignments, labels = [], []
    with (out_dir / ASSIGNMENTS_FILE).open() as fh:
        for row in list(csv.reader(fh))[1:]:
            assignments.append(int(row[1]))
            labels.append(row[2])
    reserved = {"raw_clusters", "merged_clusters", "accuracy", "duration_seconds", "iterations"}
    config = {k: v for k, v in scalars.items() if k not in reserved}
    return RunReport(config=config, trace=trace, assignments=assignments,
                     labels=labels if any(labels) else None,
                     raw_clusters=scalars["raw_clusters"],
                     merged_clusters=scalars["merged_clusters"],
                     accuracy=scalars["accuracy"],
                     duration_seconds=scalars["duration_seconds"])


def write_sweep_report(entries, out_dir) -> None:
    """One summary row per swept b value (sweep.csv)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with (out_dir / SWEEP_FILE).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["b", "interaction_range", "raw_clusters", "merged_clusters",
                         "accuracy_mean", "accuracy_var", "accuracy_max"])
        for entry in entries:
            writer.writerow([
                entry.b,
                repr(float(entry.interaction_range)),
                entry.raw_cluster_count,
                entry.merged_cluster_count,
                "" if entry.accuracy_mean is None else repr(entry.accuracy_mean),
                "" if entry.accuracy_var is None else repr(entry.accuracy_var),
                "" if entry.accuracy_max is None else repr(entry.accuracy_max),
            ])
