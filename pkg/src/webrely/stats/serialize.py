"""File formats for sample sets and reports.

Samples travel as one-value-per-line text (blank lines and # comments
ignored) or as a named CSV column.  Reports serialize to JSON with the
field names documented in the README; histograms export as
lower_edge,count CSV for external plotting.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from .compare import ComparisonReport
from .fitting import FitReport
from .gof import GofResult
from .samples import DefectSampleSet, DiscardRecord, Histogram
from .weibull import WeibullModel

__all__ = [
    "load_samples_text",
    "save_samples_text",
    "load_samples_csv",
    "sample_set_to_dict",
    "sample_set_from_dict",
    "fit_report_to_dict",
    "fit_report_from_dict",
    "comparison_to_dict",
    "histogram_to_csv",
]


def load_samples_text(path: str | Path, source_label: str = "") -> DefectSampleSet:
    values = []
    for raw_line in Path(path).read_text().splitlines():
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        values.append(float(line))
    return DefectSampleSet(tuple(values), (), source_label)


def save_samples_text(samples: DefectSampleSet, path: str | Path) -> None:
    Path(path).write_text("".join(f"{v:g}\n" for v in samples.values))


def load_samples_csv(path: str | Path, column: str, source_label: str = "") -> DefectSampleSet:
    values = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or column not in reader.fieldnames:
            raise ValueError(f"column {column!r} not found in {path}")
        for row in reader:
            cell = (row[column] or "").strip()
            if cell:
                values.append(float(cell))
    return DefectSampleSet(tuple(values), (), source_label)


def sample_set_to_dict(samples: DefectSampleSet) -> dict:
    return {
        "source_label": samples.source_label,
        "retained": list(samples.values),
        "discarded": [{"value": d.value, "reason": d.reason} for d in samples.discarded],
    }


def sample_set_from_dict(doc: dict) -> DefectSampleSet:
    return DefectSampleSet(
        tuple(float(v) for v in doc["retained"]),
        tuple(DiscardRecord(float(d["value"]), str(d["reason"])) for d in doc.get("discarded", [])),
        str(doc.get("source_label", "")),
    )


def _gof_to_dict(gof: GofResult) -> dict:
    return {
        "method": gof.method,
        "statistic": gof.statistic,
        "threshold": gof.threshold,
        "dof": gof.dof,
        "significance": gof.significance,
        "passed": gof.passed,
    }


def _gof_from_dict(doc: dict) -> GofResult:
    return GofResult(
        statistic=float(doc["statistic"]),
        threshold=float(doc["threshold"]),
        dof=int(doc["dof"]),
        passed=bool(doc["passed"]),
        method=str(doc.get("method", "chi-square")),
        significance=float(doc.get("significance", 0.05)),
    )


def fit_report_to_dict(report: FitReport) -> dict:
    return {
        "shape": report.model.shape,
        "scale": report.model.scale,
        "sample_count": report.sample_count,
        "iterations": report.iterations,
        "residual": report.residual,
        "method": report.method,
        "zeros_excluded": report.zeros_excluded,
        "source_label": report.source_label,
        "gof": _gof_to_dict(report.gof) if report.gof is not None else None,
    }


def fit_report_from_dict(doc: dict) -> FitReport:
    """Rebuild a report; tolerant of hand-written documents that only carry
    shape and scale."""
    gof = doc.get("gof")
    return FitReport(
        model=WeibullModel(shape=float(doc["shape"]), scale=float(doc["scale"])),
        sample_count=int(doc.get("sample_count", 0)),
        iterations=int(doc.get("iterations", 0)),
        residual=float(doc.get("residual", 0.0)),
        method=str(doc.get("method", "external")),
        zeros_excluded=int(doc.get("zeros_excluded", 0)),
        source_label=str(doc.get("source_label", "")),
        gof=_gof_from_dict(gof) if gof else None,
    )


def comparison_to_dict(report: ComparisonReport, label_a: str = "a", label_b: str = "b") -> dict:
    return {
        "label_a": label_a,
        "label_b": label_b,
        "shape_a": report.model_a.shape,
        "scale_a": report.model_a.scale,
        "shape_b": report.model_b.shape,
        "scale_b": report.model_b.scale,
        "mean_a": report.mean_a,
        "mean_b": report.mean_b,
        "mean_ratio": report.mean_ratio,
        "sup_cdf_distance": report.sup_cdf_distance,
        "verdict": report.verdict,
    }


def histogram_to_csv(hist: Histogram) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["lower_edge", "count"])
    for lower, count in hist.to_csv_rows():
        writer.writerow([f"{lower:g}", count])
    return buf.getvalue()


def dump_json(doc: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def read_json(path: str | Path) -> dict:
    return json.loads(Path(path).read_text())
