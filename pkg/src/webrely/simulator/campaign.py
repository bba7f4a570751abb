"""Campaign driver: many independent runs, one defect density each."""

from __future__ import annotations

import csv
from pathlib import Path

from ..stats import DefectSampleSet
from .config import SimConfig
from .engine import RunResult, run_single

__all__ = ["run_campaign", "run_campaign_detailed", "write_trace_csv"]


def run_campaign_detailed(cfg: SimConfig) -> list[RunResult]:
    """All runs in index order.  Runs share nothing, so this could be
    farmed out to workers; results are keyed by run index either way."""
    return [run_single(cfg, i) for i in range(cfg.runs)]


def run_campaign(cfg: SimConfig, source_label: str = "ideal") -> DefectSampleSet:
    results = run_campaign_detailed(cfg)
    return DefectSampleSet(
        tuple(float(r.defect_density) for r in results), (), source_label
    )


def write_trace_csv(cfg: SimConfig, run_index: int, path: str | Path) -> RunResult:
    """Re-run one run with a per-event trace written as clock,event_type,queue_size."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["clock", "event_type", "queue_size"])
        result = run_single(
            cfg, run_index, trace=lambda t, kind, q: writer.writerow([f"{t:.6f}", kind, q])
        )
    return result
