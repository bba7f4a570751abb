"""Activity-log analysis: defect density, MTTF, fault signatures."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

__all__ = ["ActivityRecord", "ErrorLog", "analyze_logs", "parse_log_file"]


@dataclass(frozen=True)
class ActivityRecord:
    timestamp_ms: int
    tester_id: int
    test_case_id: str
    step_index: int
    action: str
    outcome: str
    node: str


@dataclass
class ErrorLog:
    """Aggregate of one evaluation round.

    defect_density counts fault outcomes; mttf_ms is total active tester
    time divided by faults and None while no fault was seen (the
    undefined marker, never zero).  fault_signatures groups faults by
    (node, action, code).
    """

    defect_density: int = 0
    total_active_ms: int = 0
    duration_ms: int = 0
    mttf_ms: float | None = None
    fault_signatures: dict[tuple[str, str, str], int] = field(default_factory=dict)
    nav_errors: int = 0
    steps_ok: int = 0
    records: int = 0
    testers: int = 0
    skipped_lines: list[str] = field(default_factory=list)
    by_action: dict[str, int] = field(default_factory=dict)

    def summary_dict(self) -> dict:
        """Seed-deterministic content only: wall-clock fields stay out so a
        regenerated run produces a byte-identical summary."""
        return {
            "defect_density": self.defect_density,
            "fault_signatures": [
                {"node": n, "action": a, "code": c, "count": cnt}
                for (n, a, c), cnt in sorted(self.fault_signatures.items())
            ],
            "nav_errors": self.nav_errors,
            "steps_ok": self.steps_ok,
            "by_action": dict(sorted(self.by_action.items())),
            "testers": self.testers,
        }

    def to_dict(self) -> dict:
        doc = self.summary_dict()
        doc.update(
            {
                "total_active_ms": self.total_active_ms,
                "duration_ms": self.duration_ms,
                "mttf_ms": self.mttf_ms,
                "records": self.records,
                "skipped_lines": list(self.skipped_lines),
            }
        )
        return doc


def parse_log_file(path: str | Path) -> tuple[list[ActivityRecord], list[str]]:
    """Parse one tab-separated activity log; malformed lines are skipped
    and reported, never fatal."""
    records: list[ActivityRecord] = []
    skipped: list[str] = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        parts = line.split("\t")
        if len(parts) != 7:
            skipped.append(f"{path}:{lineno}: expected 7 fields, got {len(parts)}")
            continue
        try:
            records.append(
                ActivityRecord(
                    timestamp_ms=int(parts[0]),
                    tester_id=int(parts[1]),
                    test_case_id=parts[2],
                    step_index=int(parts[3]),
                    action=parts[4],
                    outcome=parts[5],
                    node=parts[6],
                )
            )
        except ValueError as exc:
            skipped.append(f"{path}:{lineno}: {exc}")
    return records, skipped


def analyze_logs(log_paths) -> ErrorLog:
    """Merge per-tester logs into one error log.

    Output is independent of file ordering: every aggregate is a sum or a
    sorted grouping.  Active time per tester spans its first to its last
    record, which the begin/end meta records pin to the tester lifetime.
    """
    out = ErrorLog()
    spans: dict[int, tuple[int, int]] = {}
    for path in sorted(str(p) for p in log_paths):
        records, skipped = parse_log_file(path)
        out.skipped_lines.extend(skipped)
        for rec in records:
            out.records += 1
            lo, hi = spans.get(rec.tester_id, (rec.timestamp_ms, rec.timestamp_ms))
            spans[rec.tester_id] = (min(lo, rec.timestamp_ms), max(hi, rec.timestamp_ms))
            if rec.step_index < 0:
                continue  # begin/login/end meta records carry no step outcome
            out.by_action[rec.action] = out.by_action.get(rec.action, 0) + 1
            if rec.outcome.startswith("fault:"):
                out.defect_density += 1
                key = (rec.node, rec.action, rec.outcome.split(":", 1)[1])
                out.fault_signatures[key] = out.fault_signatures.get(key, 0) + 1
            elif rec.outcome == "nav_error":
                out.nav_errors += 1
            else:
                out.steps_ok += 1
    out.testers = len(spans)
    out.total_active_ms = sum(hi - lo for lo, hi in spans.values())
    if spans:
        out.duration_ms = max(hi for _, hi in spans.values()) - min(
            lo for lo, _ in spans.values()
        )
    out.mttf_ms = out.total_active_ms / out.defect_density if out.defect_density else None
    return out
