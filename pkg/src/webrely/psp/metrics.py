"""The five personal-process quality measures and their trend series.

Not-applicable results are returned as None, never as zero: a yield of 0%
(nothing caught in review) and an undefined yield (nothing to catch) mean
different things.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from ..errors import ZeroFailureTime, ZeroLoc, ZeroTime
from .records import INJECTION_PHASES, PHASES, REMOVAL_PHASES, PspProgramRecord

__all__ = [
    "PspTrendReport",
    "appraisal_failure_ratio",
    "defects_per_kloc",
    "elimination_rate",
    "introduction_rate",
    "trend_report",
    "trend_series_csv",
    "yield_percent",
]

# removal in or before code_review counts toward process yield
_PRE_COMPILE = PHASES[: PHASES.index("code_review") + 1]


def yield_percent(rec: PspProgramRecord) -> float | None:
    """Percentage of defects removed before compile among those injected
    before compile; None when the record has no defects to judge by."""
    if not rec.defects:
        return None
    injected = rec.injected_in(_PRE_COMPILE)
    if injected == 0:
        return None
    removed = rec.removed_in(_PRE_COMPILE)
    return 100.0 * removed / injected


def defects_per_kloc(rec: PspProgramRecord) -> float:
    if rec.loc_new_changed <= 0:
        raise ZeroLoc(f"program {rec.program_number} has no new/changed LOC")
    return 1000.0 * len(rec.defects) / rec.loc_new_changed


def elimination_rate(rec: PspProgramRecord) -> float:
    """Defects removed in review/compile/test per hour spent there."""
    removed = rec.removed_in(REMOVAL_PHASES)
    if removed == 0:
        return 0.0
    minutes = rec.time_in(REMOVAL_PHASES)
    if minutes <= 0:
        raise ZeroTime(
            f"program {rec.program_number}: defects removed but no time in removal phases"
        )
    return removed / (minutes / 60.0)


def introduction_rate(rec: PspProgramRecord) -> float:
    """Defects injected in design/code per hour spent there."""
    injected = rec.injected_in(INJECTION_PHASES)
    if injected == 0:
        return 0.0
    minutes = rec.time_in(INJECTION_PHASES)
    if minutes <= 0:
        raise ZeroTime(
            f"program {rec.program_number}: defects injected but no time in design/code"
        )
    return injected / (minutes / 60.0)


def appraisal_failure_ratio(rec: PspProgramRecord) -> float:
    """Review minutes over compile-plus-test minutes."""
    failure = rec.time_in(("compile", "test"))
    if failure <= 0:
        raise ZeroFailureTime(f"program {rec.program_number} has no compile/test time")
    appraisal = rec.time_in(("design_review", "code_review"))
    return appraisal / failure


_METRICS = {
    "yield_percent": yield_percent,
    "defects_per_kloc": defects_per_kloc,
    "elimination_rate": elimination_rate,
    "introduction_rate": introduction_rate,
    "appraisal_failure_ratio": appraisal_failure_ratio,
}


@dataclass(frozen=True)
class PspTrendReport:
    program_numbers: tuple[int, ...]
    series: dict[str, tuple[float | None, ...]]
    slopes: dict[str, float | None]

    def to_dict(self) -> dict:
        return {
            "program_numbers": list(self.program_numbers),
            "series": {k: list(v) for k, v in sorted(self.series.items())},
            "slopes": dict(sorted(self.slopes.items())),
        }


def _least_squares_slope(xs: list[float], ys: list[float]) -> float | None:
    if len(xs) < 2:
        return None
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    if sxx == 0.0:
        return None
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx


def trend_report(records) -> PspTrendReport:
    """Per-program series for all five metrics plus a least-squares slope
    per metric.  Per-record errors become None entries rather than killing
    the whole report."""
    records = list(records)
    if not records:
        raise ValueError("need at least one program record")
    numbers = [r.program_number for r in records]
    if any(b <= a for a, b in zip(numbers, numbers[1:])):
        raise ValueError("program numbers must be strictly increasing")

    series: dict[str, tuple[float | None, ...]] = {}
    slopes: dict[str, float | None] = {}
    for name, metric in _METRICS.items():
        column: list[float | None] = []
        for rec in records:
            try:
                column.append(metric(rec))
            except (ZeroLoc, ZeroTime, ZeroFailureTime):
                column.append(None)
        series[name] = tuple(column)
        points = [(n, v) for n, v in zip(numbers, column) if v is not None]
        slopes[name] = _least_squares_slope([p[0] for p in points], [p[1] for p in points])
    return PspTrendReport(tuple(numbers), series, slopes)


def trend_series_csv(report: PspTrendReport, metric: str) -> str:
    """program_number,value rows for one metric; None becomes an empty cell."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["program_number", metric])
    for number, value in zip(report.program_numbers, report.series[metric]):
        writer.writerow([number, "" if value is None else f"{value:.6g}"])
    return buf.getvalue()
