"""Personal-process quality metrics computed from recorded program data."""

from .metrics import (
    PspTrendReport,
    appraisal_failure_ratio,
    defects_per_kloc,
    elimination_rate,
    introduction_rate,
    trend_report,
    trend_series_csv,
    yield_percent,
)
from .records import (
    INJECTION_PHASES,
    PHASES,
    REMOVAL_PHASES,
    Defect,
    PspProgramRecord,
    load_records,
    load_records_csv,
    load_records_json,
)

__all__ = [
    "Defect",
    "INJECTION_PHASES",
    "PHASES",
    "PspProgramRecord",
    "PspTrendReport",
    "REMOVAL_PHASES",
    "appraisal_failure_ratio",
    "defects_per_kloc",
    "elimination_rate",
    "introduction_rate",
    "load_records",
    "load_records_csv",
    "load_records_json",
    "trend_report",
    "trend_series_csv",
    "yield_percent",
]
