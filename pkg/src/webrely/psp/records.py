"""Per-program PSP records: phase times, sizes and tracked defects.

Input formats:
  CSV  one documented header; program rows carry LOC and phase minutes,
       defect rows join to their program via program_number.
  JSON list of program objects with nested defect lists.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

from ..errors import RecordParseError

__all__ = ["PHASES", "REMOVAL_PHASES", "INJECTION_PHASES", "Defect", "PspProgramRecord",
           "load_records", "load_records_csv", "load_records_json"]

# standard personal-process phase order; removal may never precede injection
PHASES = (
    "plan",
    "design",
    "design_review",
    "code",
    "code_review",
    "compile",
    "test",
    "postmortem",
)

REMOVAL_PHASES = ("design_review", "code_review", "compile", "test")
INJECTION_PHASES = ("design", "code")


@dataclass(frozen=True)
class Defect:
    injected_phase: str
    removed_phase: str
    fix_minutes: float = 0.0
    type: str = ""

    def __post_init__(self):
        if self.injected_phase not in PHASES:
            raise ValueError(f"unknown injection phase {self.injected_phase!r}")
        if self.removed_phase not in PHASES:
            raise ValueError(f"unknown removal phase {self.removed_phase!r}")
        if PHASES.index(self.removed_phase) < PHASES.index(self.injected_phase):
            raise ValueError(
                f"defect removed in {self.removed_phase} before injection in {self.injected_phase}"
            )
        if self.fix_minutes < 0:
            raise ValueError("fix_minutes must be >= 0")


@dataclass(frozen=True)
class PspProgramRecord:
    program_number: int
    loc_new_changed: int
    phase_times: dict[str, float]  # minutes per phase
    defects: tuple[Defect, ...] = ()

    def __post_init__(self):
        missing = set(PHASES) - set(self.phase_times)
        if missing:
            raise ValueError(f"phase_times missing {sorted(missing)}")
        if any(t < 0 for t in self.phase_times.values()):
            raise ValueError("phase times must be >= 0")

    def time_in(self, phases) -> float:
        """Total minutes across the given phases."""
        return sum(self.phase_times[p] for p in phases)

    def injected_in(self, phases) -> int:
        return sum(1 for d in self.defects if d.injected_phase in phases)

    def removed_in(self, phases) -> int:
        return sum(1 for d in self.defects if d.removed_phase in phases)


CSV_HEADER = [
    "row_type",
    "program_number",
    "loc_new_changed",
    *PHASES,
    "injected_phase",
    "removed_phase",
    "fix_minutes",
    "defect_type",
]


def load_records_csv(path: str | Path) -> list[PspProgramRecord]:
    programs: dict[int, dict] = {}
    defects: dict[int, list[Defect]] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER:
            raise RecordParseError(1, "header", f"expected columns {CSV_HEADER}")
        for row_number, row in enumerate(reader, start=2):
            kind = (row["row_type"] or "").strip()
            try:
                program = int(row["program_number"])
            except ValueError:
                raise RecordParseError(row_number, "program_number", "not an integer") from None
            if kind == "program":
                try:
                    times = {p: float(row[p]) for p in PHASES}
                except ValueError:
                    raise RecordParseError(row_number, "phase times", "not numeric") from None
                try:
                    loc = int(row["loc_new_changed"])
                except ValueError:
                    raise RecordParseError(row_number, "loc_new_changed", "not an integer") from None
                programs[program] = {"loc": loc, "times": times}
            elif kind == "defect":
                try:
                    fix = float(row["fix_minutes"] or 0)
                except ValueError:
                    raise RecordParseError(row_number, "fix_minutes", "not numeric") from None
                try:
                    defect = Defect(
                        injected_phase=(row["injected_phase"] or "").strip(),
                        removed_phase=(row["removed_phase"] or "").strip(),
                        fix_minutes=fix,
                        type=(row["defect_type"] or "").strip(),
                    )
                except ValueError as exc:
                    raise RecordParseError(row_number, "injected/removed phase", str(exc)) from None
                defects.setdefault(program, []).append(defect)
            else:
                raise RecordParseError(row_number, "row_type", f"unknown row type {kind!r}")
    orphans = set(defects) - set(programs)
    if orphans:
        raise RecordParseError(0, "program_number",
                               f"defect rows reference unknown programs {sorted(orphans)}")
    return [
        PspProgramRecord(
            program_number=number,
            loc_new_changed=info["loc"],
            phase_times=info["times"],
            defects=tuple(defects.get(number, [])),
        )
        for number, info in sorted(programs.items())
    ]


def load_records_json(path: str | Path) -> list[PspProgramRecord]:
    doc = json.loads(Path(path).read_text())
    records = []
    for i, entry in enumerate(doc):
        try:
            records.append(
                PspProgramRecord(
                    program_number=int(entry["program_number"]),
                    loc_new_changed=int(entry["loc_new_changed"]),
                    phase_times={p: float(entry["phase_times"][p]) for p in PHASES},
                    defects=tuple(
                        Defect(
                            injected_phase=d["injected_phase"],
                            removed_phase=d["removed_phase"],
                            fix_minutes=float(d.get("fix_minutes", 0)),
                            type=d.get("type", ""),
                        )
                        for d in entry.get("defects", [])
                    ),
                )
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise RecordParseError(i, "record", str(exc)) from None
    return sorted(records, key=lambda r: r.program_number)


def load_records(path: str | Path) -> list[PspProgramRecord]:
    path = Path(path)
    if path.suffix.lower() == ".json":
        return load_records_json(path)
    return load_records_csv(path)
