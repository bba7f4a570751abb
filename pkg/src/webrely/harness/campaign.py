"""Evaluation campaign: repeated generate/run/analyze rounds."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import TargetDown
from ..stats import DefectSampleSet, DiscardRecord
from .analyzer import ErrorLog, analyze_logs
from .cases import TestProfile, default_profiles, generate_test_cases
from .model import SiteModel
from .runner import HarnessConfig, run_evaluation

__all__ = ["CampaignConfig", "run_campaign"]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CampaignConfig:
    evaluations: int = 500
    cases_per_round: int = 1000
    walk_length: int = 6
    seed: int = 0
    harness: HarnessConfig = HarnessConfig()
    profiles: dict[str, TestProfile] = field(default_factory=default_profiles)

    def __post_init__(self):
        if self.evaluations < 0 or self.cases_per_round < 1 or self.walk_length < 1:
            raise ValueError("campaign sizes must be positive")


def run_campaign(
    target: str,
    model: SiteModel,
    cfg: CampaignConfig,
    log_root: str | Path,
    round_callback=None,
    source_label: str = "real",
) -> DefectSampleSet:
    """Run cfg.evaluations rounds sequentially; one defect density each.

    Rounds use seeds derived from (cfg.seed, round index) so a campaign is
    reproducible end to end.  A round whose target probe fails is recorded
    as a discarded value, never silently dropped.  round_callback(index),
    when given, runs before each round (progress reporting, fault
    injection in tests).
    """
    log_root = Path(log_root)
    values: list[float] = []
    discarded: list[DiscardRecord] = []
    for index in range(cfg.evaluations):
        if round_callback is not None:
            round_callback(index)
        round_seed = cfg.seed * 1_000_003 + index
        cases = generate_test_cases(
            model, cfg.profiles, cfg.cases_per_round, round_seed, cfg.walk_length
        )
        round_dir = log_root / f"round-{index:04d}"
        try:
            paths = run_evaluation(
                target, cases, cfg.profiles, cfg.harness, round_dir, round_seed
            )
        except TargetDown as exc:
            log.warning("round %d aborted: %s", index, exc)
            discarded.append(DiscardRecord(math.nan, f"round {index} aborted: {exc}"))
            continue
        error_log = analyze_logs(paths)
        _write_round_summary(error_log, round_dir)
        values.append(float(error_log.defect_density))
    return DefectSampleSet(tuple(values), tuple(discarded), source_label)


def _write_round_summary(error_log: ErrorLog, round_dir: Path) -> None:
    round_dir.mkdir(parents=True, exist_ok=True)
    (round_dir / "error_log.json").write_text(
        json.dumps(error_log.to_dict(), indent=2, sort_keys=True) + "\n"
    )
