"""Project directory layout, artifact persistence and the command lock.

Layout under the project root:

    phases/<label>/     config.json, samples.txt, sample_set.json,
                        histogram.csv, fit.json, model.json (evaluate),
                        logs/ (evaluate; wall-clock data, not covered by
                        the byte-identical reproducibility contract)
    psp/<label>/        trend.json plus one CSV series per metric
    compare/<a>__vs__<b>/  report.json, curves.csv

Every artifact embeds the config and seed that produced it; rerunning the
same command over the same inputs rewrites identical bytes.
"""

from __future__ import annotations

import json
import os
from contextlib import contextmanager
from pathlib import Path

from .errors import LockHeld, MissingPhase
from .stats import (
    AnomalyPolicy,
    DefectSampleSet,
    FitReport,
    apply_policy,
    build_histogram,
    fit_weibull,
    goodness_of_fit,
)
from .stats.serialize import (
    fit_report_from_dict,
    fit_report_to_dict,
    histogram_to_csv,
    sample_set_to_dict,
    save_samples_text,
)

__all__ = ["EiProject", "PhaseResult"]

LOCK_NAME = ".webrely.lock"


class PhaseResult:
    def __init__(self, samples: DefectSampleSet, fit: FitReport | None, fit_error: str | None):
        self.samples = samples
        self.fit = fit
        self.fit_error = fit_error


class EiProject:
    def __init__(self, root: str | Path):
        self.root = Path(root)

    # --- locking -----------------------------------------------------------

    @contextmanager
    def lock(self):
        """One command at a time per project directory."""
        self.root.mkdir(parents=True, exist_ok=True)
        path = self.root / LOCK_NAME
        try:
            fd = os.open(path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise LockHeld(
                f"{path} exists; another command is running (delete it if that "
                "command crashed)"
            ) from None
        try:
            os.write(fd, f"pid {os.getpid()}\n".encode())
            os.close(fd)
            yield self
        finally:
            path.unlink(missing_ok=True)

    # --- paths ------------------------------------------------------------

    def phase_dir(self, label: str) -> Path:
        return self.root / "phases" / label

    def psp_dir(self, label: str) -> Path:
        return self.root / "psp" / label

    def compare_dir(self, label_a: str, label_b: str) -> Path:
        return self.root / "compare" / f"{label_a}__vs__{label_b}"

    # --- artifacts ----------------------------------------------------------

    @staticmethod
    def _write_json(path: Path, doc: dict) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")

    def persist_phase(
        self,
        label: str,
        raw_samples: DefectSampleSet,
        config_doc: dict,
        policy: AnomalyPolicy = AnomalyPolicy(),
        bin_width: float = 1.0,
        origin: float = 0.0,
        gof_method: str = "chi-square",
        significance: float = 0.05,
    ) -> PhaseResult:
        """Run the shared tail of every evaluation phase: discard anomalies,
        bin, fit, validate, persist.

        A failed fit (for example an all-zero sample) still persists the
        sample artifacts together with a fit_error.json describing why.
        """
        directory = self.phase_dir(label)
        directory.mkdir(parents=True, exist_ok=True)
        self._write_json(directory / "config.json", config_doc)

        cleaned = apply_policy(raw_samples, policy)
        save_samples_text(cleaned, directory / "samples.txt")
        self._write_json(directory / "sample_set.json", sample_set_to_dict(cleaned))

        fit = None
        fit_error = None
        hist = None
        try:
            hist = build_histogram(cleaned, bin_width, origin)
            (directory / "histogram.csv").write_text(histogram_to_csv(hist))
            fit = fit_weibull(cleaned)
            try:
                gof = goodness_of_fit(
                    hist, fit.model, gof_method, significance,
                    samples=cleaned, fitted_params=2,
                )
                fit = fit.with_gof(gof)
            except Exception as exc:  # gof failure must not void the fit
                fit_error = f"goodness-of-fit skipped: {type(exc).__name__}: {exc}"
            self._write_json(directory / "fit.json", fit_report_to_dict(fit))
            if fit_error:
                self._write_json(
                    directory / "fit_error.json",
                    {"stage": "goodness-of-fit", "error": fit_error},
                )
        except Exception as exc:
            fit_error = f"{type(exc).__name__}: {exc}"
            self._write_json(
                directory / "fit_error.json", {"stage": "fit", "error": fit_error}
            )
            raise
        return PhaseResult(cleaned, fit, fit_error)

    def load_fit(self, label: str) -> FitReport:
        path = self.phase_dir(label) / "fit.json"
        if not path.exists():
            raise MissingPhase(f"phase {label!r} has no fit report at {path}")
        return fit_report_from_dict(json.loads(path.read_text()))
