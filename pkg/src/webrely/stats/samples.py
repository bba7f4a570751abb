"""Defect-density sample sets: anomaly discarding and histogram binning."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import AllDiscarded, EmptySample

__all__ = [
    "AnomalyPolicy",
    "DefectSampleSet",
    "DiscardRecord",
    "Histogram",
    "discard_anomalies",
    "apply_policy",
    "build_histogram",
]


@dataclass(frozen=True)
class DiscardRecord:
    value: float
    reason: str


@dataclass(frozen=True)
class DefectSampleSet:
    """Retained per-run defect densities plus the discard bookkeeping.

    retained values union discarded values always equals the raw input the
    set was built from; nothing is dropped silently.
    """

    values: tuple[float, ...]
    discarded: tuple[DiscardRecord, ...] = ()
    source_label: str = ""

    def __post_init__(self):
        for v in self.values:
            if not (v >= 0.0):
                raise ValueError(f"retained defect density must be >= 0, got {v}")

    @property
    def n(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class AnomalyPolicy:
    """Outlier-discard rule applied to raw run values.

    method is one of:
      "tukey"  - discard values outside [Q1 - k*IQR, Q3 + k*IQR]
      "zscore" - discard values with |x - mean| > k * std
      "none"   - keep everything

    The default is Tukey fences with k = 3, a deliberately permissive
    setting for right-skewed defect-density data.
    """

    method: str = "tukey"
    k: float = 3.0

    def __post_init__(self):
        if self.method not in ("tukey", "zscore", "none"):
            raise ValueError(f"unknown anomaly policy method {self.method!r}")
        if self.k <= 0:
            raise ValueError("policy parameter k must be positive")


def _quantile(sorted_values: list[float], q: float) -> float:
    # linear interpolation between order statistics (the numpy/R default)
    n = len(sorted_values)
    if n == 1:
        return sorted_values[0]
    h = (n - 1) * q
    lo = int(math.floor(h))
    if lo >= n - 1:
        return sorted_values[-1]
    return sorted_values[lo] + (h - lo) * (sorted_values[lo + 1] - sorted_values[lo])


def _one_pass(values: list[float], policy: AnomalyPolicy) -> tuple[list[float], list[DiscardRecord]]:
    if policy.method == "none":
        return list(values), []
    kept: list[float] = []
    dropped: list[DiscardRecord] = []
    if policy.method == "tukey":
        s = sorted(values)
        q1 = _quantile(s, 0.25)
        q3 = _quantile(s, 0.75)
        spread = q3 - q1
        lo = q1 - policy.k * spread
        hi = q3 + policy.k * spread
        for v in values:
            if v < lo or v > hi:
                dropped.append(DiscardRecord(v, f"tukey(k={policy.k:g}): outside [{lo:g}, {hi:g}]"))
            else:
                kept.append(v)
        return kept, dropped
    # zscore
    n = len(values)
    mean = sum(values) / n
    var = sum((v - mean) ** 2 for v in values) / n
    std = math.sqrt(var)
    if std == 0.0:
        return list(values), []
    for v in values:
        z = abs(v - mean) / std
        if z > policy.k:
            dropped.append(DiscardRecord(v, f"zscore(k={policy.k:g}): |z| = {z:.3f}"))
        else:
            kept.append(v)
    return kept, dropped


def discard_anomalies(
    raw, policy: AnomalyPolicy = AnomalyPolicy(), source_label: str = ""
) -> DefectSampleSet:
    """Split raw run values into retained and discarded per the policy.

    The policy is re-applied until it stops discarding (a fixed point), so
    running discard_anomalies on its own retained output never discards
    anything further.  Deterministic: input order is preserved among the
    retained values and discard reasons record the violated fence.

    Raises EmptySample on empty input and AllDiscarded if no value survives.
    """
    values = [float(v) for v in raw]
    if not values:
        raise EmptySample("cannot apply an anomaly policy to an empty sample")
    for v in values:
        if not math.isfinite(v) or v < 0.0:
            raise ValueError(f"raw defect densities must be finite and >= 0, got {v}")

    kept = values
    dropped: list[DiscardRecord] = []
    while kept:
        kept_next, dropped_now = _one_pass(kept, policy)
        dropped.extend(dropped_now)
        if not dropped_now:
            break
        kept = kept_next
    else:
        raise AllDiscarded(f"policy {policy.method}(k={policy.k:g}) discarded all {len(values)} values")

    return DefectSampleSet(tuple(kept), tuple(dropped), source_label)


def apply_policy(samples: DefectSampleSet, policy: AnomalyPolicy) -> DefectSampleSet:
    """discard_anomalies over an existing set, merging prior discard records."""
    cleaned = discard_anomalies(samples.values, policy, samples.source_label)
    return DefectSampleSet(
        cleaned.values, samples.discarded + cleaned.discarded, samples.source_label
    )


@dataclass(frozen=True)
class Histogram:
    """Binned frequencies with contiguous equal-width bins.

    bins holds (lower_edge, count) pairs; a bin covers
    [lower_edge, lower_edge + bin_width).  Leading and trailing empty bins
    are trimmed, interior empty bins are kept so edges stay contiguous.
    """

    bin_width: float
    origin: float
    bins: tuple[tuple[float, int], ...]
    total: int = field(default=0)

    def edges(self) -> list[float]:
        out = [lower for lower, _ in self.bins]
        if self.bins:
            out.append(self.bins[-1][0] + self.bin_width)
        return out

    def to_csv_rows(self) -> list[tuple[float, int]]:
        return [(lower, count) for lower, count in self.bins]


def build_histogram(samples: DefectSampleSet, bin_width: float = 1.0, origin: float = 0.0) -> Histogram:
    """Bin retained values at floor((x - origin) / bin_width).

    Requires bin_width > 0 and at least two retained values (the same floor
    as fitting; a histogram of fewer points is not a population).
    """
    if not bin_width > 0.0:
        raise ValueError(f"bin_width must be positive, got {bin_width}")
    if samples.n < 2:
        raise EmptySample(f"histogram needs >= 2 retained values, got {samples.n}")

    indices = [math.floor((v - origin) / bin_width) for v in samples.values]
    lo = min(indices)
    hi = max(indices)
    counts = [0] * (hi - lo + 1)
    for i in indices:
        counts[i - lo] += 1
    bins = tuple((origin + (lo + j) * bin_width, c) for j, c in enumerate(counts))
    return Histogram(bin_width=bin_width, origin=origin, bins=bins, total=samples.n)
