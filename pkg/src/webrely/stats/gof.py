"""Goodness-of-fit checks of a histogram or sample against a fitted model.

Two methods: Pearson chi-square on merged histogram bins (the default) and
Kolmogorov-Smirnov on the raw retained values for small samples.  Critical
values come from scipy: chi2.ppf for the chi-square threshold and the exact
kstwo distribution for KS.  The statistics themselves are computed here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import stats as _scipy_stats

from ..errors import InsufficientData
from .samples import DefectSampleSet, Histogram
from .weibull import WeibullModel, weibull_cdf

__all__ = ["GofResult", "goodness_of_fit"]

MIN_EXPECTED_PER_BIN = 5.0


@dataclass(frozen=True)
class GofResult:
    statistic: float
    threshold: float
    dof: int
    passed: bool
    method: str = "chi-square"
    significance: float = 0.05

    def __post_init__(self):
        if self.passed != (self.statistic <= self.threshold):
            raise ValueError("passed flag inconsistent with statistic vs threshold")


def goodness_of_fit(
    hist: Histogram | None,
    model: WeibullModel,
    method: str = "chi-square",
    significance: float = 0.05,
    *,
    samples: DefectSampleSet | None = None,
    fitted_params: int = 0,
) -> GofResult:
    """Decide whether the model is compatible with the observed data.

    chi-square works on the histogram; ks works on the raw retained sample
    (pass samples=).  fitted_params removes degrees of freedom when the
    model parameters were estimated from this same data (2 for a Weibull
    fit, 0 when testing an externally given model).
    """
    if not 0.0 < significance < 1.0:
        raise ValueError("significance must be in (0, 1)")
    if method == "chi-square":
        if hist is None:
            raise ValueError("chi-square requires a histogram")
        return _chi_square(hist, model, significance, fitted_params)
    if method == "ks":
        if samples is None:
            raise ValueError("ks requires the raw retained samples")
        return _ks(samples, model, significance)
    raise ValueError(f"unknown goodness-of-fit method {method!r}")


def _bin_probabilities(hist: Histogram, model: WeibullModel) -> list[float]:
    # open the first bin downward and the last upward so probabilities
    # cover the whole support and expected counts sum to n
    probs = []
    last = len(hist.bins) - 1
    for i, (lower, _) in enumerate(hist.bins):
        upper = lower + hist.bin_width
        lo_cdf = 0.0 if i == 0 else weibull_cdf(model, lower)
        hi_cdf = 1.0 if i == last else weibull_cdf(model, upper)
        probs.append(max(hi_cdf - lo_cdf, 0.0))
    return probs


def _merge_bins(observed: list[int], expected: list[float]) -> list[tuple[float, float]]:
    """Greedy left-to-right merge until each group's expected count >= 5.

    A trailing short group is merged into the previous one; if that would
    collapse everything into a single group (the model concentrates its
    mass in one bin), a two-group split is kept instead so the statistic
    can still register the mismatch.
    """
    groups: list[tuple[float, float]] = []
    acc_obs = 0.0
    acc_exp = 0.0
    for o, e in zip(observed, expected):
        acc_obs += o
        acc_exp += e
        if acc_exp >= MIN_EXPECTED_PER_BIN:
            groups.append((acc_obs, acc_exp))
            acc_obs = acc_exp = 0.0
    if acc_obs or acc_exp:
        if len(groups) >= 2:
            last_obs, last_exp = groups.pop()
            groups.append((last_obs + acc_obs, last_exp + acc_exp))
        else:
            groups.append((acc_obs, acc_exp))
    return groups


def _chi_square(
    hist: Histogram, model: WeibullModel, significance: float, fitted_params: int
) -> GofResult:
    if len(hist.bins) < 3:
        raise InsufficientData(
            f"chi-square needs >= 3 histogram bins, got {len(hist.bins)}"
        )
    observed = [count for _, count in hist.bins]
    probs = _bin_probabilities(hist, model)
    expected = [hist.total * p for p in probs]
    groups = _merge_bins(observed, expected)
    dof = len(groups) - 1 - fitted_params
    if dof < 1:
        raise InsufficientData(
            f"{len(groups)} merged bins leave dof = {dof}; need at least 1"
        )
    statistic = 0.0
    for obs, exp in groups:
        if exp <= 1e-12:
            statistic = math.inf
            break
        statistic += (obs - exp) ** 2 / exp
    threshold = float(_scipy_stats.chi2.ppf(1.0 - significance, dof))
    return GofResult(
        statistic=statistic,
        threshold=threshold,
        dof=dof,
        passed=statistic <= threshold,
        method="chi-square",
        significance=significance,
    )


def _ks(samples: DefectSampleSet, model: WeibullModel, significance: float) -> GofResult:
    n = samples.n
    if n < 5:
        raise InsufficientData(f"ks needs >= 5 samples, got {n}")
    xs = sorted(samples.values)
    d = 0.0
    for i, x in enumerate(xs, start=1):
        f = weibull_cdf(model, x)
        d = max(d, i / n - f, f - (i - 1) / n)
    threshold = float(_scipy_stats.kstwo.ppf(1.0 - significance, n))
    return GofResult(
        statistic=d,
        threshold=threshold,
        dof=0,
        passed=d <= threshold,
        method="ks",
        significance=significance,
    )
