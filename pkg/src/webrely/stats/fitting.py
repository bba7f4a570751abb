"""Maximum-likelihood Weibull fitting on defect-density samples.

The shape estimate solves the score equation

    g(a) = sum(x_i**a * ln x_i) / sum(x_i**a) - 1/a - mean(ln x_i) = 0

by Newton-Raphson from a = 1, falling back to bisection on [1e-3, 1e3]
when the iteration diverges or leaves (0, inf).  The scale then follows
directly as (sum(x_i**a) / n) ** (1/a).

g is strictly increasing (its derivative is a weighted variance of ln x
plus 1/a**2), so whenever a root exists the bracketed fallback finds it.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

from ..errors import EmptySample, NoConvergence, NonIdentifiable
from .gof import GofResult
from .samples import DefectSampleSet
from .weibull import WeibullModel

__all__ = ["SolverConfig", "FitReport", "fit_weibull", "score"]

log = logging.getLogger(__name__)

# beyond this value of a * max|ln x| the direct powers x**a would overflow
# or underflow double precision, so sums switch to a shifted log-space form
_LOG_SPACE_LIMIT = 600.0

_BISECT_LO = 1e-3
_BISECT_HI = 1e3


@dataclass(frozen=True)
class SolverConfig:
    tolerance: float = 1e-9
    max_iterations: int = 100
    initial_shape: float = 1.0


@dataclass(frozen=True)
class FitReport:
    """Fit outcome: the model plus convergence and data bookkeeping.

    residual is |g(shape)| at the returned estimate; zeros_excluded counts
    sample values equal to 0 that had to be left out of the likelihood
    (ln 0 is undefined), reported so the exclusion stays visible.
    """

    model: WeibullModel
    sample_count: int
    iterations: int
    residual: float
    method: str = "newton-raphson"
    zeros_excluded: int = 0
    source_label: str = ""
    gof: GofResult | None = None

    def with_gof(self, gof: GofResult) -> "FitReport":
        return replace(self, gof=gof)


def _sums(log_xs: list[float], a: float) -> tuple[float, float, float]:
    """Return (S1/S0, S2_ratio, log S0) for S_k = sum(x**a * (ln x)**k).

    Uses direct powers while safe and a shifted log-space (log-sum-exp)
    form when a * max|ln x| exceeds the overflow limit.
    """
    peak = a * max(abs(l) for l in log_xs)
    if peak <= _LOG_SPACE_LIMIT:
        s0 = s1 = s2 = 0.0
        for l in log_xs:
            w = math.exp(a * l)
            s0 += w
            s1 += w * l
            s2 += w * l * l
        return s1 / s0, s2 / s0, math.log(s0)
    shift = a * max(log_xs)
    s0 = s1 = s2 = 0.0
    for l in log_xs:
        w = math.exp(a * l - shift)
        s0 += w
        s1 += w * l
        s2 += w * l * l
    return s1 / s0, s2 / s0, shift + math.log(s0)


def score(values, a: float) -> float:
    """g(a) for the given strictly positive sample; exposed for oracles."""
    log_xs = [math.log(v) for v in values]
    ratio, _, _ = _sums(log_xs, a)
    return ratio - 1.0 / a - sum(log_xs) / len(log_xs)


def _score_and_slope(log_xs: list[float], mean_log: float, a: float) -> tuple[float, float]:
    ratio, ratio2, _ = _sums(log_xs, a)
    g = ratio - 1.0 / a - mean_log
    # weighted variance of ln x is ratio2 - ratio**2 >= 0, hence g' > 0
    g_prime = (ratio2 - ratio * ratio) + 1.0 / (a * a)
    return g, g_prime


def _scale_for(values: list[float], log_xs: list[float], a: float) -> float:
    n = len(values)
    peak = a * max(abs(l) for l in log_xs)
    if peak <= _LOG_SPACE_LIMIT:
        # direct form of the closed-scale equation, kept exact for re-substitution
        return (math.fsum(v**a for v in values) / n) ** (1.0 / a)
    _, _, log_s0 = _sums(log_xs, a)
    return math.exp((log_s0 - math.log(n)) / a)


def fit_weibull(samples: DefectSampleSet, cfg: SolverConfig = SolverConfig()) -> FitReport:
    """Fit shape and scale to the retained sample by maximum likelihood.

    Zero values are excluded (with a logged warning and a count in the
    report); at least two strictly positive, not-all-equal values must
    remain.  Raises NonIdentifiable when all values are equal and
    NoConvergence when both solvers fail.
    """
    positive = [v for v in samples.values if v > 0.0]
    zeros = samples.n - len(positive)
    if zeros:
        log.warning(
            "excluding %d zero value(s) from MLE sample %r (support is x > 0)",
            zeros,
            samples.source_label,
        )
    if len(positive) < 2:
        raise EmptySample(
            f"need >= 2 strictly positive values to fit, got {len(positive)}"
        )
    if min(positive) == max(positive):
        raise NonIdentifiable(
            "all sample values are equal; the shape score g(a) = -1/a has no root"
        )

    log_xs = [math.log(v) for v in positive]
    mean_log = sum(log_xs) / len(log_xs)

    a = cfg.initial_shape
    iterations = 0
    method = "newton-raphson"
    best_a, best_g = a, math.inf
    polish = 0
    for _ in range(cfg.max_iterations):
        iterations += 1
        g, g_prime = _score_and_slope(log_xs, mean_log, a)
        if abs(g) < best_g:
            best_g, best_a = abs(g), a
        step = g / g_prime
        if abs(g) <= cfg.tolerance:
            # where g is flat (near-identical samples) |g| <= tol still
            # leaves the root loose, so polish until the step stalls
            if g == 0.0 or abs(step) <= 1e-13 * max(1.0, a) or polish >= 3:
                break
            polish += 1
        a_next = a - step
        if not math.isfinite(a_next) or a_next <= 0.0:
            break
        a = a_next

    a = best_a
    if best_g > cfg.tolerance:
        method = "bisection"
        a, extra = _bisect(log_xs, mean_log, cfg)
        iterations += extra

    residual = abs(_score_and_slope(log_xs, mean_log, a)[0])
    if residual > cfg.tolerance:
        raise NoConvergence(
            f"residual |g| = {residual:.3e} above tolerance {cfg.tolerance:g} "
            f"after {iterations} iterations"
        )
    scale = _scale_for(positive, log_xs, a)
    return FitReport(
        model=WeibullModel(shape=a, scale=scale),
        sample_count=len(positive),
        iterations=iterations,
        residual=residual,
        method=method,
        zeros_excluded=zeros,
        source_label=samples.source_label,
    )


def _bisect(log_xs: list[float], mean_log: float, cfg: SolverConfig) -> tuple[float, int]:
    lo, hi = _BISECT_LO, _BISECT_HI
    g_lo = _score_and_slope(log_xs, mean_log, lo)[0]
    g_hi = _score_and_slope(log_xs, mean_log, hi)[0]
    if g_lo > 0.0 or g_hi < 0.0:
        raise NoConvergence(
            f"no sign change of g on [{_BISECT_LO:g}, {_BISECT_HI:g}] "
            f"(g(lo) = {g_lo:.3e}, g(hi) = {g_hi:.3e})"
        )
    steps = 0
    # the default 100 halvings shrink the bracket below 1e-27, past tolerance
    for _ in range(cfg.max_iterations):
        steps += 1
        mid = 0.5 * (lo + hi)
        g_mid = _score_and_slope(log_xs, mean_log, mid)[0]
        if abs(g_mid) <= cfg.tolerance and (hi - lo) <= 1e-12 * max(1.0, mid):
            return mid, steps
        if g_mid < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), steps
