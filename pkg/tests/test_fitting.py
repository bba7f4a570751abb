import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from webrely.errors import EmptySample, NoConvergence, NonIdentifiable
from webrely.stats import DefectSampleSet, SolverConfig, fit_weibull
from webrely.stats.fitting import score


def oracle_score(values, a):
    """Shape score written straight from the estimator definition.

    Powers are normalised by max(x)**a so they stay in [0, 1]; terms that
    underflow carry negligible weight anyway.  This keeps the oracle exact
    for roots beyond the point where raw x**a would overflow.
    """
    n = len(values)
    xmax = max(values)
    s0 = sum((x / xmax) ** a for x in values)
    s1 = sum((x / xmax) ** a * math.log(x) for x in values)
    return s1 / s0 - 1.0 / a - sum(math.log(x) for x in values) / n


def bisect_oracle(values, lo=1e-3, hi=1e3, steps=300):
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if oracle_score(values, mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_two_point_sample_matches_oracle():
    values = (1.0, math.e)
    report = fit_weibull(DefectSampleSet(values))
    alpha_star = bisect_oracle(values)
    # closed-form root of exp(a) = (a+2)/(a-2)
    assert report.model.shape == pytest.approx(2.397, abs=0.01)
    assert report.model.scale == pytest.approx(2.110, abs=0.01)
    assert report.model.shape == pytest.approx(alpha_star, abs=1e-6)
    assert report.sample_count == 2
    assert report.iterations > 0


def test_constant_sample_non_identifiable():
    with pytest.raises(NonIdentifiable):
        fit_weibull(DefectSampleSet((3.0, 3.0, 3.0)))


def test_too_few_positive_values():
    with pytest.raises(EmptySample):
        fit_weibull(DefectSampleSet((0.0, 0.0, 2.0)))


def test_zeros_excluded_and_counted(caplog):
    with_zeros = fit_weibull(DefectSampleSet((0.0, 0.0, 1.0, math.e)))
    without = fit_weibull(DefectSampleSet((1.0, math.e)))
    assert with_zeros.zeros_excluded == 2
    assert with_zeros.model == without.model
    assert with_zeros.sample_count == 2


def test_recovers_generating_parameters(fixed_sample):
    report = fit_weibull(fixed_sample)
    assert 1.45 <= report.model.shape <= 1.80
    assert 2.2 <= report.model.scale <= 2.6
    assert report.residual <= 1e-9


def test_scale_resubstitution_exact(fixed_sample):
    report = fit_weibull(fixed_sample)
    a = report.model.shape
    xs = fixed_sample.values
    assert report.model.scale == (math.fsum(x**a for x in xs) / len(xs)) ** (1.0 / a)


def test_newton_falls_back_to_bisection():
    # nine decades of spread pushes the root far below the starting point
    # and the first Newton step overshoots out of (0, inf)
    report = fit_weibull(DefectSampleSet((1e-8, 1.0, 1e8)))
    assert report.method == "bisection"
    assert report.residual <= 1e-9


def test_no_convergence_with_tiny_budget():
    with pytest.raises(NoConvergence):
        fit_weibull(DefectSampleSet((1.0, math.e)), SolverConfig(max_iterations=4))


def test_score_log_space_path_finite():
    # 2**900 overflows a double; the shifted log-space sums must not
    got = score([0.5, 2.0], 900.0)
    assert math.isfinite(got)
    assert got > 0.6


def test_score_paths_agree_near_switchover():
    values = [0.8, 1.1, 1.9, 2.5]
    # max |ln x| is ln 2.5 ~ 0.916, so the switch happens near a = 655
    below = score(values, 650.0)
    above = score(values, 660.0)
    assert abs(below - above) < 1e-3


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.floats(0.01, 20.0, allow_nan=False), min_size=2, max_size=50),
)
def test_matches_bisection_oracle(values):
    if max(values) - min(values) < 1e-6:
        return
    try:
        report = fit_weibull(DefectSampleSet(tuple(values)))
    except NoConvergence:
        # root outside [1e-3, 1e3]: the oracle cannot see it either
        return
    assert report.model.shape == pytest.approx(bisect_oracle(values), abs=1e-6)


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.floats(0.05, 15.0, allow_nan=False), min_size=3, max_size=30),
    st.floats(0.1, 100.0),
)
def test_scale_equivariance(values, c):
    if max(values) - min(values) < 1e-3:
        return
    base = fit_weibull(DefectSampleSet(tuple(values)))
    scaled = fit_weibull(DefectSampleSet(tuple(v * c for v in values)))
    assert abs(scaled.model.shape - base.model.shape) < 1e-8 * max(1.0, base.model.shape)
    assert scaled.model.scale == pytest.approx(base.model.scale * c, rel=1e-8)


def test_report_carries_label(fixed_sample):
    report = fit_weibull(fixed_sample)
    assert report.source_label == "synthetic-fixture"
    assert report.gof is None
