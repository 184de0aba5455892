"""Estimator formulas: exact values, identities, and curve scoring."""

import math

import pytest
from hypothesis import given, strategies as st

from episim.estimation import (
    corrected_prevalence,
    curve_error,
    npv,
    peak_window_bias,
    peak_window_error,
    ppv,
    proportional_estimate,
    smooth,
)
from episim.screening import TestParams


class TestProportionalEstimate:
    def test_national_scale_cross_multiplication(self):
        # 1000 positives out of 700k tests scaled to 70M residents
        assert proportional_estimate(1000, 700_000, 70_000_000) == 100_000

    def test_zero_positives(self):
        assert proportional_estimate(0, 50, 2000) == 0.0

    def test_all_positive_saturates_at_population(self):
        assert proportional_estimate(50, 50, 2000) == 2000

    def test_zero_tests_gives_zero(self):
        assert proportional_estimate(0, 0, 2000) == 0.0

    def test_positives_above_tests_rejected(self):
        with pytest.raises(ValueError):
            proportional_estimate(5, 3, 2000)

    @given(st.integers(min_value=0, max_value=500), st.integers(min_value=0, max_value=500))
    def test_never_exceeds_population(self, a, b):
        positives, tests = min(a, b), max(a, b)
        estimate = proportional_estimate(positives, tests, 2000)
        assert 0.0 <= estimate <= 2000


class TestPredictiveValues:
    def test_ppv_symmetric_half_prevalence(self):
        assert ppv(0.9, 0.9, 0.5) == pytest.approx(0.9, abs=1e-12)

    def test_ppv_zero_prevalence(self):
        assert ppv(0.9, 0.9, 0.0) == 0.0

    def test_ppv_low_prevalence(self):
        # 0.09 true positives vs 0.09 false positives
        assert ppv(0.9, 0.9, 0.1) == pytest.approx(0.5, abs=1e-12)

    def test_npv_zero_prevalence(self):
        assert npv(0.9, 0.9, 0.0) == 1.0

    def test_npv_symmetric_half_prevalence(self):
        assert npv(0.9, 0.9, 0.5) == pytest.approx(0.9, abs=1e-12)

    def test_npv_high_prevalence(self):
        assert npv(0.9, 0.9, 0.9) == pytest.approx(0.5, abs=1e-12)

    @given(st.floats(min_value=0.5001, max_value=1.0))
    def test_symmetric_identity(self, s):
        assert ppv(s, s, 0.5) == pytest.approx(s, abs=1e-12)
        assert npv(s, s, 0.5) == pytest.approx(s, abs=1e-12)

    def test_ppv_monotone_nondecreasing_in_prevalence(self):
        grid = [i / 100 for i in range(101)]
        values = [ppv(0.9, 0.9, p) for p in grid]
        assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))

    def test_npv_monotone_nonincreasing_in_prevalence(self):
        grid = [i / 100 for i in range(101)]
        values = [npv(0.9, 0.9, p) for p in grid]
        assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))

    @given(
        st.floats(min_value=0.0, max_value=1.0),
        st.floats(min_value=0.0, max_value=1.0),
        st.floats(min_value=0.0, max_value=1.0),
    )
    def test_values_stay_in_unit_interval(self, s, sp, p):
        assert 0.0 <= ppv(s, sp, p) <= 1.0
        assert 0.0 <= npv(s, sp, p) <= 1.0


class TestCorrectedPrevalence:
    def test_midpoint(self):
        assert corrected_prevalence(0.5, TestParams()) == pytest.approx(0.5, abs=1e-12)

    def test_numerator_exactly_zero(self):
        assert corrected_prevalence(0.1, TestParams()) == 0.0

    def test_clamped_below_false_positive_floor(self):
        assert corrected_prevalence(0.05, TestParams()) == 0.0

    def test_clamped_above_one(self):
        assert corrected_prevalence(1.0, TestParams(sensitivity=0.8)) == 1.0

    def test_uninformative_test_rejected(self):
        with pytest.raises(ValueError):
            corrected_prevalence(0.5, TestParams(sensitivity=0.5, specificity=0.5))

    @given(st.floats(min_value=0.0, max_value=1.0))
    def test_round_trip_identity(self, p):
        # feeding back the expected positivity of an unbiased sample must
        # recover the true prevalence exactly
        apparent = 0.9 * p + 0.1 * (1.0 - p)
        assert corrected_prevalence(apparent, TestParams()) == pytest.approx(
            p, abs=1e-12
        )

    @given(
        st.floats(min_value=0.0, max_value=1.0),
        st.floats(min_value=0.55, max_value=1.0),
        st.floats(min_value=0.55, max_value=1.0),
    )
    def test_round_trip_for_any_informative_test(self, p, s, sp):
        apparent = s * p + (1.0 - sp) * (1.0 - p)
        got = corrected_prevalence(apparent, TestParams(sensitivity=s, specificity=sp))
        assert got == pytest.approx(p, abs=1e-9)


class TestSmooth:
    def test_constant_series_unchanged(self):
        assert smooth([3.0] * 10, 7) == [3.0] * 10

    def test_window_one_is_identity(self):
        xs = [1.0, 5.0, 2.0, 8.0]
        assert smooth(xs, 1) == xs

    def test_prefix_averages_then_full_window(self):
        got = smooth([0, 0, 0, 0, 0, 0, 7], 7)
        assert got[-1] == pytest.approx(1.0)
        assert got[:6] == [0.0] * 6

    def test_empty_series(self):
        assert smooth([], 7) == []

    def test_prefix_is_running_mean(self):
        xs = [2.0, 4.0, 6.0]
        assert smooth(xs, 7) == [2.0, 3.0, 4.0]

    @given(st.lists(st.floats(min_value=-1e6, max_value=1e6), max_size=40),
           st.integers(min_value=1, max_value=10))
    def test_output_bounded_by_input_range(self, xs, w):
        out = smooth(xs, w)
        assert len(out) == len(xs)
        if xs:
            assert min(xs) - 1e-6 <= min(out) and max(out) <= max(xs) + 1e-6


class TestCurveError:
    def test_identical_curves(self):
        assert curve_error([1.0, 2.0], [1.0, 2.0]) == 0.0

    def test_constant_offset(self):
        truth = [5.0, 10.0, 15.0]
        est = [t + 10 for t in truth]
        assert curve_error(est, truth) == pytest.approx(10.0)

    def test_hand_computed_mix(self):
        assert curve_error([0.0, 20.0], [10.0, 10.0]) == pytest.approx(10.0)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            curve_error([1.0], [1.0, 2.0])


class TestPeakWindow:
    def test_peak_window_error_restricts_to_peak(self):
        truth = [0.0, 10.0, 100.0, 90.0, 10.0]
        est = [50.0, 50.0, 110.0, 80.0, 50.0]
        # only days with truth >= 50 count: errors 10 and 10
        assert peak_window_error(est, truth) == pytest.approx(10.0)

    def test_peak_window_bias_signed(self):
        truth = [0.0, 100.0, 80.0]
        est = [0.0, 120.0, 60.0]
        assert peak_window_bias(est, truth) == pytest.approx(0.0)

    def test_empty(self):
        assert peak_window_error([], []) == 0.0


def test_build_estimates_pools_window_and_carries_forward():
    from episim.dynamics import DailyRecord
    from episim.estimation import build_estimates
    import numpy as np
    from episim.population import Agent
    from episim.dynamics import SimState, DiseaseConfig
    from episim.screening import ScreeningConfig
    from episim.vaccination import VaccinationConfig

    def record(day, tests, positives, symptomatic=100):
        return DailyRecord(
            day=day, susceptible=1000 - symptomatic, incubating=0, asymptomatic=0,
            symptomatic=symptomatic, recovered=0, new_infections=0, new_serious=0,
            tests_done=tests, positives=positives, doses_given=0, in_quarantine=0,
            lockdown_active=False,
        )

    agents = [Agent(id=i, age=30) for i in range(1000)]
    state = SimState(
        agents=agents,
        rng=np.random.default_rng(0),
        disease=DiseaseConfig(),
        screening=ScreeningConfig(),
        vaccination=VaccinationConfig(),
    )
    # day 1: no tests; day 2: 10 tests 5 positive; day 3: no tests
    state.history = [record(1, 0, 0), record(2, 10, 5), record(3, 0, 0)]
    state.day = 3
    series = build_estimates(state, window=7)
    assert series.est_proportional[0] == 0.0  # nothing known yet
    assert series.est_proportional[1] == pytest.approx(1000 * 5 / 10)
    # zero-test day pools the window, so the estimate persists
    assert series.window_tests == [0, 10, 10]
    assert series.est_proportional[2] == series.est_proportional[1]
    # positivity 0.5 with 0.9/0.9 tests inverts to prevalence 0.5
    assert series.est_predictive[1] == pytest.approx(500.0)
    assert series.true_infected == [100, 100, 100]


def test_perfect_exhaustive_testing_recovers_true_count_exactly():
    # perfect tests over the whole population form a census: the predictive
    # estimate must equal the true infected count with no error at all
    from episim.config import SimConfig, make_state
    from episim.dynamics import step
    from episim.estimation import build_estimates
    from episim.harness import variant
    from episim.population import State

    cfg = variant(
        SimConfig(population={"size": 500}, initial_infected=0),
        disease={"p_transmission": 0.0},
        screening={
            "enabled": True,
            "daily_tests": 500,
            "trigger_symptomatic_share": 0.0,
            "params": {"sensitivity": 1.0, "specificity": 1.0},
        },
    )
    state = make_state(cfg, seed=1)
    for agent in state.agents[:100]:
        agent.state = State.INCUBATING
        agent.state_duration = 30  # nobody recovers during the check
    step(state)
    series = build_estimates(state)
    assert series.true_infected[-1] == 100
    assert series.est_predictive[-1] == pytest.approx(100.0, abs=1e-9)
    assert series.est_proportional[-1] == pytest.approx(100.0, abs=1e-9)


def test_estimator_ranking_intuition_at_low_prevalence():
    # the cross multiplication inflates low-prevalence estimates by the
    # false-positive floor; the corrected estimator removes it exactly
    params = TestParams()
    apparent = 0.9 * 0.0 + 0.1 * 1.0
    prop = proportional_estimate(round(apparent * 100), 100, 2000)
    pred = 2000 * corrected_prevalence(apparent, params)
    assert prop == pytest.approx(200.0)
    assert pred == 0.0


def test_smooth_nan_free_for_finite_input():
    out = smooth([1.0, 2.0, 3.0] * 5, 4)
    assert all(math.isfinite(v) for v in out)
