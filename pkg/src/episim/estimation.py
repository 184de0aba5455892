"""Epidemic-curve reconstruction from test counts, and estimate scoring.

Two estimators are computed per day over a trailing window of pooled test
results: a plain cross-multiplication of the positivity rate, and a
prevalence inversion that corrects the positivity for the test's
sensitivity and specificity before scaling to the population.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING

from .screening import TestParams

if TYPE_CHECKING:
    from .dynamics import SimState


def proportional_estimate(positives: int, tests: int, population: int) -> float:
    """Cross multiplication: scale the raw positivity to the population."""
    if positives > tests:
        raise ValueError(f"positives ({positives}) cannot exceed tests ({tests})")
    if tests == 0:
        return 0.0
    return population * positives / tests


def ppv(sensi: float, specif: float, preval: float) -> float:
    """Positive predictive value (precision) at a given prevalence."""
    if preval == 0.0:
        return 0.0
    num = sensi * preval
    den = num + (1.0 - specif) * (1.0 - preval)
    if den == 0.0:
        return 0.0
    return num / den


def npv(sensi: float, specif: float, preval: float) -> float:
    """Negative predictive value (complement of the false omission rate)."""
    if preval == 0.0:
        return 1.0
    num = specif * (1.0 - preval)
    den = num + (1.0 - sensi) * preval
    if den == 0.0:
        return 0.0
    return num / den


def corrected_prevalence(apparent_positivity: float, params: TestParams) -> float:
    """Invert the expected-positivity relation to recover true prevalence.

    Solves apparent = sensitivity*p + (1-specificity)*(1-p) for p and
    clamps to [0, 1]. Requires an informative test (sensitivity +
    specificity > 1); otherwise positivity carries no prevalence signal.
    """
    denom = params.sensitivity + params.specificity - 1.0
    if denom <= 0.0:
        raise ValueError(
            "estimator undefined: sensitivity + specificity must exceed 1"
        )
    p = (apparent_positivity + params.specificity - 1.0) / denom
    return min(1.0, max(0.0, p))


def smooth(series: list[float], window: int = 7) -> list[float]:
    """Trailing moving average; early days average over the available prefix."""
    if window < 1:
        raise ValueError("window must be >= 1")
    out = []
    acc = 0.0
    for i, v in enumerate(series):
        acc += v
        if i >= window:
            acc -= series[i - window]
        out.append(acc / min(i + 1, window))
    return out


@dataclass
class EstimateSeries:
    """Per-day estimated vs true infected counts, plus the pooled test
    counts each estimate was computed from."""

    days: list[int] = field(default_factory=list)
    true_infected: list[int] = field(default_factory=list)
    est_proportional: list[float] = field(default_factory=list)
    est_predictive: list[float] = field(default_factory=list)
    window_tests: list[int] = field(default_factory=list)
    window_positives: list[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.days)


def window_estimates(
    window_tests: int,
    window_positives: int,
    population: int,
    params: TestParams,
    previous: tuple[float, float],
) -> tuple[float, float]:
    """One day's (proportional, predictive) estimates from pooled counts.

    Days with no tests in the window carry the previous estimates forward
    so the curve stays plottable.
    """
    if window_tests == 0:
        return previous
    positivity = window_positives / window_tests
    prop = proportional_estimate(window_positives, window_tests, population)
    pred = population * corrected_prevalence(positivity, params)
    return prop, pred


def build_estimates(state: "SimState", window: int = 7) -> EstimateSeries:
    """Reconstruct the epidemic curve from the run's daily test counts."""
    population = state.population_size
    params = state.screening.params
    series = EstimateSeries()
    prev = (0.0, 0.0)
    tests_acc = 0
    positives_acc = 0
    history = state.history
    for i, rec in enumerate(history):
        tests_acc += rec.tests_done
        positives_acc += rec.positives
        if i >= window:
            tests_acc -= history[i - window].tests_done
            positives_acc -= history[i - window].positives
        prop, pred = window_estimates(
            tests_acc, positives_acc, population, params, prev
        )
        prev = (prop, pred)
        series.days.append(rec.day)
        series.true_infected.append(rec.true_infected)
        series.est_proportional.append(prop)
        series.est_predictive.append(pred)
        series.window_tests.append(tests_acc)
        series.window_positives.append(positives_acc)
    return series


def curve_error(est: list[float], truth: list[float]) -> float:
    """Mean absolute error between an estimated and a true curve."""
    if len(est) != len(truth):
        raise ValueError(f"length mismatch: {len(est)} vs {len(truth)}")
    if not est:
        return 0.0
    return sum(abs(e - t) for e, t in zip(est, truth)) / len(est)


def peak_window(truth: list[float], frac: float = 0.5) -> list[int]:
    """Indices of days where the true count is within frac of its maximum."""
    if not truth:
        return []
    peak = max(truth)
    return [i for i, t in enumerate(truth) if t >= frac * peak]


def peak_window_error(est: list[float], truth: list[float], frac: float = 0.5) -> float:
    """MAE restricted to the days around the epidemic peak."""
    idx = peak_window(truth, frac)
    if not idx:
        return 0.0
    return sum(abs(est[i] - truth[i]) for i in idx) / len(idx)


def peak_window_bias(est: list[float], truth: list[float], frac: float = 0.5) -> float:
    """Signed mean of (estimate - truth) over the peak window; positive
    means the estimator overshoots where it matters most."""
    idx = peak_window(truth, frac)
    if not idx:
        return 0.0
    return sum(est[i] - truth[i] for i in idx) / len(idx)


ESTIMATES_CSV_COLUMNS = [
    "day",
    "true",
    "est_proportional",
    "est_predictive",
    "window_tests",
    "window_positives",
]


def write_estimates_csv(series: EstimateSeries, path: str | Path) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(ESTIMATES_CSV_COLUMNS)
        for i in range(len(series)):
            w.writerow(
                [
                    series.days[i],
                    series.true_infected[i],
                    repr(series.est_proportional[i]),
                    repr(series.est_predictive[i]),
                    series.window_tests[i],
                    series.window_positives[i],
                ]
            )


def read_estimates_csv(path: str | Path) -> EstimateSeries:
    series = EstimateSeries()
    with open(path, newline="") as f:
        for rec in csv.DictReader(f):
            series.days.append(int(rec["day"]))
            series.true_infected.append(int(rec["true"]))
            series.est_proportional.append(float(rec["est_proportional"]))
            series.est_predictive.append(float(rec["est_predictive"]))
            series.window_tests.append(int(rec["window_tests"]))
            series.window_positives.append(int(rec["window_positives"]))
    return series


def write_predictive_values_csv(
    series: EstimateSeries, params: TestParams, population: int, path: str | Path
) -> None:
    """Companion report: daily PPV/NPV at the estimated prevalence."""
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["day", "ppv", "npv"])
        for day, pred in zip(series.days, series.est_predictive):
            prev = min(1.0, pred / population) if population > 0 else 0.0
            w.writerow(
                [
                    day,
                    repr(ppv(params.sensitivity, params.specificity, prev)),
                    repr(npv(params.sensitivity, params.specificity, prev)),
                ]
            )
