"""Batch experiment runner: seeded runs, indicator summaries, CSV/JSON reports."""

from __future__ import annotations

import copy
import csv
import json
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .config import SimConfig, make_state
from .dynamics import DailyRecord, step, write_history_csv
from .estimation import (
    EstimateSeries,
    build_estimates,
    curve_error,
    peak_window_bias,
    peak_window_error,
    write_estimates_csv,
)
from .screening import TestTarget
from .vaccination import VaccStrategy

INDICATORS = (
    "duration_days",
    "serious_total",
    "peak_daily_new_infections",
    "infected_total",
    "vaccines_total",
)


@dataclass
class RunSummary:
    """The five campaign indicators for one seeded run."""

    duration_days: int
    serious_total: int
    peak_daily_new_infections: int
    infected_total: int
    vaccines_total: int
    seed: int
    truncated: bool = False


@dataclass
class BatchSummary:
    fingerprint: str
    n_runs: int
    means: dict[str, float]
    stds: dict[str, float]
    runs: list[RunSummary] = field(default_factory=list)


def run_to_end(cfg: SimConfig, seed: int | None = None):
    """Step a fresh state until no infectious agent remains or max_days."""
    state = make_state(cfg, seed)
    while state.day < cfg.max_days and state.infected_count() > 0:
        step(state)
    return state


def summarize(state, seed: int) -> RunSummary:
    history = state.history
    return RunSummary(
        duration_days=state.day,
        serious_total=sum(r.new_serious for r in history),
        peak_daily_new_infections=max((r.new_infections for r in history), default=0),
        infected_total=state.cumulative_infections,
        vaccines_total=sum(r.doses_given for r in history),
        seed=seed,
        truncated=state.infected_count() > 0,
    )


def run_simulation(
    cfg: SimConfig, seed: int | None = None
) -> tuple[list[DailyRecord], EstimateSeries, RunSummary]:
    """Run to extinction (no infectious agent left) or to cfg.max_days."""
    state = run_to_end(cfg, seed)
    summary = summarize(state, cfg.seed if seed is None else seed)
    return state.history, build_estimates(state), summary


def _run_for_pool(args: tuple[SimConfig, int]):
    cfg, seed = args
    return run_simulation(cfg, seed)


def map_runs(
    cfg: SimConfig, seeds: list[int], jobs: int | None = None
) -> list[tuple[list[DailyRecord], EstimateSeries, RunSummary]]:
    """Run one simulation per seed, optionally across processes."""
    if jobs is None or jobs <= 1 or len(seeds) <= 1:
        return [run_simulation(cfg, s) for s in seeds]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_for_pool, [(cfg, s) for s in seeds]))


def run_batch(
    cfg: SimConfig, n_runs: int = 20, base_seed: int = 0, jobs: int | None = None
) -> BatchSummary:
    """Average the five indicators over seeds base_seed..base_seed+n_runs-1."""
    if n_runs < 1:
        raise ValueError("n_runs must be >= 1")
    seeds = list(range(base_seed, base_seed + n_runs))
    summaries = [r[2] for r in map_runs(cfg, seeds, jobs)]
    summaries.sort(key=lambda s: s.seed)
    means = {}
    stds = {}
    for name in INDICATORS:
        values = [getattr(s, name) for s in summaries]
        means[name] = statistics.fmean(values)
        stds[name] = statistics.pstdev(values) if len(values) > 1 else 0.0
    return BatchSummary(
        fingerprint=cfg.fingerprint(),
        n_runs=n_runs,
        means=means,
        stds=stds,
        runs=summaries,
    )


def variant(cfg: SimConfig, **sections) -> SimConfig:
    """Deep-copied config with per-section field overrides, e.g.
    variant(cfg, screening={"daily_tests": 9}, seed=3)."""
    out = copy.deepcopy(cfg)
    for name, value in sections.items():
        if isinstance(value, dict):
            section = getattr(out, name)
            for k, v in value.items():
                if not hasattr(section, k):
                    raise AttributeError(f"{name} config has no field {k!r}")
                setattr(section, k, v)
            post = getattr(section, "__post_init__", None)
            if post is not None:  # re-coerce nested dicts and enum strings
                post()
        else:
            setattr(out, name, value)
    return out


def count_waves(
    series: list[float], trough_frac: float = 0.25, min_peak_frac: float = 0.1
) -> int:
    """Distinct epidemic waves in a curve.

    Two maxima count as separate waves only when the valley between them
    drops below trough_frac of the smaller one; bumps under min_peak_frac
    of the global maximum are ignored as noise.
    """
    if not series or max(series) <= 0:
        return 0
    # compress plateaus so local extrema are well defined
    idx = [0] + [i for i in range(1, len(series)) if series[i] != series[i - 1]]
    vals = [series[i] for i in idx]
    if len(vals) == 1:
        return 1
    peaks = []
    for j, v in enumerate(vals):
        left = vals[j - 1] if j > 0 else None
        right = vals[j + 1] if j + 1 < len(vals) else None
        if (left is None or v > left) and (right is None or v > right):
            peaks.append(idx[j])
    floor = min_peak_frac * max(series)
    peaks = [p for p in peaks if series[p] >= floor]
    changed = True
    while changed and len(peaks) > 1:
        changed = False
        for i in range(len(peaks) - 1):
            a, b = peaks[i], peaks[i + 1]
            trough = min(series[a : b + 1])
            smaller = min(series[a], series[b])
            if trough >= trough_frac * smaller:
                drop = i if series[a] <= series[b] else i + 1
                peaks.pop(drop)
                changed = True
                break
    return len(peaks)


# ---------------------------------------------------------------------------
# canned experiment grids
# ---------------------------------------------------------------------------

SCREENING_STRATEGIES = (
    TestTarget.RANDOM,
    TestTarget.SYMPTOMATIC,
    TestTarget.ELDERLY,
    TestTarget.WORKERS,
)

VACCINATION_STRATEGIES = (
    VaccStrategy.RISK_FIRST,
    VaccStrategy.CONTACTS_FIRST,
    VaccStrategy.RANDOM,
)


def _screening_base(base_cfg: SimConfig) -> SimConfig:
    return variant(
        base_cfg,
        screening={"enabled": True, "trigger_symptomatic_share": 0.0, "daily_tests": 3},
        vaccination={"enabled": False},
    )


def experiment_screening_samples(
    base_cfg: SimConfig,
    n_runs: int = 20,
    base_seed: int = 0,
    out_dir: str | Path | None = None,
    jobs: int | None = None,
) -> dict:
    """3 tests/day, immediate start, one section per targeting strategy."""
    seeds = list(range(base_seed, base_seed + n_runs))
    report: dict = {"experiment": "samples", "n_runs": n_runs, "strategies": {}}
    for target in SCREENING_STRATEGIES:
        cfg = variant(_screening_base(base_cfg), screening={"target": target})
        results = map_runs(cfg, seeds, jobs)
        per_seed = []
        for seed, (history, est, _) in zip(seeds, results):
            truth = [float(t) for t in est.true_infected]
            tests = sum(r.tests_done for r in history)
            positives = sum(r.positives for r in history)
            population = sum(history[0].census) if history else 0
            per_seed.append(
                {
                    "seed": seed,
                    "mae_proportional": curve_error(est.est_proportional, truth),
                    "mae_predictive": curve_error(est.est_predictive, truth),
                    "peak_bias_predictive": peak_window_bias(est.est_predictive, truth),
                    "positivity": positives / tests if tests else 0.0,
                    "mean_prevalence": (
                        statistics.fmean(truth) / population if population else 0.0
                    ),
                }
            )
        section = {
            "per_seed": per_seed,
            "mae_proportional_mean": statistics.fmean(
                r["mae_proportional"] for r in per_seed
            ),
            "mae_predictive_mean": statistics.fmean(
                r["mae_predictive"] for r in per_seed
            ),
        }
        report["strategies"][target.value] = section
        if out_dir is not None:
            d = Path(out_dir) / "samples" / target.value
            d.mkdir(parents=True, exist_ok=True)
            for seed, (_, est, _) in zip(seeds, results):
                write_estimates_csv(est, d / f"estimates_seed{seed:03d}.csv")
    if out_dir is not None:
        _write_curve_errors_csv(report, Path(out_dir) / "samples" / "curve_errors.csv")
        _write_report_json(report, Path(out_dir) / "samples" / "report.json")
    return report


def experiment_screening_intensity(
    base_cfg: SimConfig,
    n_runs: int = 20,
    base_seed: int = 0,
    out_dir: str | Path | None = None,
    jobs: int | None = None,
    intensities: tuple[int, ...] = (3, 6, 9),
) -> dict:
    """Random targeting, immediate start, varying tests per day."""
    seeds = list(range(base_seed, base_seed + n_runs))
    report: dict = {"experiment": "intensity", "n_runs": n_runs, "intensities": {}}
    for daily in intensities:
        cfg = variant(
            _screening_base(base_cfg),
            screening={"target": TestTarget.RANDOM, "daily_tests": daily},
        )
        results = map_runs(cfg, seeds, jobs)
        per_seed = []
        for seed, (history, est, _) in zip(seeds, results):
            truth = [float(t) for t in est.true_infected]
            per_seed.append(
                {
                    "seed": seed,
                    "mae_predictive": curve_error(est.est_predictive, truth),
                    "max_daily_tests": max((r.tests_done for r in history), default=0),
                }
            )
        report["intensities"][str(daily)] = {
            "per_seed": per_seed,
            "mae_predictive_mean": statistics.fmean(
                r["mae_predictive"] for r in per_seed
            ),
        }
    if out_dir is not None:
        _write_report_json(report, Path(out_dir) / "intensity" / "report.json")
    return report


def experiment_screening_timing(
    base_cfg: SimConfig,
    n_runs: int = 20,
    base_seed: int = 0,
    out_dir: str | Path | None = None,
    jobs: int | None = None,
    late_trigger: float = 0.15,
    intensities: tuple[int, ...] = (3, 9),
) -> dict:
    """2x2 grid: {immediate, late} campaign start x test intensity; scores
    each cell by its error around the epidemic peak."""
    seeds = list(range(base_seed, base_seed + n_runs))
    report: dict = {"experiment": "timing", "n_runs": n_runs, "cells": {}}
    for label, trigger in (("immediate", 0.0), ("late", late_trigger)):
        for daily in intensities:
            cfg = variant(
                _screening_base(base_cfg),
                screening={
                    "target": TestTarget.RANDOM,
                    "daily_tests": daily,
                    "trigger_symptomatic_share": trigger,
                },
            )
            results = map_runs(cfg, seeds, jobs)
            per_seed = []
            for seed, (_, est, _) in zip(seeds, results):
                truth = [float(t) for t in est.true_infected]
                per_seed.append(
                    {
                        "seed": seed,
                        "peak_window_mae": peak_window_error(est.est_predictive, truth),
                    }
                )
            report["cells"][f"{label}_{daily}"] = {
                "trigger_symptomatic_share": trigger,
                "daily_tests": daily,
                "per_seed": per_seed,
                "peak_window_mae_mean": statistics.fmean(
                    r["peak_window_mae"] for r in per_seed
                ),
            }
    if out_dir is not None:
        _write_report_json(report, Path(out_dir) / "timing" / "report.json")
    return report


def experiment_vaccination_sweep(
    base_cfg: SimConfig,
    n_runs: int = 20,
    base_seed: int = 0,
    out_dir: str | Path | None = None,
    jobs: int | None = None,
    starts: tuple[float, ...] = (0.0, 0.10, 0.20),
    speeds: tuple[int, ...] = (10, 20, 30),
) -> dict:
    """Start x speed x strategy grid, the five indicators averaged per cell."""
    report: dict = {"experiment": "vax-sweep", "n_runs": n_runs, "cells": []}
    for strategy in VACCINATION_STRATEGIES:
        for start in starts:
            for speed in speeds:
                cfg = variant(
                    base_cfg,
                    screening={"enabled": False},
                    vaccination={
                        "enabled": True,
                        "strategy": strategy,
                        "trigger_infected_share": start,
                        "daily_doses": speed,
                    },
                )
                batch = run_batch(cfg, n_runs=n_runs, base_seed=base_seed, jobs=jobs)
                cell = {
                    "strategy": strategy.value,
                    "start": start,
                    "speed": speed,
                }
                for name in INDICATORS:
                    cell[f"{name}_mean"] = batch.means[name]
                    cell[f"{name}_std"] = batch.stds[name]
                report["cells"].append(cell)
    if out_dir is not None:
        d = Path(out_dir) / "vax-sweep"
        d.mkdir(parents=True, exist_ok=True)
        _write_report_json(report, d / "report.json")
        for strategy in VACCINATION_STRATEGIES:
            _write_sweep_table_csv(report, strategy.value, d / f"{strategy.value}.csv")
    return report


# ---------------------------------------------------------------------------
# file outputs
# ---------------------------------------------------------------------------

BATCH_CSV_COLUMNS = ["seed", *INDICATORS, "truncated"]


def write_summary_json(summary: RunSummary, path: str | Path) -> None:
    with open(path, "w") as f:
        json.dump(asdict(summary), f, indent=2, sort_keys=True)
        f.write("\n")


def write_batch_csv(batch: BatchSummary, path: str | Path) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(BATCH_CSV_COLUMNS)
        for run in batch.runs:
            w.writerow(
                [run.seed]
                + [getattr(run, name) for name in INDICATORS]
                + [int(run.truncated)]
            )


def read_batch_csv(path: str | Path) -> list[RunSummary]:
    out = []
    with open(path, newline="") as f:
        for rec in csv.DictReader(f):
            out.append(
                RunSummary(
                    seed=int(rec["seed"]),
                    duration_days=int(rec["duration_days"]),
                    serious_total=int(rec["serious_total"]),
                    peak_daily_new_infections=int(rec["peak_daily_new_infections"]),
                    infected_total=int(rec["infected_total"]),
                    vaccines_total=int(rec["vaccines_total"]),
                    truncated=bool(int(rec["truncated"])),
                )
            )
    return out


def write_batch_summary_json(batch: BatchSummary, path: str | Path) -> None:
    with open(path, "w") as f:
        json.dump(
            {
                "fingerprint": batch.fingerprint,
                "n_runs": batch.n_runs,
                "means": batch.means,
                "stds": batch.stds,
            },
            f,
            indent=2,
            sort_keys=True,
        )
        f.write("\n")


def _write_report_json(report: dict, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(report, f, indent=2, sort_keys=True)
        f.write("\n")


def _write_curve_errors_csv(report: dict, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["strategy", "seed", "mae_proportional", "mae_predictive"])
        for name, section in report["strategies"].items():
            for row in section["per_seed"]:
                w.writerow(
                    [
                        name,
                        row["seed"],
                        repr(row["mae_proportional"]),
                        repr(row["mae_predictive"]),
                    ]
                )


def _write_sweep_table_csv(report: dict, strategy: str, path: Path) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["start", "speed", "duration", "serious", "peak", "infected", "vaccines"])
        for cell in report["cells"]:
            if cell["strategy"] != strategy:
                continue
            w.writerow(
                [
                    cell["start"],
                    cell["speed"],
                    repr(cell["duration_days_mean"]),
                    repr(cell["serious_total_mean"]),
                    repr(cell["peak_daily_new_infections_mean"]),
                    repr(cell["infected_total_mean"]),
                    repr(cell["vaccines_total_mean"]),
                ]
            )


def write_run_outputs(
    cfg: SimConfig,
    history,
    estimates: EstimateSeries,
    summary: RunSummary,
    out_dir: str | Path,
    test_log=None,
    agents=None,
) -> None:
    """Write the standard single-run artifact set into out_dir."""
    from .estimation import write_predictive_values_csv
    from .population import write_population_csv
    from .screening import write_test_log_csv

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_history_csv(history, out / "history.csv")
    write_estimates_csv(estimates, out / "estimates.csv")
    write_summary_json(summary, out / "summary.json")
    write_predictive_values_csv(
        estimates, cfg.screening.params, cfg.population.size, out / "predictive_values.csv"
    )
    if test_log is not None:
        write_test_log_csv(test_log, out / "test_log.csv")
    if agents is not None:
        write_population_csv(agents, out / "population.csv")
