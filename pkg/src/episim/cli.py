"""Command line: single runs, seed batches, experiment grids, live server."""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from .config import ConfigError, SimConfig
from .estimation import build_estimates
from .harness import (
    experiment_screening_intensity,
    experiment_screening_samples,
    experiment_screening_timing,
    experiment_vaccination_sweep,
    run_batch,
    run_to_end,
    summarize,
    variant,
    write_batch_csv,
    write_batch_summary_json,
    write_run_outputs,
)


def _immunity(value: str | None):
    if value is None:
        return None, False
    if value.lower() in ("permanent", "inf", "none"):
        return None, True
    return int(value), True


CONFIG_OPTIONS = [
    click.option("--config", "config_path", type=click.Path(exists=True), default=None,
                 help="JSON SimConfig to start from (flags override it)."),
    click.option("--population-size", type=int, default=None),
    click.option("--worker-share", type=float, default=None,
                 help="Share of 20-65s working outside the home."),
    click.option("--worker-contact-bonus", type=int, default=None),
    click.option("--age-distribution", type=str, default=None,
                 help='JSON bands, e.g. [[0,19,0.24],[20,64,0.52],[65,100,0.24]].'),
    click.option("--p-transmission", type=float, default=None),
    click.option("--ambient-contacts", type=int, default=None),
    click.option("--incubation-mean-days", type=int, default=None),
    click.option("--incubation-max-days", type=int, default=None),
    click.option("--illness-mean-days", type=int, default=None),
    click.option("--illness-spread-days", type=int, default=None),
    click.option("--asymptomatic-share", type=float, default=None),
    click.option("--serious-duration-factor", type=float, default=None),
    click.option("--recovery-immunity-days", type=str, default=None,
                 help="Days of immunity after recovery, or 'permanent'."),
    click.option("--screening/--no-screening", "screening_enabled", default=None),
    click.option("--daily-tests", type=int, default=None),
    click.option("--test-trigger", type=float, default=None,
                 help="Symptomatic share that starts the testing campaign."),
    click.option("--test-target", type=click.Choice(["random", "symptomatic", "elderly", "workers"]),
                 default=None),
    click.option("--sensitivity", type=float, default=None),
    click.option("--specificity", type=float, default=None),
    click.option("--retest-cooldown-days", type=int, default=None),
    click.option("--false-positive-quarantine-days", type=int, default=None),
    click.option("--vaccination/--no-vaccination", "vaccination_enabled", default=None),
    click.option("--vax-trigger", type=float, default=None,
                 help="Infected share that starts the vaccination campaign."),
    click.option("--daily-doses", type=int, default=None),
    click.option("--vax-strategy", type=click.Choice(["random", "risk", "contacts"]),
                 default=None),
    click.option("--vax-efficiency", type=float, default=None),
    click.option("--vaccine-immunity-days", type=str, default=None,
                 help="Days of vaccine immunity, or 'permanent'."),
    click.option("--initial-infected", type=int, default=None),
    click.option("--max-days", type=int, default=None),
    click.option("--seed", type=int, default=None),
]


def config_options(fn):
    for option in reversed(CONFIG_OPTIONS):
        fn = option(fn)
    return fn


def build_config(kw: dict) -> SimConfig:
    """SimConfig from an optional JSON file plus any CLI overrides."""
    path = kw.pop("config_path", None)
    if path:
        cfg = SimConfig.from_json(Path(path).read_text())
    else:
        cfg = SimConfig()

    population: dict = {}
    disease: dict = {}
    screening: dict = {}
    vaccination: dict = {}
    top: dict = {}

    def put(section, key, value, transform=None):
        if value is not None:
            section[key] = transform(value) if transform else value

    put(population, "size", kw.pop("population_size"))
    put(population, "worker_share_20_65", kw.pop("worker_share"))
    put(population, "worker_contact_bonus", kw.pop("worker_contact_bonus"))
    put(population, "age_distribution", kw.pop("age_distribution"),
        lambda s: [tuple(b) for b in json.loads(s)])
    put(disease, "p_transmission", kw.pop("p_transmission"))
    put(disease, "ambient_contacts", kw.pop("ambient_contacts"))
    put(disease, "incubation_mean_days", kw.pop("incubation_mean_days"))
    put(disease, "incubation_max_days", kw.pop("incubation_max_days"))
    put(disease, "illness_mean_days", kw.pop("illness_mean_days"))
    put(disease, "illness_spread_days", kw.pop("illness_spread_days"))
    put(disease, "asymptomatic_share_under_65", kw.pop("asymptomatic_share"))
    put(disease, "serious_duration_factor", kw.pop("serious_duration_factor"))
    value, given = _immunity(kw.pop("recovery_immunity_days"))
    if given:
        disease["recovery_immunity_days"] = value
    put(screening, "enabled", kw.pop("screening_enabled"))
    put(screening, "daily_tests", kw.pop("daily_tests"))
    put(screening, "trigger_symptomatic_share", kw.pop("test_trigger"))
    put(screening, "target", kw.pop("test_target"))
    sensitivity = kw.pop("sensitivity")
    specificity = kw.pop("specificity")
    if sensitivity is not None or specificity is not None:
        params = {"sensitivity": cfg.screening.params.sensitivity,
                  "specificity": cfg.screening.params.specificity}
        if sensitivity is not None:
            params["sensitivity"] = sensitivity
        if specificity is not None:
            params["specificity"] = specificity
        screening["params"] = params
    put(screening, "retest_cooldown_days", kw.pop("retest_cooldown_days"))
    put(screening, "false_positive_quarantine_days",
        kw.pop("false_positive_quarantine_days"))
    put(vaccination, "enabled", kw.pop("vaccination_enabled"))
    put(vaccination, "trigger_infected_share", kw.pop("vax_trigger"))
    put(vaccination, "daily_doses", kw.pop("daily_doses"))
    put(vaccination, "strategy", kw.pop("vax_strategy"))
    put(vaccination, "efficiency", kw.pop("vax_efficiency"))
    value, given = _immunity(kw.pop("vaccine_immunity_days"))
    if given:
        vaccination["vaccine_immunity_days"] = value
    put(top, "initial_infected", kw.pop("initial_infected"))
    put(top, "max_days", kw.pop("max_days"))
    put(top, "seed", kw.pop("seed"))

    cfg = variant(cfg, population=population, disease=disease,
                  screening=screening, vaccination=vaccination)
    for key, value in top.items():
        setattr(cfg, key, value)
    cfg.validate()
    return cfg


@click.group()
def main():
    """Agent-based epidemic simulator: screening and vaccination strategies."""


@main.command()
@config_options
@click.option("--out", "out_dir", type=click.Path(), default="episim-out",
              show_default=True, help="Directory for run artifacts.")
def run(out_dir, **kw):
    """One seeded run; writes history.csv, estimates.csv, summary.json."""
    try:
        cfg = build_config(kw)
    except (ConfigError, ValueError, TypeError) as exc:
        raise click.ClickException(str(exc))
    state = run_to_end(cfg)
    summary = summarize(state, cfg.seed)
    write_run_outputs(
        cfg, state.history, build_estimates(state), summary, out_dir,
        test_log=state.test_log, agents=state.agents,
    )
    click.echo(json.dumps({
        "duration_days": summary.duration_days,
        "serious_total": summary.serious_total,
        "peak_daily_new_infections": summary.peak_daily_new_infections,
        "infected_total": summary.infected_total,
        "vaccines_total": summary.vaccines_total,
        "out": str(out_dir),
    }, indent=2))


@main.command()
@config_options
@click.option("--runs", type=int, default=20, show_default=True)
@click.option("--base-seed", type=int, default=0, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--out", "out_dir", type=click.Path(), default="episim-out",
              show_default=True)
def batch(runs, base_seed, jobs, out_dir, **kw):
    """Average the five indicators over a range of seeds; writes batch.csv."""
    try:
        cfg = build_config(kw)
    except (ConfigError, ValueError, TypeError) as exc:
        raise click.ClickException(str(exc))
    result = run_batch(cfg, n_runs=runs, base_seed=base_seed, jobs=jobs)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_batch_csv(result, out / "batch.csv")
    write_batch_summary_json(result, out / "batch_summary.json")
    click.echo(json.dumps({"means": result.means, "stds": result.stds}, indent=2))


EXPERIMENTS = {
    "samples": experiment_screening_samples,
    "intensity": experiment_screening_intensity,
    "timing": experiment_screening_timing,
    "vax-sweep": experiment_vaccination_sweep,
}


@main.command()
@click.argument("name", type=click.Choice(sorted(EXPERIMENTS)))
@config_options
@click.option("--runs", type=int, default=20, show_default=True)
@click.option("--base-seed", type=int, default=0, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--out", "out_dir", type=click.Path(), default="episim-out",
              show_default=True)
def experiment(name, runs, base_seed, jobs, out_dir, **kw):
    """Run one of the predefined experiment grids."""
    try:
        cfg = build_config(kw)
    except (ConfigError, ValueError, TypeError) as exc:
        raise click.ClickException(str(exc))
    report = EXPERIMENTS[name](
        cfg, n_runs=runs, base_seed=base_seed, out_dir=out_dir, jobs=jobs
    )
    click.echo(f"wrote {name} report under {out_dir}/")
    del report


@main.command()
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", type=str, default=None,
              help="Bind address; defaults to $EPISIM_HOST or 127.0.0.1.")
@click.option("--static", "static_dir", type=click.Path(exists=True), default=None,
              help="Directory with the built dashboard (defaults to frontend/dist "
                   "next to the package, when present).")
def serve(port, host, static_dir):
    """Run the live session server (WebSocket + JSON over HTTP)."""
    import uvicorn

    from .service import create_app

    if host is None:
        host = os.environ.get("EPISIM_HOST", "127.0.0.1")
    if static_dir is None:
        candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        if candidate.is_dir():
            static_dir = str(candidate)
    app = create_app(static_dir=static_dir)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    sys.exit(main())
