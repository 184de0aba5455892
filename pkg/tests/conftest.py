"""Shared fixtures and helpers for the suite."""

import numpy as np
import pytest

from episim.dynamics import SimState, DiseaseConfig
from episim.population import Agent
from episim.screening import ScreeningConfig
from episim.vaccination import VaccinationConfig


def make_agents(n, age=30, contacts=5, risk=0.3):
    return [
        Agent(id=i, age=age, daily_contacts=contacts, risk_factor=risk)
        for i in range(n)
    ]


def make_state(agents, seed=0, disease=None, screening=None, vaccination=None):
    return SimState(
        agents=agents,
        rng=np.random.default_rng(seed),
        disease=disease or DiseaseConfig(),
        screening=screening or ScreeningConfig(),
        vaccination=vaccination or VaccinationConfig(),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def samples_report():
    """Fig-2-style targeting experiment, shared across test modules."""
    from episim.config import SimConfig
    from episim.harness import experiment_screening_samples

    return experiment_screening_samples(SimConfig(), n_runs=20, base_seed=0, jobs=2)


# results of acceptance criteria, printed as a summary at the end of the run
ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def record_criterion(name: str, passed: bool, detail: str = "") -> None:
    ACCEPTANCE_RESULTS.append((name, passed, detail))
    status = "PASS" if passed else "FAIL"
    print(f"[acceptance] {name}: {status}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, passed, detail in ACCEPTANCE_RESULTS:
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"{name}: {status}  {detail}")
