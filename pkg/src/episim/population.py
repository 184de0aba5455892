"""Heterogeneous agent population: ages, risk factors, contact counts."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from enum import IntEnum
from pathlib import Path

import numpy as np


class State(IntEnum):
    """Epidemiological status of an agent."""

    SUSCEPTIBLE = 0
    INCUBATING = 1
    ASYMPTOMATIC = 2
    SYMPTOMATIC = 3
    RECOVERED = 4


#: states in which an agent carries (and can transmit) the virus
INFECTED_STATES = (State.INCUBATING, State.ASYMPTOMATIC, State.SYMPTOMATIC)

STATE_NAMES = {
    State.SUSCEPTIBLE: "susceptible",
    State.INCUBATING: "incubating",
    State.ASYMPTOMATIC: "asymptomatic",
    State.SYMPTOMATIC: "symptomatic",
    State.RECOVERED: "recovered",
}


@dataclass(slots=True)
class Agent:
    """One individual.

    ``immunity_days_left`` is an integer countdown, or ``None`` for
    permanent immunity. ``quarantine_days_left`` uses a large sentinel
    (see :data:`QUARANTINE_UNTIL_RECOVERY`) for isolate-until-recovered.
    """

    id: int
    age: int
    state: State = State.SUSCEPTIBLE
    days_in_state: int = 0
    state_duration: int = 1
    works_outside: bool = False
    risk_factor: float = 0.0
    daily_contacts: int = 1
    serious: bool = False
    vaccinated: bool = False
    immunity_days_left: int | None = 0
    quarantine_days_left: int = 0
    last_tested_day: int | None = None
    times_sick: int = 0
    doses_received: int = 0

    @property
    def infected(self) -> bool:
        return State.INCUBATING <= self.state <= State.SYMPTOMATIC

    @property
    def quarantined(self) -> bool:
        return self.quarantine_days_left > 0


#: quarantine sentinel for "isolated until recovery"; cleared when the
#: agent reaches Recovered, so it never actually counts down to zero.
QUARANTINE_UNTIL_RECOVERY = 10**9

#: age bands as (low, high, share); stylised western-European shape with a
#: substantial retired class.
DEFAULT_AGE_BANDS: list[tuple[int, int, float]] = [
    (0, 19, 0.24),
    (20, 64, 0.52),
    (65, 100, 0.24),
]


class ConfigError(ValueError):
    """Raised when a run configuration is invalid."""


@dataclass
class PopulationConfig:
    size: int = 2000
    age_distribution: list[tuple[int, int, float]] = field(
        default_factory=lambda: [tuple(b) for b in DEFAULT_AGE_BANDS]
    )
    worker_share_20_65: float = 0.5
    # unified contact mechanism: workers mingle more than homebound agents
    worker_contact_bonus: int = 4

    def validate(self) -> None:
        if self.size < 1:
            raise ConfigError(f"population size must be >= 1, got {self.size}")
        total = sum(share for _, _, share in self.age_distribution)
        if abs(total - 1.0) > 1e-9:
            raise ConfigError(f"age distribution shares sum to {total}, expected 1")
        for low, high, share in self.age_distribution:
            if not (0 <= low <= high <= 100) or share < 0:
                raise ConfigError(f"bad age band ({low}, {high}, {share})")
        if not 0.0 <= self.worker_share_20_65 <= 1.0:
            raise ConfigError("worker_share_20_65 must be in [0, 1]")


def assign_risk_factor(age: int, rng: np.random.Generator) -> float:
    """Risk of a serious form, increasing with age, clamped to [0, 1]."""
    u = rng.uniform(0.0, 0.3)
    return min(1.0, max(0.0, 0.7 * (age / 100.0) + u))


def assign_daily_contacts(age: int, risk: float, rng: np.random.Generator) -> int:
    """Daily contact count: individual part, plus a young-age part, minus
    a self-limiting part for risk-aware agents. Never below 1."""
    u1 = rng.uniform(1.0, 6.0)
    u2 = rng.uniform(0.0, 10.0)
    u3 = rng.uniform(0.0, 4.0)
    return max(1, round(u1 + (1.0 - age / 100.0) * u2 - risk * u3))


def _sample_age(bands, rng: np.random.Generator) -> int:
    r = rng.random()
    acc = 0.0
    for low, high, share in bands:
        acc += share
        if r < acc:
            return int(rng.integers(low, high + 1))
    low, high, _ = bands[-1]
    return int(rng.integers(low, high + 1))


def init_population(cfg: PopulationConfig, rng: np.random.Generator) -> list[Agent]:
    """Create cfg.size susceptible agents, in index order for reproducibility."""
    cfg.validate()
    agents = []
    for i in range(cfg.size):
        age = _sample_age(cfg.age_distribution, rng)
        works = 20 <= age <= 65 and rng.random() < cfg.worker_share_20_65
        risk = assign_risk_factor(age, rng)
        contacts = assign_daily_contacts(age, risk, rng)
        if works:
            contacts += cfg.worker_contact_bonus
        agents.append(
            Agent(
                id=i,
                age=age,
                works_outside=works,
                risk_factor=risk,
                daily_contacts=contacts,
            )
        )
    return agents


POPULATION_CSV_COLUMNS = [
    "id",
    "age",
    "works_outside",
    "risk_factor",
    "daily_contacts",
    "times_sick",
    "doses_received",
]


def write_population_csv(agents: list[Agent], path: str | Path) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(POPULATION_CSV_COLUMNS)
        for a in agents:
            w.writerow(
                [
                    a.id,
                    a.age,
                    int(a.works_outside),
                    repr(a.risk_factor),
                    a.daily_contacts,
                    a.times_sick,
                    a.doses_received,
                ]
            )


def read_population_csv(path: str | Path) -> list[dict]:
    """Parse a snapshot back into plain dicts (typed like the writer)."""
    rows = []
    with open(path, newline="") as f:
        for rec in csv.DictReader(f):
            rows.append(
                {
                    "id": int(rec["id"]),
                    "age": int(rec["age"]),
                    "works_outside": bool(int(rec["works_outside"])),
                    "risk_factor": float(rec["risk_factor"]),
                    "daily_contacts": int(rec["daily_contacts"]),
                    "times_sick": int(rec["times_sick"]),
                    "doses_received": int(rec["doses_received"]),
                }
            )
    return rows
