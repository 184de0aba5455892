"""Vaccination campaign: trigger, candidate priority, doses, vaccine effects."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING

import numpy as np

from .population import Agent, ConfigError, State

if TYPE_CHECKING:
    from .dynamics import SimState


class VaccStrategy(str, Enum):
    RANDOM = "random"
    RISK_FIRST = "risk"
    CONTACTS_FIRST = "contacts"


@dataclass
class VaccinationConfig:
    enabled: bool = False
    # share of infected agents before the campaign starts; 0 = immediately
    trigger_infected_share: float = 0.0
    daily_doses: int = 30
    strategy: VaccStrategy = VaccStrategy.RANDOM
    # multiplies the probabilities to get infected, to transmit, and to
    # develop a serious form by (1 - efficiency)
    efficiency: float = 0.9
    vaccine_immunity_days: int | None = None  # None = permanent

    def __post_init__(self) -> None:
        self.strategy = VaccStrategy(self.strategy)

    def validate(self) -> None:
        if not 0.0 <= self.trigger_infected_share <= 1.0:
            raise ConfigError("trigger_infected_share must be in [0, 1]")
        if self.daily_doses < 0:
            raise ConfigError("daily_doses must be >= 0")
        if not 0.0 <= self.efficiency <= 1.0:
            raise ConfigError("efficiency must be in [0, 1]")
        if self.vaccine_immunity_days is not None and self.vaccine_immunity_days < 1:
            raise ConfigError("vaccine_immunity_days must be >= 1 or None")


def vaccination_active(state: "SimState", cfg: VaccinationConfig) -> bool:
    """True once the infected share has ever reached the trigger (latching)."""
    if state.vaccination_latched:
        return True
    infected = sum(1 for a in state.agents if a.infected)
    if infected / len(state.agents) >= cfg.trigger_infected_share:
        state.vaccination_latched = True
    return state.vaccination_latched


def eligible_candidates(state: "SimState") -> list[Agent]:
    """Agents that are not infected and not currently immune from any source."""
    return [
        a
        for a in state.agents
        if a.state == State.SUSCEPTIBLE
        and not a.vaccinated
        and a.immunity_days_left == 0
    ]


def prioritize(
    candidates: list[Agent],
    strategy: VaccStrategy,
    n: int,
    rng: np.random.Generator,
) -> list[Agent]:
    """Pick up to n candidates: by descending attribute for the targeted
    strategies (ties broken uniformly), or a uniform subset for Random."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0 or not candidates:
        return []
    if len(candidates) <= n and strategy == VaccStrategy.RANDOM:
        return list(candidates)
    order = rng.permutation(len(candidates))
    shuffled = [candidates[i] for i in order]
    if strategy == VaccStrategy.RANDOM:
        return shuffled[:n]
    if strategy == VaccStrategy.RISK_FIRST:
        shuffled.sort(key=lambda a: -a.risk_factor)
    else:
        shuffled.sort(key=lambda a: -a.daily_contacts)
    return shuffled[:n]


def vaccinate(agent: Agent, cfg: VaccinationConfig) -> None:
    """Inject one dose; protection starts immediately."""
    if agent.state != State.SUSCEPTIBLE or agent.vaccinated or agent.immunity_days_left != 0:
        raise ValueError(f"agent {agent.id} is not eligible for vaccination")
    agent.vaccinated = True
    agent.immunity_days_left = cfg.vaccine_immunity_days
    agent.doses_received += 1


def maybe_serious_form(
    agent: Agent,
    efficiency: float,
    rng: np.random.Generator,
    duration_factor: float = 1.5,
) -> bool:
    """Decide, at symptom onset, whether this episode turns serious.

    The probability is the agent's risk factor, cut by the vaccine when
    vaccinated; a serious episode lasts duration_factor times longer."""
    p = agent.risk_factor
    if agent.vaccinated:
        p *= 1.0 - efficiency
    if rng.random() < p:
        agent.serious = True
        agent.state_duration = round(agent.state_duration * duration_factor)
        return True
    return False
