"""Daily testing campaign: trigger, target selection, imperfect tests, quarantine."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np

from .population import (
    QUARANTINE_UNTIL_RECOVERY,
    Agent,
    ConfigError,
    State,
)

if TYPE_CHECKING:
    from .dynamics import SimState


class TestTarget(str, Enum):
    __test__ = False  # not a pytest class

    RANDOM = "random"
    SYMPTOMATIC = "symptomatic"
    ELDERLY = "elderly"
    WORKERS = "workers"


@dataclass
class TestParams:
    __test__ = False  # not a pytest class

    sensitivity: float = 0.9
    specificity: float = 0.9

    def validate(self) -> None:
        if not 0.0 <= self.sensitivity <= 1.0:
            raise ConfigError(f"sensitivity must be in [0, 1], got {self.sensitivity}")
        if not 0.0 <= self.specificity <= 1.0:
            raise ConfigError(f"specificity must be in [0, 1], got {self.specificity}")


@dataclass
class ScreeningConfig:
    enabled: bool = False
    daily_tests: int = 3
    # share of the population symptomatic before the campaign starts; 0 = immediately
    trigger_symptomatic_share: float = 0.0
    target: TestTarget = TestTarget.RANDOM
    retest_cooldown_days: int = 7
    false_positive_quarantine_days: int = 14
    params: TestParams = field(default_factory=TestParams)

    def __post_init__(self) -> None:
        if isinstance(self.params, dict):
            self.params = TestParams(**self.params)
        self.target = TestTarget(self.target)

    def validate(self) -> None:
        if self.daily_tests < 0:
            raise ConfigError("daily_tests must be >= 0")
        if not 0.0 <= self.trigger_symptomatic_share <= 1.0:
            raise ConfigError("trigger_symptomatic_share must be in [0, 1]")
        if self.retest_cooldown_days < 0 or self.false_positive_quarantine_days < 0:
            raise ConfigError("cooldown and quarantine durations must be >= 0")
        self.params.validate()


POSITIVE = "positive"
NEGATIVE = "negative"
TRUTH_INFECTED = "infected"
TRUTH_NOT_INFECTED = "not-infected"


@dataclass
class TestResult:
    """One administered test; truth is simulator-side bookkeeping only and
    never feeds back into estimation."""

    __test__ = False  # not a pytest class

    agent_id: int
    day: int
    outcome: str
    truth: str


def campaign_active(state: "SimState", cfg: ScreeningConfig) -> bool:
    """True once the symptomatic share has ever reached the trigger (latching)."""
    if state.screening_latched:
        return True
    symptomatic = sum(1 for a in state.agents if a.state == State.SYMPTOMATIC)
    if symptomatic / len(state.agents) >= cfg.trigger_symptomatic_share:
        state.screening_latched = True
    return state.screening_latched


def _matches(agent: Agent, target: TestTarget) -> bool:
    if target == TestTarget.RANDOM:
        return True
    if target == TestTarget.SYMPTOMATIC:
        return agent.state == State.SYMPTOMATIC
    if target == TestTarget.ELDERLY:
        return agent.age >= 65
    return agent.works_outside


def select_test_targets(
    state: "SimState", cfg: ScreeningConfig, rng: np.random.Generator
) -> list[Agent]:
    """Up to daily_tests agents from the strategy's pool, uniformly sampled.

    Quarantined agents and agents tested within the retest cooldown are
    never eligible; an undersized pool is returned whole (no spillover)."""
    day = state.day
    cooldown = cfg.retest_cooldown_days
    pool = [
        a
        for a in state.agents
        if a.quarantine_days_left == 0
        and (a.last_tested_day is None or day - a.last_tested_day >= cooldown)
        and _matches(a, cfg.target)
    ]
    if len(pool) <= cfg.daily_tests:
        return pool
    picks = rng.choice(len(pool), size=cfg.daily_tests, replace=False)
    return [pool[i] for i in picks]


def administer_test(
    agent: Agent,
    params: TestParams,
    day: int,
    rng: np.random.Generator,
    false_positive_quarantine_days: int = 14,
) -> TestResult:
    """Run one imperfect test and apply the quarantine consequences."""
    infected = agent.infected
    if infected:
        positive = rng.random() < params.sensitivity
    else:
        positive = rng.random() < 1.0 - params.specificity
    agent.last_tested_day = day
    if positive:
        if infected:
            agent.quarantine_days_left = QUARANTINE_UNTIL_RECOVERY
        else:
            agent.quarantine_days_left = false_positive_quarantine_days
    return TestResult(
        agent_id=agent.id,
        day=day,
        outcome=POSITIVE if positive else NEGATIVE,
        truth=TRUTH_INFECTED if infected else TRUTH_NOT_INFECTED,
    )


def run_screening_phase(
    state: "SimState", cfg: ScreeningConfig, rng: np.random.Generator
) -> tuple[int, int]:
    """Test today's targets; returns (tests_done, positives)."""
    targets = select_test_targets(state, cfg, rng)
    positives = 0
    for agent in targets:
        result = administer_test(
            agent, cfg.params, state.day, rng, cfg.false_positive_quarantine_days
        )
        state.test_log.append(result)
        if result.outcome == POSITIVE:
            positives += 1
    return len(targets), positives


TEST_LOG_CSV_COLUMNS = ["day", "agent_id", "outcome", "truth"]


def write_test_log_csv(results: list[TestResult], path: str | Path) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(TEST_LOG_CSV_COLUMNS)
        for r in results:
            w.writerow([r.day, r.agent_id, r.outcome, r.truth])


def read_test_log_csv(path: str | Path) -> list[TestResult]:
    out = []
    with open(path, newline="") as f:
        for rec in csv.DictReader(f):
            out.append(
                TestResult(
                    agent_id=int(rec["agent_id"]),
                    day=int(rec["day"]),
                    outcome=rec["outcome"],
                    truth=rec["truth"],
                )
            )
    return out
