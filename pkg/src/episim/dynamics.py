"""Daily simulation loop: contacts, transmission, progression, waning."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .population import Agent, ConfigError, State
from .screening import ScreeningConfig, campaign_active, run_screening_phase
from .vaccination import (
    VaccinationConfig,
    eligible_candidates,
    maybe_serious_form,
    prioritize,
    vaccinate,
    vaccination_active,
)


@dataclass
class DiseaseConfig:
    # per-contact transmission probability; calibrated so the default
    # unmitigated run makes a single wave peaking in days 20-120 and
    # infecting >= 80% of the population (see tests/test_acceptance.py)
    p_transmission: float = 0.013
    # background encounters every agent has per day (queues, transit,
    # deliveries) on top of their personal daily_contacts; keeps exposure
    # increasing with contact count without making it purely proportional
    ambient_contacts: int = 6
    incubation_mean_days: int = 6
    incubation_max_days: int = 20
    illness_mean_days: int = 21
    # symptomatic/asymptomatic illness lasts uniform(mean - spread, mean + spread)
    illness_spread_days: int = 7
    asymptomatic_share_under_65: float = 0.3
    serious_duration_factor: float = 1.5
    recovery_immunity_days: int | None = None  # None = permanent

    def validate(self) -> None:
        for name in ("p_transmission", "asymptomatic_share_under_65"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1], got {v}")
        if self.incubation_mean_days < 1 or self.incubation_max_days < 1:
            raise ConfigError("incubation durations must be >= 1")
        if self.illness_mean_days - self.illness_spread_days < 1:
            raise ConfigError("illness duration range must stay >= 1")
        if self.ambient_contacts < 0:
            raise ConfigError("ambient_contacts must be >= 0")
        if self.serious_duration_factor < 1.0:
            raise ConfigError("serious_duration_factor must be >= 1")
        if self.recovery_immunity_days is not None and self.recovery_immunity_days < 1:
            raise ConfigError("recovery_immunity_days must be >= 1 or None")


@dataclass
class DailyRecord:
    """Counts for one simulated day. Census fields sum to population size."""

    day: int
    susceptible: int
    incubating: int
    asymptomatic: int
    symptomatic: int
    recovered: int
    new_infections: int
    new_serious: int
    tests_done: int
    positives: int
    doses_given: int
    in_quarantine: int
    lockdown_active: bool

    @property
    def census(self) -> tuple[int, int, int, int, int]:
        return (
            self.susceptible,
            self.incubating,
            self.asymptomatic,
            self.symptomatic,
            self.recovered,
        )

    @property
    def true_infected(self) -> int:
        return self.incubating + self.asymptomatic + self.symptomatic


@dataclass
class SimState:
    """Mutable state of one run; owned and stepped by a single caller."""

    agents: list[Agent]
    rng: np.random.Generator
    disease: DiseaseConfig
    screening: ScreeningConfig
    vaccination: VaccinationConfig
    day: int = 0
    lockdown: bool = False
    history: list[DailyRecord] = field(default_factory=list)
    test_log: list = field(default_factory=list)
    screening_latched: bool = False
    vaccination_latched: bool = False
    cumulative_infections: int = 0
    _contact_cdf: np.ndarray | None = None

    @property
    def population_size(self) -> int:
        return len(self.agents)

    def census(self) -> tuple[int, int, int, int, int]:
        counts = [0, 0, 0, 0, 0]
        for a in self.agents:
            counts[a.state] += 1
        return tuple(counts)

    def infected_count(self) -> int:
        return sum(1 for a in self.agents if a.infected)

    def contact_cdf(self) -> np.ndarray:
        # contact counts are fixed at init, so the sampling weights are too
        if self._contact_cdf is None:
            weights = np.array([a.daily_contacts for a in self.agents], dtype=np.float64)
            self._contact_cdf = np.cumsum(weights)
        return self._contact_cdf


def sample_incubation_duration(disease: DiseaseConfig, rng: np.random.Generator) -> int:
    # geometric: right-skewed with the observed mean, capped at the max
    d = int(rng.geometric(1.0 / disease.incubation_mean_days))
    return min(d, disease.incubation_max_days)


def sample_illness_duration(disease: DiseaseConfig, rng: np.random.Generator) -> int:
    lo = disease.illness_mean_days - disease.illness_spread_days
    hi = disease.illness_mean_days + disease.illness_spread_days
    return int(rng.integers(lo, hi + 1))


def sample_contacts(
    agent: Agent, state: SimState, rng: np.random.Generator
) -> list[Agent]:
    """Pick ``agent.daily_contacts`` distinct partners, weighted by each
    candidate's own contact count; quarantined agents never appear."""
    agents = state.agents
    k = agent.daily_contacts
    cdf = state.contact_cdf()
    total = cdf[-1]
    out: list[Agent] = []
    seen = {agent.id}
    # rejection sampling against the static weight table; falls back to an
    # exact pass when too much of the population is excluded
    for _ in range(6):
        need = k - len(out)
        if need <= 0:
            return out
        draws = np.searchsorted(cdf, rng.random(2 * need) * total, side="right")
        for idx in draws:
            if idx in seen:
                continue
            cand = agents[idx]
            if cand.quarantine_days_left > 0:
                continue
            seen.add(idx)
            out.append(cand)
            if len(out) == k:
                return out
    eligible = [
        a for a in agents if a.id != agent.id and a.quarantine_days_left == 0
    ]
    if len(eligible) <= k:
        return eligible
    pool = [a for a in eligible if a.id not in seen]
    weights = np.array([a.daily_contacts for a in pool], dtype=np.float64)
    idx = rng.choice(len(pool), size=k - len(out), replace=False, p=weights / weights.sum())
    out.extend(pool[i] for i in idx)
    return out


def _transmission_phase(state: SimState, rng: np.random.Generator) -> list[Agent]:
    """Exposure-driven transmission for one day; returns the agents infected.

    Each non-quarantined susceptible meets ``daily_contacts`` distinct
    partners drawn uniformly among the non-quarantined, and every
    infectious partner attempts one transmission. Implemented exactly via
    per-target hypergeometric draws of the infectious (and vaccinated)
    partner counts, which is equivalent to materialising the partner sets
    agent by agent but runs as a handful of vectorised draws.
    """
    agents = state.agents
    sus: list[Agent] = []
    n_eligible = 0
    inf_unvacc = 0
    inf_vacc = 0
    for a in agents:
        if a.quarantine_days_left > 0:
            continue
        n_eligible += 1
        if a.state == State.SUSCEPTIBLE:
            sus.append(a)
        elif a.infected:
            if a.vaccinated:
                inf_vacc += 1
            else:
                inf_unvacc += 1
    n_inf = inf_unvacc + inf_vacc
    if n_inf == 0 or not sus or n_eligible < 2:
        return []

    pool = n_eligible - 1  # candidates for each target exclude the target
    ambient = state.disease.ambient_contacts
    k = np.minimum(
        np.fromiter(
            (ambient + a.daily_contacts for a in sus), dtype=np.int64, count=len(sus)
        ),
        pool,
    )
    # infectious partners met by each susceptible target
    hits = rng.hypergeometric(n_inf, pool - n_inf, k)
    exposed = np.nonzero(hits > 0)[0]
    if exposed.size == 0:
        return []
    m = hits[exposed]
    if inf_vacc > 0:
        m_vacc = rng.hypergeometric(inf_vacc, inf_unvacc, m)
    else:
        m_vacc = np.zeros_like(m)
    m_unvacc = m - m_vacc

    eff = state.vaccination.efficiency
    p = state.disease.p_transmission
    target_vacc = np.fromiter(
        (sus[i].vaccinated for i in exposed), dtype=bool, count=exposed.size
    )
    p_base = np.where(target_vacc, p * (1.0 - eff), p)
    p_escape = (1.0 - p_base) ** m_unvacc * (1.0 - p_base * (1.0 - eff)) ** m_vacc
    infected_mask = rng.random(exposed.size) >= p_escape

    newly: list[Agent] = []
    for j in np.nonzero(infected_mask)[0]:
        target = sus[exposed[j]]
        target.state = State.INCUBATING
        target.days_in_state = 0
        target.state_duration = sample_incubation_duration(state.disease, rng)
        target.times_sick += 1
        newly.append(target)
    return newly


def try_transmit(
    source: Agent,
    target: Agent,
    disease: DiseaseConfig,
    vacc_efficiency: float,
    rng: np.random.Generator,
) -> bool:
    """Attempt one source->target transmission; mutates target on success."""
    if not source.infected or target.state != State.SUSCEPTIBLE:
        return False
    p = disease.p_transmission
    if source.vaccinated:
        p *= 1.0 - vacc_efficiency
    if target.vaccinated:
        p *= 1.0 - vacc_efficiency
    if rng.random() >= p:
        return False
    target.state = State.INCUBATING
    target.days_in_state = 0
    target.state_duration = sample_incubation_duration(disease, rng)
    target.times_sick += 1
    return True


def progress_state(
    agent: Agent,
    disease: DiseaseConfig,
    rng: np.random.Generator,
    vacc_efficiency: float = 0.9,
) -> Agent:
    """Advance one day inside a timed state, transitioning when it ends."""
    agent.days_in_state += 1
    if agent.days_in_state < agent.state_duration:
        return agent
    if agent.state == State.INCUBATING:
        asympt = (
            agent.age < 65
            and rng.random() < disease.asymptomatic_share_under_65
        )
        agent.state = State.ASYMPTOMATIC if asympt else State.SYMPTOMATIC
        agent.days_in_state = 0
        agent.state_duration = sample_illness_duration(disease, rng)
        if agent.state == State.SYMPTOMATIC:
            maybe_serious_form(
                agent, vacc_efficiency, rng,
                duration_factor=disease.serious_duration_factor,
            )
    elif agent.state in (State.ASYMPTOMATIC, State.SYMPTOMATIC):
        agent.state = State.RECOVERED
        agent.days_in_state = 0
        agent.state_duration = 1
        agent.serious = False
        agent.immunity_days_left = disease.recovery_immunity_days
        agent.quarantine_days_left = 0  # isolation ends with recovery
    return agent


def introduce_infected(state: SimState, n: int) -> None:
    """Turn up to n uniformly chosen susceptible agents into incubating cases."""
    if n < 0:
        raise ValueError("n must be >= 0")
    susceptible = [a for a in state.agents if a.state == State.SUSCEPTIBLE]
    if not susceptible or n == 0:
        return
    count = min(n, len(susceptible))
    picks = state.rng.choice(len(susceptible), size=count, replace=False)
    for i in picks:
        a = susceptible[i]
        a.state = State.INCUBATING
        a.days_in_state = 0
        a.state_duration = sample_incubation_duration(state.disease, state.rng)
        a.times_sick += 1
    # imports count as infection events but not as a day's new_infections,
    # which tracks transmission inside the population
    state.cumulative_infections += count


def set_lockdown(state: SimState, on: bool) -> None:
    state.lockdown = bool(on)


def step(state: SimState) -> DailyRecord:
    """Run one day: transmission, screening, vaccination, then progression."""
    state.day += 1
    rng = state.rng
    agents = state.agents
    eff = state.vaccination.efficiency

    new_infections = 0
    infected_today: set[int] = set()

    # 1. contacts and transmission
    if not state.lockdown:
        for tgt in _transmission_phase(state, rng):
            new_infections += 1
            infected_today.add(tgt.id)

    # 2. screening campaign
    tests_done = positives = 0
    if state.screening.enabled and campaign_active(state, state.screening):
        tests_done, positives = run_screening_phase(state, state.screening, rng)

    # 3. vaccination campaign
    doses_given = 0
    vaccinated_today: set[int] = set()
    if state.vaccination.enabled and vaccination_active(state, state.vaccination):
        candidates = eligible_candidates(state)
        for agent in prioritize(
            candidates, state.vaccination.strategy, state.vaccination.daily_doses, rng
        ):
            vaccinate(agent, state.vaccination)
            vaccinated_today.add(agent.id)
            doses_given += 1

    # 4. progression, waning, countdowns
    new_serious = 0
    in_quarantine = 0
    for a in agents:
        if a.quarantine_days_left > 0:
            in_quarantine += 1
        if a.infected:
            if a.id not in infected_today:  # progression starts tomorrow
                was_serious = a.serious
                progress_state(a, state.disease, rng, eff)
                if a.serious and not was_serious:
                    new_serious += 1
        elif a.state == State.RECOVERED:
            if a.immunity_days_left is not None:
                a.immunity_days_left -= 1
                if a.immunity_days_left <= 0:
                    a.immunity_days_left = 0
                    a.state = State.SUSCEPTIBLE
                    a.days_in_state = 0
                    a.vaccinated = False
        elif (
            a.vaccinated
            and a.immunity_days_left is not None
            and a.id not in vaccinated_today  # countdown starts tomorrow
        ):
            # susceptible + vaccinated: protection wears off
            a.immunity_days_left -= 1
            if a.immunity_days_left <= 0:
                a.immunity_days_left = 0
                a.vaccinated = False
        if a.quarantine_days_left > 0:
            a.quarantine_days_left -= 1

    state.cumulative_infections += new_infections
    census = state.census()
    record = DailyRecord(
        day=state.day,
        susceptible=census[0],
        incubating=census[1],
        asymptomatic=census[2],
        symptomatic=census[3],
        recovered=census[4],
        new_infections=new_infections,
        new_serious=new_serious,
        tests_done=tests_done,
        positives=positives,
        doses_given=doses_given,
        in_quarantine=in_quarantine,
        lockdown_active=state.lockdown,
    )
    state.history.append(record)
    return record


HISTORY_CSV_COLUMNS = [
    "day",
    "susceptible",
    "incubating",
    "asymptomatic",
    "symptomatic",
    "recovered",
    "new_infections",
    "new_serious",
    "tests_done",
    "positives",
    "doses_given",
    "in_quarantine",
    "lockdown_active",
]


def write_history_csv(history: list[DailyRecord], path: str | Path) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(HISTORY_CSV_COLUMNS)
        for r in history:
            w.writerow(
                [
                    r.day,
                    r.susceptible,
                    r.incubating,
                    r.asymptomatic,
                    r.symptomatic,
                    r.recovered,
                    r.new_infections,
                    r.new_serious,
                    r.tests_done,
                    r.positives,
                    r.doses_given,
                    r.in_quarantine,
                    int(r.lockdown_active),
                ]
            )


def read_history_csv(path: str | Path) -> list[DailyRecord]:
    out = []
    with open(path, newline="") as f:
        for rec in csv.DictReader(f):
            out.append(
                DailyRecord(
                    day=int(rec["day"]),
                    susceptible=int(rec["susceptible"]),
                    incubating=int(rec["incubating"]),
                    asymptomatic=int(rec["asymptomatic"]),
                    symptomatic=int(rec["symptomatic"]),
                    recovered=int(rec["recovered"]),
                    new_infections=int(rec["new_infections"]),
                    new_serious=int(rec["new_serious"]),
                    tests_done=int(rec["tests_done"]),
                    positives=int(rec["positives"]),
                    doses_given=int(rec["doses_given"]),
                    in_quarantine=int(rec["in_quarantine"]),
                    lockdown_active=bool(int(rec["lockdown_active"])),
                )
            )
    return out
