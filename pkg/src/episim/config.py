"""Full run configuration: composition, JSON round-trip, state factory."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .dynamics import DiseaseConfig, SimState, introduce_infected
from .population import ConfigError, PopulationConfig, init_population
from .screening import ScreeningConfig, TestParams, TestTarget
from .vaccination import VaccinationConfig, VaccStrategy

__all__ = [
    "SimConfig",
    "make_state",
    "ConfigError",
    "screening_config_from_dict",
    "vaccination_config_from_dict",
]


def screening_config_from_dict(d: dict) -> ScreeningConfig:
    s = dict(d)
    if isinstance(s.get("params"), dict):
        s["params"] = TestParams(**s["params"])
    if "target" in s:
        s["target"] = TestTarget(s["target"])
    cfg = ScreeningConfig(**s)
    cfg.validate()
    if cfg.enabled and cfg.params.sensitivity + cfg.params.specificity <= 1.0:
        raise ConfigError(
            "screening requires sensitivity + specificity > 1 for the "
            "prevalence estimator to be defined"
        )
    return cfg


def vaccination_config_from_dict(d: dict) -> VaccinationConfig:
    v = dict(d)
    if "strategy" in v:
        v["strategy"] = VaccStrategy(v["strategy"])
    cfg = VaccinationConfig(**v)
    cfg.validate()
    return cfg


@dataclass
class SimConfig:
    population: PopulationConfig = field(default_factory=PopulationConfig)
    disease: DiseaseConfig = field(default_factory=DiseaseConfig)
    screening: ScreeningConfig = field(default_factory=ScreeningConfig)
    vaccination: VaccinationConfig = field(default_factory=VaccinationConfig)
    initial_infected: int = 1
    max_days: int = 1000
    seed: int = 0

    def __post_init__(self) -> None:
        # accept plain dicts for the sections, handy in tests and JSON bodies
        if isinstance(self.population, dict):
            self.population = PopulationConfig(**self.population)
        if isinstance(self.disease, dict):
            self.disease = DiseaseConfig(**self.disease)
        if isinstance(self.screening, dict):
            s = dict(self.screening)
            if isinstance(s.get("params"), dict):
                s["params"] = TestParams(**s["params"])
            if "target" in s:
                s["target"] = TestTarget(s["target"])
            self.screening = ScreeningConfig(**s)
        if isinstance(self.vaccination, dict):
            v = dict(self.vaccination)
            if "strategy" in v:
                v["strategy"] = VaccStrategy(v["strategy"])
            self.vaccination = VaccinationConfig(**v)

    def validate(self) -> None:
        self.population.validate()
        self.disease.validate()
        self.screening.validate()
        self.vaccination.validate()
        if self.initial_infected < 0:
            raise ConfigError("initial_infected must be >= 0")
        if self.max_days < 0:
            raise ConfigError("max_days must be >= 0")
        if self.screening.enabled:
            p = self.screening.params
            if p.sensitivity + p.specificity <= 1.0:
                raise ConfigError(
                    "screening requires sensitivity + specificity > 1 for the "
                    "prevalence estimator to be defined"
                )

    def to_dict(self) -> dict:
        d = asdict(self)
        d["population"]["age_distribution"] = [
            list(band) for band in self.population.age_distribution
        ]
        d["screening"]["target"] = TestTarget(self.screening.target).value
        d["vaccination"]["strategy"] = VaccStrategy(self.vaccination.strategy).value
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SimConfig":
        d = dict(d)
        pop = dict(d.pop("population", {}))
        if "age_distribution" in pop:
            pop["age_distribution"] = [tuple(b) for b in pop["age_distribution"]]
        dis = dict(d.pop("disease", {}))
        scr = dict(d.pop("screening", {}))
        if "target" in scr:
            scr["target"] = TestTarget(scr["target"])
        if "params" in scr:
            scr["params"] = TestParams(**scr["params"])
        vac = dict(d.pop("vaccination", {}))
        if "strategy" in vac:
            vac["strategy"] = VaccStrategy(vac["strategy"])
        known = {"initial_infected", "max_days", "seed"}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown config fields: {sorted(extra)}")
        return cls(
            population=PopulationConfig(**pop),
            disease=DiseaseConfig(**dis),
            screening=ScreeningConfig(**scr),
            vaccination=VaccinationConfig(**vac),
            **d,
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SimConfig":
        return cls.from_dict(json.loads(text))

    def fingerprint(self) -> str:
        canon = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()[:16]


def make_state(cfg: SimConfig, seed: int | None = None) -> SimState:
    """Build a day-0 state: fresh population plus the configured index cases."""
    cfg.validate()
    rng = np.random.default_rng(cfg.seed if seed is None else seed)
    agents = init_population(cfg.population, rng)
    state = SimState(
        agents=agents,
        rng=rng,
        disease=cfg.disease,
        screening=cfg.screening,
        vaccination=cfg.vaccination,
    )
    if cfg.initial_infected:
        introduce_infected(state, cfg.initial_infected)
    return state
