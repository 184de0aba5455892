"""Agent-based epidemic simulator: screening and vaccination strategy lab."""

from .config import SimConfig, make_state
from .dynamics import DailyRecord, DiseaseConfig, SimState, step
from .estimation import EstimateSeries, build_estimates
from .harness import BatchSummary, RunSummary, run_batch, run_simulation
from .population import Agent, PopulationConfig, State
from .screening import ScreeningConfig, TestParams, TestTarget
from .vaccination import VaccinationConfig, VaccStrategy

__all__ = [
    "Agent",
    "BatchSummary",
    "DailyRecord",
    "DiseaseConfig",
    "EstimateSeries",
    "PopulationConfig",
    "RunSummary",
    "ScreeningConfig",
    "SimConfig",
    "SimState",
    "State",
    "TestParams",
    "TestTarget",
    "VaccStrategy",
    "VaccinationConfig",
    "build_estimates",
    "make_state",
    "run_batch",
    "run_simulation",
    "step",
]

__version__ = "0.1.0"
