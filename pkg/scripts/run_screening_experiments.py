#!/usr/bin/env python3
"""Run the three screening experiments (targeting samples, test intensity,
campaign timing) and drop CSV/JSON reports under an output directory.

Usage: python scripts/run_screening_experiments.py [OUT_DIR] [N_RUNS]
"""

import sys
from pathlib import Path

from episim import SimConfig
from episim.harness import (
    experiment_screening_intensity,
    experiment_screening_samples,
    experiment_screening_timing,
)

out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("episim-out")
n_runs = int(sys.argv[2]) if len(sys.argv) > 2 else 20

cfg = SimConfig()
for name, fn in [
    ("samples", experiment_screening_samples),
    ("intensity", experiment_screening_intensity),
    ("timing", experiment_screening_timing),
]:
    print(f"running {name} ({n_runs} runs per cell) ...", flush=True)
    fn(cfg, n_runs=n_runs, base_seed=0, out_dir=out_dir, jobs=2)
print(f"reports written under {out_dir}/")
