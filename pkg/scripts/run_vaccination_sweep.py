#!/usr/bin/env python3
"""Run the full 27-cell vaccination sweep (start x speed x strategy) and
print the per-strategy indicator tables.

Usage: python scripts/run_vaccination_sweep.py [OUT_DIR] [N_RUNS]
"""

import sys
from pathlib import Path

from episim import SimConfig
from episim.harness import experiment_vaccination_sweep

out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("episim-out")
n_runs = int(sys.argv[2]) if len(sys.argv) > 2 else 20

report = experiment_vaccination_sweep(
    SimConfig(), n_runs=n_runs, base_seed=0, out_dir=out_dir, jobs=2
)

for strategy in ("risk", "contacts", "random"):
    print(f"\n=== {strategy}-first ===")
    print(f"{'start':>6} {'speed':>6} {'duration':>9} {'serious':>8} "
          f"{'peak':>6} {'infected':>9} {'vaccines':>9}")
    for cell in report["cells"]:
        if cell["strategy"] != strategy:
            continue
        print(
            f"{cell['start']:>6} {cell['speed']:>6} "
            f"{cell['duration_days_mean']:>9.1f} {cell['serious_total_mean']:>8.1f} "
            f"{cell['peak_daily_new_infections_mean']:>6.1f} "
            f"{cell['infected_total_mean']:>9.1f} {cell['vaccines_total_mean']:>9.1f}"
        )
print(f"\nreports written under {out_dir}/vax-sweep/")
