#!/usr/bin/env python3
"""Plot true vs estimated epidemic curves from an estimates.csv.

Usage: python scripts/plot_estimates.py episim-out/estimates.csv [out.png]
"""

import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from episim.estimation import read_estimates_csv

series = read_estimates_csv(sys.argv[1])
out = sys.argv[2] if len(sys.argv) > 2 else "estimates.png"

fig, ax = plt.subplots(figsize=(9, 5))
ax.plot(series.days, series.true_infected, color="black", label="true infected")
ax.plot(series.days, series.est_proportional, color="red", alpha=0.8,
        label="proportionality rule")
ax.plot(series.days, series.est_predictive, color="blue", alpha=0.8,
        label="predictive values")
ax.set_xlabel("day")
ax.set_ylabel("infected")
ax.legend()
fig.tight_layout()
fig.savefig(out, dpi=150)
print(f"wrote {out}")
