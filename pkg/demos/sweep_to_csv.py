"""
Budget sweep
============

Runs every multi-target method over a range of budgets and writes one CSV row
per (budget, method, seed).
"""
from __future__ import annotations

import sys

from netintervene.harness import ExperimentConfig, TargetRule, cpep_like, mean_by, rows_to_csv, sweep
from netintervene.plan import SolverConfig

g = cpep_like(seed=0)
cfg = ExperimentConfig("cpep:0", "oisa", SolverConfig(omega_b=0, omega_c=0, omega_d=0),
                       TargetRule(pick_fraction=0.05))

rows = sweep(cfg, "k", [4, 8, 16, 32], algorithms=["oisa", "bum", "sim"], seeds=range(5), graph=g)

out = sys.argv[1] if len(sys.argv) > 1 else "sweep.csv"
with open(out, "w") as fh:
    fh.write(rows_to_csv(rows))
print("wrote", len(rows), "rows to", out)

for algo in ("oisa", "bum", "sim"):
    means = mean_by(rows, "max_lcc_after", algorithm=algo)
    print(f"{algo:>5}", {k: round(v, 3) for k, v in means.items()})
