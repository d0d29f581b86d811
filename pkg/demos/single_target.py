"""
One tightly knit node, a handful of new ties
============================================

A walk through the single-target solver on a small synthetic community graph.
"""
from __future__ import annotations

from netintervene import SolverConfig, crpd, crpd_baseline, enum_s
from netintervene.harness import TargetRule, cpep_like, select_targets

# ten communities of 23 people each, rewired until the mean LCC sits near 0.71
g = cpep_like(seed=0)
print(g, "mean LCC", round(float(g.lcc_array().mean()), 3))

# draw one node whose ego network is almost a clique
t = select_targets(g, TargetRule("single_high_lcc", threshold=0.8), seed=1)[0]
print("target", t, "degree", g.degree(t), "LCC", g.lcc_fraction(t))

# no node may gain more than 0.12 LCC; the centrality floors are the defaults
cfg = SolverConfig(k=3, tau=0.12)

# the plain greedy run, with the candidates it knocked out along the way
F, removed = crpd_baseline(g, t, cfg.k, config=cfg)
print("greedy edges", F)
print("knocked out", removed)

# full solver: greedy plus one reseeded run, better of the two kept
plan = crpd(g, t, cfg)
print("chosen run", plan.diagnostics["chosen_run"], "edges", plan.edges)
print("LCC", plan.objective_before, "->", plan.objective, f"({plan.objective_exact})")
for v in plan.violations:
    print("  unmet:", v)

# exhaustive search grows as C(n, k); two edges on 230 nodes is still quick
small = cfg.replace(k=2, omega_b=0, omega_c=0, omega_d=0)
print("k=2 greedy", crpd(g, t, small).objective_exact, "exhaustive", enum_s(g, t, small).objective_exact)
