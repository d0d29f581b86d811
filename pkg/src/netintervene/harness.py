"""Experiment plumbing: datasets, target selection, single runs and parameter sweeps.

A run loads a graph, picks targets under a seeded rule, calls one solver and
re-audits the returned plan from scratch.  Reports are JSON; everything except
the ``timing`` block is a pure function of the configuration and seed.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .baselines import bum, ea, enum_m, enum_s, gd, sim, tea
from .centrality import DEFAULT_SAMPLES, CentralityMode
from .crpd import crpd
from .graph import Graph, gnp_random_graph, load_edge_list
from .oisa import oisa
from .plan import ConfigError, InterventionPlan, SolverConfig, audit, triangle_and_degree
from .threshold import random_spec, realize

SAMPLED_ABOVE = 50_000

SINGLE_TARGET = {
    "crpd": lambda g, T, cfg: crpd(g, T[0], cfg),
    "crpd_baseline": lambda g, T, cfg: crpd(g, T[0], cfg, reselect=False),
    "enum_s": lambda g, T, cfg: enum_s(g, T[0], cfg),
}
MULTI_TARGET = {
    "oisa": lambda g, T, cfg: oisa(g, T, cfg),
    "bum": lambda g, T, cfg: bum(g, T, cfg),
    "sim": lambda g, T, cfg: sim(g, T, cfg),
    "enum_m": lambda g, T, cfg: enum_m(g, T, cfg),
    "ea": lambda g, T, cfg: ea(g, cfg),
    "tea": lambda g, T, cfg: tea(g, T, cfg),
    "gd": lambda g, T, cfg: gd(g, T, cfg),
}
ALGORITHMS = {**SINGLE_TARGET, **MULTI_TARGET}

SWEEP_AXES = ("k", "tau", "omega_b", "omega_c")
SWEEP_HEADER = (
    "axis", "value", "algorithm", "seed", "n_targets", "k", "edges_added",
    "max_lcc_before", "max_lcc_after", "feasible", "tau_violations",
    "mean_betweenness_after", "mean_closeness_after", "runtime_ms",
)


# datasets -------------------------------------------------------------------------

def cpep_like(seed: int = 0, components: int = 10, size: int = 23, edges: int = 58,
              target_lcc: float = 0.71, max_moves: int = 4000) -> Graph:
    """Synthetic stand-in for a small clustered contact network.

    Each component starts as a random connected graph with ``size`` nodes and
    ``edges`` edges; edges are then rewired (one removed, one added, staying
    connected) while the move brings the component's mean LCC closer to
    ``target_lcc``.
    """
    rng = np.random.default_rng(seed)
    all_edges: list[tuple[int, int]] = []
    for comp in range(components):
        local = _rewired_component(rng, size, edges, target_lcc, max_moves)
        off = comp * size
        all_edges.extend((u + off, v + off) for u, v in local)
    return Graph(components * size, all_edges)


def _mean_lcc(n: int, edges) -> float:
    tri, deg = triangle_and_degree(n, edges)
    denom = deg * (deg - 1) / 2.0
    vals = np.divide(tri, denom, out=np.zeros(n), where=denom > 0)
    return float(vals.mean())


def _connected(n: int, adj: list[set[int]]) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        for y in adj[stack.pop()]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == n


def _move(E: set, adj: list[set[int]], old: tuple[int, int], new: tuple[int, int]) -> None:
    E.discard(old)
    adj[old[0]].discard(old[1])
    adj[old[1]].discard(old[0])
    E.add(new)
    adj[new[0]].add(new[1])
    adj[new[1]].add(new[0])


def _rewired_component(rng, n: int, m: int, target: float, max_moves: int) -> list[tuple[int, int]]:
    m = min(max(m, n - 1), n * (n - 1) // 2)
    order = rng.permutation(n)
    E = set()
    for i in range(1, n):
        u, v = int(order[i]), int(order[rng.integers(0, i)])
        E.add((min(u, v), max(u, v)))
    while len(E) < m:
        u, v = (int(x) for x in rng.choice(n, size=2, replace=False))
        E.add((min(u, v), max(u, v)))
    adj = [set() for _ in range(n)]
    for u, v in E:
        adj[u].add(v)
        adj[v].add(u)
    lcc = _mean_lcc(n, E)
    for _ in range(max_moves):
        if abs(lcc - target) < 0.005:
            break
        if lcc < target:
            # close a wedge around a random node
            a = int(rng.integers(0, n))
            if len(adj[a]) < 2:
                continue
            b, c = sorted(int(x) for x in rng.choice(sorted(adj[a]), size=2, replace=False))
        else:
            b, c = sorted(int(x) for x in rng.choice(n, size=2, replace=False))
        new = (b, c)
        old = sorted(E)[int(rng.integers(0, len(E)))]
        if new in E:
            continue
        _move(E, adj, old, new)
        trial = _mean_lcc(n, E)
        if abs(trial - target) < abs(lcc - target) and _connected(n, adj):
            lcc = trial
        else:
            _move(E, adj, new, old)
    return sorted(E)


def load_dataset(spec: str) -> Graph:
    """An edge-list path, or a generator: ``cpep:SEED``, ``gnp:N:P:SEED``, ``threshold:N:SEED``."""
    kind, _, rest = spec.partition(":")
    args = rest.split(":") if rest else []
    try:
        if kind == "cpep":
            return cpep_like(int(args[0]) if args else 0)
        if kind == "gnp":
            return gnp_random_graph(int(args[0]), float(args[1]), int(args[2]) if len(args) > 2 else 0)
        if kind == "threshold":
            return realize(random_spec(int(args[0]), int(args[1]) if len(args) > 1 else 0))
    except (IndexError, ValueError) as exc:
        raise ConfigError(f"bad dataset generator {spec!r}: {exc}") from exc
    if not os.path.exists(spec):
        raise ConfigError(f"dataset {spec!r} not found")
    return load_edge_list(spec)


# targets --------------------------------------------------------------------------

@dataclass(frozen=True)
class TargetRule:
    """``explicit`` (labels), ``single_high_lcc`` (LCC above ``threshold``) or
    ``top_lcc_fraction`` (``pick_fraction * |V|`` nodes from the top ``pool_fraction`` by LCC)."""

    kind: str = "top_lcc_fraction"
    nodes: tuple = ()
    threshold: float = 0.8
    pool_fraction: float = 0.4
    pick_fraction: float = 0.2

    def __post_init__(self) -> None:
        if self.kind not in ("explicit", "single_high_lcc", "top_lcc_fraction"):
            raise ConfigError(f"unknown target rule {self.kind!r}")
        for name in ("pool_fraction", "pick_fraction"):
            x = getattr(self, name)
            if not 0 < x <= 1:
                raise ConfigError(f"{name} must lie in (0, 1], got {x}")
        if self.kind == "explicit" and not self.nodes:
            raise ConfigError("explicit target rule needs at least one node")

    def as_dict(self) -> dict:
        if self.kind == "explicit":
            return {"kind": self.kind, "nodes": list(self.nodes)}
        if self.kind == "single_high_lcc":
            return {"kind": self.kind, "threshold": self.threshold}
        return {"kind": self.kind, "pool_fraction": self.pool_fraction,
                "pick_fraction": self.pick_fraction}

    @classmethod
    def from_dict(cls, d: Mapping) -> "TargetRule":
        d = dict(d)
        if "nodes" in d:
            d["nodes"] = tuple(d["nodes"])
        return cls(**d)


def select_targets(graph: Graph, rule: TargetRule, seed: int = 0) -> list[int]:
    """Dense node ids of the targets, sorted; the sample depends only on ``seed``."""
    rng = np.random.default_rng(seed)
    if rule.kind == "explicit":
        index = {lab: i for i, lab in enumerate(graph.labels)}
        out = []
        for lab in rule.nodes:
            if lab not in index:
                raise ConfigError(f"target {lab!r} is not a node of the graph")
            out.append(index[lab])
        return out
    lcc = graph.lcc_array()
    if rule.kind == "single_high_lcc":
        pool = np.flatnonzero(lcc > rule.threshold)
        if len(pool) == 0:
            raise ConfigError(f"no node has LCC above {rule.threshold} (max is {lcc.max(initial=0):.4g})")
        return [int(rng.choice(pool))]
    n = graph.num_nodes
    ranked = sorted(range(n), key=lambda v: (-lcc[v], v))
    pool = ranked[:math.ceil(rule.pool_fraction * n)]
    pick = max(1, round(rule.pick_fraction * n))
    if not pool:
        raise ConfigError("top-LCC pool is empty")
    if pick > len(pool):
        raise ConfigError(f"cannot pick {pick} targets from a pool of {len(pool)}")
    return sorted(int(x) for x in rng.choice(pool, size=pick, replace=False))


def k_from_percent_nodes(graph: Graph, percent: float) -> int:
    return max(1, round(percent / 100.0 * graph.num_nodes))


def k_from_percent_edges(graph: Graph, percent: float) -> int:
    return max(1, round(percent / 100.0 * graph.num_edges))


# configuration ----------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    dataset: str
    algorithm: str = "oisa"
    solver: SolverConfig = field(default_factory=lambda: SolverConfig(omega_d=None))
    targets: TargetRule = field(default_factory=TargetRule)
    trials: int = 1
    seed: int = 0
    centrality: str = "auto"
    samples: int = DEFAULT_SAMPLES
    output: str | None = None

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}; choose from {sorted(ALGORITHMS)}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.centrality not in ("auto", "exact", "sampled"):
            raise ConfigError(f"unknown centrality mode {self.centrality!r}")

    def replace(self, **kw) -> "ExperimentConfig":
        data = {f: getattr(self, f) for f in self.__dataclass_fields__}
        data.update(kw)
        return ExperimentConfig(**data)

    def centrality_mode(self, graph: Graph) -> CentralityMode:
        kind = self.centrality
        if kind == "auto":
            kind = "sampled" if graph.num_nodes > SAMPLED_ABOVE else "exact"
        if kind == "sampled":
            return CentralityMode.sampled(self.samples, self.seed)
        return CentralityMode()

    def as_dict(self) -> dict:
        return {
            "dataset": self.dataset, "algorithm": self.algorithm, "solver": self.solver.as_dict(),
            "targets": self.targets.as_dict(), "trials": self.trials, "seed": self.seed,
            "centrality": self.centrality, "samples": self.samples,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "ExperimentConfig":
        """Accepts the nested form written by :meth:`as_dict`, or a flat one where
        solver fields sit next to ``dataset``."""
        d = dict(d)
        d.pop("output", None)
        solver = dict(d.pop("solver", {}))
        for name in SolverConfig.__dataclass_fields__:
            if name in d:
                solver[name] = d.pop(name)
        solver.setdefault("omega_d", None)
        if isinstance(solver.get("omega_d"), Mapping):
            solver["omega_d"] = {int(k): v for k, v in solver["omega_d"].items()}
        if "miss_weights" in solver:
            solver["miss_weights"] = tuple(solver["miss_weights"])
        solver.pop("centrality_mode", None)
        targets = d.pop("targets", None)
        rule = TargetRule.from_dict(targets) if targets else TargetRule()
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(solver=SolverConfig(**solver), targets=rule, **d)


def load_config(path: str, **defaults) -> ExperimentConfig:
    """JSON, or plain ``key = value`` lines with JSON-literal values.

    ``defaults`` fill top-level keys the file leaves out (the CLI passes the
    dataset given on its command line)."""
    with open(path) as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, val = (s.strip() for s in line.split("=", 1))
            try:
                data[key] = json.loads(val)
            except json.JSONDecodeError:
                data[key] = val
            if key.startswith("targets."):
                data.setdefault("targets", {})[key.split(".", 1)[1]] = data.pop(key)
    for key, val in defaults.items():
        data.setdefault(key, val)
    if "dataset" not in data:
        raise ConfigError(f"{path}: no dataset given")
    return ExperimentConfig.from_dict(data)


# runs ----------------------------------------------------------------------------------

@dataclass
class RunReport:
    config: dict
    trials: list[dict]
    summary: dict
    timing: dict

    def as_dict(self, timing: bool = True) -> dict:
        out = {"config": self.config, "trials": self.trials, "summary": self.summary}
        if timing:
            out["timing"] = self.timing
        return out

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.as_dict(timing), indent=2, sort_keys=True)

    @property
    def feasible(self) -> bool:
        return self.summary["feasible"]


def _solve(graph: Graph, T: list[int], name: str, solver: SolverConfig) -> InterventionPlan:
    if name in SINGLE_TARGET and len(T) != 1:
        raise ConfigError(f"{name} takes exactly one target, got {len(T)}")
    return ALGORITHMS[name](graph, T, solver)


def _trial(graph: Graph, config: ExperimentConfig, seed: int, timing: dict) -> dict:
    t0 = time.perf_counter()
    T = select_targets(graph, config.targets, seed)
    t1 = time.perf_counter()
    solver = config.solver.replace(seed=seed, centrality_mode=config.centrality_mode(graph))
    try:
        plan = _solve(graph, T, config.algorithm, solver)
    except ConfigError:
        raise
    except Exception as exc:
        raise RuntimeError(f"{config.algorithm} failed on {config.dataset} (seed {seed}): {exc}") from exc
    t2 = time.perf_counter()
    # the harness audits again on its own; the plan's audit is not trusted blindly
    before, after, violations, obj_before, obj_exact = audit(graph, plan.edges, T, solver)
    t3 = time.perf_counter()
    for key, dt in (("targets_ms", t1 - t0), ("solve_ms", t2 - t1), ("audit_ms", t3 - t2)):
        timing[key] = timing.get(key, 0.0) + 1000.0 * dt
    lab = graph.labels
    return {
        "seed": seed,
        "estimator": solver.centrality_mode.as_dict(),
        "targets": [lab[t] for t in T],
        "edges_added": [[lab[u], lab[v]] for u, v in plan.edges],
        "targets_before": {str(lab[t]): m.as_dict() for t, m in before.items()},
        "targets_after": {str(lab[t]): m.as_dict() for t, m in after.items()},
        "max_lcc_before": obj_before,
        "max_lcc_after": float(obj_exact),
        "max_lcc_after_exact": [obj_exact.numerator, obj_exact.denominator],
        "feasible": not violations,
        "violations": [dict(v.as_dict(), node=lab[v.node]) for v in violations],
        "diagnostics": plan.diagnostics,
    }


def run(config: ExperimentConfig, graph: Graph | None = None) -> RunReport:
    """Run ``config.trials`` seeded trials (seeds ``seed, seed+1, ...``) and summarise."""
    timing: dict = {}
    t0 = time.perf_counter()
    if graph is None:
        graph = load_dataset(config.dataset)
    timing["load_ms"] = 1000.0 * (time.perf_counter() - t0)
    trials = [_trial(graph, config, config.seed + i, timing) for i in range(config.trials)]
    summary = {
        "nodes": graph.num_nodes,
        "edges": graph.num_edges,
        "mean_max_lcc_before": float(np.mean([t["max_lcc_before"] for t in trials])),
        "mean_max_lcc_after": float(np.mean([t["max_lcc_after"] for t in trials])),
        "feasible": all(t["feasible"] for t in trials),
    }
    report = RunReport(config.as_dict(), trials, summary, timing)
    if config.output:
        with open(config.output, "w") as fh:
            fh.write(report.to_json())
    return report


# sweeps --------------------------------------------------------------------------------

def _cell(args) -> dict:
    graph, config, axis, value, name, seed = args
    solver = config.solver.replace(**{axis: int(value) if axis == "k" else float(value)})
    cfg = config.replace(solver=solver, algorithm=name, seed=seed, trials=1, output=None)
    start = time.perf_counter()
    trial = _trial(graph, cfg, seed, {})
    ms = 1000.0 * (time.perf_counter() - start)
    after = trial["targets_after"].values()
    return {
        "axis": axis, "value": value, "algorithm": name, "seed": seed,
        "n_targets": len(trial["targets"]), "k": solver.k, "edges_added": len(trial["edges_added"]),
        "max_lcc_before": trial["max_lcc_before"], "max_lcc_after": trial["max_lcc_after"],
        "feasible": int(trial["feasible"]),
        "tau_violations": sum(v["constraint"] == "tau" for v in trial["violations"]),
        "mean_betweenness_after": float(np.mean([m["betweenness"] for m in after])),
        "mean_closeness_after": float(np.mean([m["closeness"] for m in after])),
        "runtime_ms": ms,
    }


def sweep(config: ExperimentConfig, axis: str, values: Sequence, algorithms: Sequence[str] | None = None,
          seeds: Sequence[int] | None = None, graph: Graph | None = None, workers: int = 1) -> list[dict]:
    """One row per ``(value, algorithm, seed)``; columns are :data:`SWEEP_HEADER`.

    Cells are independent, so ``workers > 1`` runs them in a process pool;
    rows come back in the same order either way.
    """
    if axis not in SWEEP_AXES:
        raise ConfigError(f"sweep axis must be one of {SWEEP_AXES}")
    values = list(values)
    if not values:
        raise ConfigError("sweep needs at least one value")
    if values != sorted(values):
        raise ConfigError("sweep values must be sorted")
    algorithms = list(algorithms or [config.algorithm])
    for name in algorithms:
        if name not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {name!r}")
    seeds = list(seeds) if seeds is not None else [config.seed + i for i in range(config.trials)]
    if graph is None:
        graph = load_dataset(config.dataset)
    cells = [(graph, config, axis, v, a, s) for v in values for a in algorithms for s in seeds]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_cell, cells))
    return [_cell(c) for c in cells]


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def rows_to_csv(rows: Sequence[Mapping]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in SWEEP_HEADER])
    return buf.getvalue()


def read_csv(text: str) -> list[dict]:
    out = []
    for r in csv.DictReader(io.StringIO(text)):
        row = {}
        for k, v in r.items():
            try:
                row[k] = int(v)
            except ValueError:
                try:
                    row[k] = float(v)
                except ValueError:
                    row[k] = v
        out.append(row)
    return out


def mean_by(rows: Sequence[Mapping], column: str, algorithm: str | None = None) -> dict:
    """Mean of ``column`` per sweep value, optionally for one algorithm."""
    acc: dict = {}
    for r in rows:
        if algorithm is not None and r["algorithm"] != algorithm:
            continue
        acc.setdefault(r["value"], []).append(r[column])
    return {v: float(np.mean(xs)) for v, xs in sorted(acc.items())}
