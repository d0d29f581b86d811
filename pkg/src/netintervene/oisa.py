"""Multi-target intervention: targeted-LCC grid, poor-optionality-first pairing,
and upper-bound-driven lazy LCC maintenance."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence

from .centrality import CentralitySnapshot, centrality
from .crpd import miss_argmax, miss_weights, tau_violation
from .graph import EdgeAdditionEffect, Graph, lcc_exact, pairs
from .plan import ConfigError, InterventionPlan, SolverConfig, make_plan

_EPS = 1e-12


@dataclass(frozen=True)
class LccGrid:
    levels: tuple[Fraction, ...]
    d_hat_2k: int

    @property
    def values(self) -> list[float]:
        return [float(x) for x in self.levels]


@dataclass(frozen=True)
class EdgeBudgetBound:
    per_target: dict[int, int]
    need: dict[int, int]
    k_G: float


@dataclass(frozen=True)
class OptionSet:
    owner: int
    options: frozenset[int]

    @property
    def optionality(self) -> int:
        return len(self.options)


# edge-count lower bound -------------------------------------------------------

def _num(x):
    return x if isinstance(x, Rational) else float(x)


def required_edges(lcc, degree: int, l) -> int:
    """Smallest ``k_t >= 0`` with ``lcc*d*(d-1) <= l*(d+k_t)*(d+k_t-1)``.

    Exact when ``lcc`` and ``l`` are ints or Fractions.
    """
    lcc, l = _num(lcc), _num(l)
    if l <= 0:
        raise ValueError("targeted LCC must be positive")
    if degree < 0:
        raise ValueError("degree must be non-negative")
    if lcc <= l:
        return 0
    lhs = lcc * degree * (degree - 1)
    # x = d + k must satisfy x(x-1) >= lhs / l
    x = (1.0 + math.sqrt(1.0 + 4.0 * float(lhs) / float(l))) / 2.0
    k = max(0, int(math.floor(x)) - degree - 2)
    while lhs > l * (degree + k) * (degree + k - 1):
        k += 1
    return k


def _degree_need(graph: Graph, t: int, config: SolverConfig) -> int:
    return max(0, math.ceil(config.degree_floor(graph, t) - graph.degree(t)))


def lower_bound_k_G(graph: Graph, T: Sequence[int], l, config: SolverConfig) -> EdgeBudgetBound:
    """Per-target ``k_t`` and the half-sum ``k_G`` of ``max(k_t, degree shortfall)``."""
    per, need = {}, {}
    for t in T:
        per[t] = required_edges(graph.lcc_fraction(t), graph.degree(t), l)
        need[t] = max(per[t], _degree_need(graph, t, config))
    return EdgeBudgetBound(per, need, 0.5 * sum(need.values()))


def lcc_grid(graph: Graph, T: Sequence[int], k: int) -> LccGrid:
    """Levels ``j / C(d_hat, 2)`` up to the first one at or above the largest target LCC.

    ``d_hat`` is the largest degree among the ``2k`` highest-LCC targets.  When
    ``C(d_hat, 2) == 0`` no refinement is possible and the grid is ``{1}``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if not T:
        raise ConfigError("target set is empty")
    ranked = sorted(T, key=lambda t: (-graph.lcc_fraction(t), t))
    top = ranked[:min(2 * k, len(ranked))]
    d_hat = max(graph.degree(t) for t in top)
    denom = pairs(d_hat)
    if denom == 0:
        return LccGrid((Fraction(1),), d_hat)
    top_lcc = graph.lcc_fraction(ranked[0])
    last = max(1, math.ceil(top_lcc * denom))
    return LccGrid(tuple(Fraction(j, denom) for j in range(1, last + 1)), d_hat)


def lcc_upper_bound(n_v: int, degree: int, k: int, clamp: bool = True) -> Fraction:
    """Largest LCC ``v`` can reach after any ``k`` inserted edges.

    Maximises ``(n_v + k2 + k1*d + C(k1, 2)) / C(d + k1, 2)`` over splits
    ``k1 + k2 = k``; splits with an empty denominator give LCC 0.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    best = Fraction(0)
    for k1 in range(k + 1):
        denom = pairs(degree + k1)
        if denom == 0:
            continue
        val = Fraction(n_v + (k - k1) + k1 * degree + pairs(k1), denom)
        best = max(best, val)
    return min(best, Fraction(1)) if clamp else best


def optionality(graph: Graph, t: int, T: Sequence[int], tau: float, base_lcc: Sequence[float]) -> OptionSet:
    """Targets ``t`` may be joined to: three or more hops away (or unreachable), or two
    hops away when the edge keeps ``t``, the partner and every common neighbour within
    ``tau`` of their original LCC."""
    nbrs = graph.neighbors(t)
    opts = set()
    for u in T:
        if u == t or u in nbrs:
            continue
        if _admissible(graph, t, u, tau, base_lcc):
            opts.add(u)
    return OptionSet(t, frozenset(opts))


def _admissible(graph: Graph, t: int, u: int, tau: float, base_lcc) -> bool:
    if not graph.common_neighbors(t, u):
        return True
    return tau_violation(graph, t, u, base_lcc, tau) is None


def early_stop_check(k: int, used: int, x: dict[int, int], need: dict[int, int]) -> bool:
    """True when some target can no longer collect the edges it needs within the budget."""
    remaining = k - used
    return any(remaining + x.get(t, 0) < n for t, n in need.items())


# LCC maintenance ------------------------------------------------------------------

class _FullRecount:
    """Recounts every target's neighbour edges after each insertion."""

    def __init__(self, work: Graph, T: Sequence[int]) -> None:
        self.work = work
        self.T = list(T)
        self.values: dict[int, Fraction] = {}
        self._recount()
        self.refreshes = 0

    def _recount(self) -> None:
        g = self.work
        for t in self.T:
            nb = g.neighbors(t)
            twice = sum(len(g.neighbors(a) & nb) for a in nb)
            self.values[t] = lcc_exact(twice // 2, len(nb))

    def update(self, effect: EdgeAdditionEffect) -> None:
        self._recount()
        self.refreshes += len(self.T)

    def value(self, t: int) -> Fraction:
        return self.values[t]

    def maximum(self) -> Fraction:
        return max(self.values.values())

    def at_max(self) -> list[int]:
        top = self.maximum()
        return [t for t in self.T if self.values[t] == top]


class _BoundedLazy:
    """Keeps target LCCs current only where they can matter.

    A touched target whose upper bound over the whole budget sits below the
    current maximum cannot be the next ``m``; it is marked stale and read from
    the graph's triangle cache only when asked for, or once the maximum drops
    to its bound.
    """

    def __init__(self, work: Graph, T: Sequence[int], k: int) -> None:
        self.work = work
        self.T = list(T)
        self.tset = set(T)
        self.bound = {t: float(lcc_upper_bound(work.triangles(t), work.degree(t), k, clamp=False))
                      for t in T}
        self.values = {t: work.lcc_fraction(t) for t in T}
        self.stale: set[int] = set()
        self.refreshes = 0

    def _refresh(self, t: int) -> None:
        self.values[t] = self.work.lcc_fraction(t)
        self.stale.discard(t)
        self.refreshes += 1

    def _fresh_max(self) -> Fraction:
        return max(v for t, v in self.values.items() if t not in self.stale)

    def update(self, effect: EdgeAdditionEffect) -> None:
        top = float(self._fresh_max())
        for v in effect.affected:
            if v not in self.tset:
                continue
            if self.bound[v] >= top - _EPS:
                self._refresh(v)
            else:
                self.stale.add(v)

    def value(self, t: int) -> Fraction:
        if t in self.stale:
            self._refresh(t)
        return self.values[t]

    def maximum(self) -> Fraction:
        while True:
            top = self._fresh_max()
            late = [t for t in self.stale if self.bound[t] >= float(top) - _EPS]
            if not late:
                return top
            for t in late:
                self._refresh(t)

    def at_max(self) -> list[int]:
        top = self.maximum()
        return [t for t in self.T if t not in self.stale and self.values[t] == top]


# per-level state -----------------------------------------------------------------------

class PonfState:
    """Working copy of the graph plus caches for one grid level."""

    def __init__(self, graph: Graph, T: Sequence[int], config: SolverConfig, base_lcc,
                 alc: bool = True, snapshot: CentralitySnapshot | None = None) -> None:
        self.graph = graph
        self.work = graph.copy()
        self.T = sorted(T)
        self.tset = set(self.T)
        self.config = config
        self.base = base_lcc
        self.F: list[tuple[int, int]] = []
        self.x: dict[int, int] = {t: 0 for t in self.T}
        self.lcc = _BoundedLazy(self.work, self.T, config.k) if alc else _FullRecount(self.work, self.T)
        self.snapshot = snapshot  # centrality of the original graph, for MISS scoring
        self._work_snapshot: CentralitySnapshot | None = snapshot
        self._options: dict[int, set[int]] = {}

    def options(self, t: int) -> set[int]:
        if t not in self._options:
            self._options[t] = set(optionality(self.work, t, self.T, self.config.tau, self.base).options)
        return self._options[t]

    def work_snapshot(self) -> CentralitySnapshot:
        if self._work_snapshot is None:
            self._work_snapshot = centrality(self.work, self.config.centrality_mode)
        return self._work_snapshot

    def add(self, m: int, u: int) -> EdgeAdditionEffect:
        eff = self.work.add_edge(m, u)
        self.F.append((m, u))
        self.x[m] += 1
        self.x[u] += 1
        self.lcc.update(eff)
        self._work_snapshot = None
        self._invalidate(eff)
        return eff

    def _invalidate(self, eff: EdgeAdditionEffect) -> None:
        touched = set(eff.affected)
        dirty = touched & self.tset
        for w in touched:
            dirty.update(self.work.neighbors(w) & self.tset)
        for t in dirty:
            self._options.pop(t, None)
        moved = touched & self.tset
        for t, opts in self._options.items():
            nbrs = self.work.neighbors(t)
            for u in moved:
                if u == t:
                    continue
                if u not in nbrs and _admissible(self.work, t, u, self.config.tau, self.base):
                    opts.add(u)
                else:
                    opts.discard(u)


def ponf_select(state: PonfState) -> tuple[int, int] | None:
    """Pick ``(m, u)``: ``m`` the largest-LCC target (fewest options, then smallest id,
    among ties), ``u`` the largest-LCC member of its option set, or the MISS
    argmax when ``m`` is below its betweenness/closeness floor.  ``None`` when
    every tied target has an empty option set."""
    tied = state.lcc.at_max()
    cands = [t for t in tied if state.options(t)]
    if not cands:
        return None
    m = min(cands, key=lambda t: (len(state.options(t)), t))
    U = sorted(state.options(m))
    cfg = state.config
    weights = (0.0, 0.0)
    if cfg.omega_b > 0 or cfg.omega_c > 0:
        snap = state.work_snapshot()
        b, c = float(snap.betweenness[m]), float(snap.closeness[m])
        if b < cfg.omega_b or c < cfg.omega_c:
            weights = miss_weights(b, c, cfg.omega_b, cfg.omega_c, cfg.miss_mode, cfg.miss_weights)
    if weights != (0.0, 0.0):
        g = state.graph
        u = miss_argmax(U, state.snapshot, [g.degree(v) for v in g.nodes()], weights)
    else:
        u = min(U, key=lambda v: (-state.lcc.value(v), v))
    return m, u


def _run_level(graph, T, config, base, l, bound, alc, snapshot, start):
    state = PonfState(graph, T, config, base, alc, snapshot)
    stop = "budget"
    while len(state.F) < config.k:
        # a level at or above the starting maximum has nothing to reach: spend the budget
        if l < start and state.lcc.maximum() <= l:
            stop = "reached"
            break
        if early_stop_check(config.k, len(state.F), state.x, bound.need):
            stop = "early"
            break
        pick = ponf_select(state)
        if pick is None:
            stop = "exhausted"
            break
        state.add(*pick)
    realized = max(state.work.lcc_fraction(t) for t in state.T)
    return state.F, realized, stop, state.lcc.refreshes


def oisa(graph: Graph, T: Sequence[int], config: SolverConfig, alc: bool = True) -> InterventionPlan:
    """Minimise the largest target LCC with at most ``k`` target-to-target edges.

    Every grid level whose edge lower bound fits the budget gets its own greedy
    run on a fresh copy; the plan with the smallest realised maximum LCC wins
    (then fewer edges, then the lexicographically smaller edge list), with the
    empty plan as the starting incumbent.  ``alc`` only changes how target LCCs
    are maintained, never the result.
    """
    T = sorted({int(t) for t in T})
    if not T:
        raise ConfigError("target set is empty")
    for t in T:
        graph.degree(t)
    start = max(graph.lcc_fraction(t) for t in T)
    if config.k == 0 or start == 0:
        return make_plan("oisa", graph, [], T, config, {"levels": []})
    base = graph.lcc_array()
    snapshot = centrality(graph, config.centrality_mode) if config.needs_centrality() else None
    grid = lcc_grid(graph, T, config.k)
    best_key = (start, 0, [])
    levels = []
    for l in grid.levels:
        bound = lower_bound_k_G(graph, T, l, config)
        info = {"level": float(l), "level_exact": [l.numerator, l.denominator], "k_G": bound.k_G}
        if bound.k_G > config.k:
            info["stop"] = "pruned"
            levels.append(info)
            continue
        F, realized, stop, refreshes = _run_level(graph, T, config, base, l, bound, alc, snapshot, start)
        info.update(stop=stop, edges=[list(e) for e in F], max_lcc=float(realized),
                    lcc_refreshes=refreshes)
        levels.append(info)
        key = (realized, len(F), F)
        if key < best_key:
            best_key = key
    F = best_key[2]
    diag = {"d_hat_2k": grid.d_hat_2k, "levels": levels, "alc": alc,
            "all_pruned": all(x["stop"] == "pruned" for x in levels)}
    return make_plan("oisa", graph, F, T, config, diag)
