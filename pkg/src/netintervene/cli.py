"""Command-line entry point.

Exit status: 0 when the returned plan is feasible, 2 when a plan was returned
but violates a constraint, 1 on any error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .baselines import EnumerationTooLarge
from .centrality import CentralityMode, centrality
from .graph import GraphError, dump_edge_list, load_edge_list
from .harness import (MULTI_TARGET, SINGLE_TARGET, ExperimentConfig, TargetRule, load_config,
                      load_dataset, rows_to_csv, run, sweep)
from .plan import ConfigError
from .threshold import partition, random_spec, realize


def _labels(text: str) -> tuple:
    out = []
    for tok in text.replace(",", " ").split():
        try:
            out.append(int(tok))
        except ValueError:
            out.append(tok)
    return tuple(out)


def _omega_d(text: str):
    if text.lower() in ("none", "auto", "degree+1"):
        return None
    return float(text)


def _add_solver_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON or key = value file; flags below override it")
    p.add_argument("--k", type=int)
    p.add_argument("--tau", type=float)
    p.add_argument("--omega-b", type=float)
    p.add_argument("--omega-c", type=float)
    p.add_argument("--omega-d", type=_omega_d, default=argparse.SUPPRESS,
                   help="degree floor; 'none' means current degree + 1 (default)")
    p.add_argument("--miss", choices=["adaptive", "static"])
    p.add_argument("--seed", type=int)
    p.add_argument("--centrality", choices=["auto", "exact", "sampled"])
    p.add_argument("--samples", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.add_argument("--no-timing", action="store_true", help="omit the timing block from the report")


def _config(args, dataset: str, algorithm: str, targets: TargetRule | None) -> ExperimentConfig:
    base = load_config(args.config, dataset=dataset) if args.config else ExperimentConfig(dataset, algorithm)
    solver_kw = {}
    for flag, name in (("k", "k"), ("tau", "tau"), ("omega_b", "omega_b"), ("omega_c", "omega_c"),
                       ("miss", "miss_mode")):
        val = getattr(args, flag, None)
        if val is not None:
            solver_kw[name] = val
    if hasattr(args, "omega_d"):
        solver_kw["omega_d"] = args.omega_d
    kw = {"dataset": dataset, "algorithm": algorithm, "solver": base.solver.replace(**solver_kw)}
    if targets is not None:
        kw["targets"] = targets
    for name in ("seed", "centrality", "samples", "trials"):
        val = getattr(args, name, None)
        if val is not None:
            kw[name] = val
    return base.replace(**kw)


def _emit(report, args) -> int:
    text = report.to_json(timing=not args.no_timing)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if report.feasible else 2


def cmd_lcc(args) -> int:
    g = load_edge_list(args.edgelist)
    for v in g.nodes():
        n_v, pairs = g.lcc_pair(v)
        print(f"{g.labels[v]}\t{g.lcc(v)!r}\t{n_v}/{pairs}")
    return 0


def cmd_centrality(args) -> int:
    g = load_edge_list(args.edgelist)
    mode = CentralityMode.sampled(args.samples, args.seed) if args.mode == "sampled" else CentralityMode()
    snap = centrality(g, mode)
    for v in g.nodes():
        print(f"{g.labels[v]}\t{float(snap.betweenness[v])!r}\t{float(snap.closeness[v])!r}")
    return 0


def cmd_solve_s(args) -> int:
    if args.algo not in SINGLE_TARGET and args.algo not in MULTI_TARGET:
        raise ConfigError(f"unknown algorithm {args.algo!r}")
    rule = (TargetRule("explicit", nodes=_labels(args.target)) if args.target is not None
            else TargetRule("single_high_lcc", threshold=args.threshold))
    if rule.kind == "explicit" and len(rule.nodes) != 1:
        raise ConfigError("solve-s takes exactly one target")
    return _emit(run(_config(args, args.edgelist, args.algo, rule)), args)


def _multi_rule(args) -> TargetRule:
    if args.targets:
        return TargetRule("explicit", nodes=_labels(args.targets))
    return TargetRule("top_lcc_fraction", pool_fraction=args.pool, pick_fraction=args.pick)


def cmd_solve_m(args) -> int:
    if args.algo not in MULTI_TARGET:
        raise ConfigError(f"unknown multi-target algorithm {args.algo!r}")
    return _emit(run(_config(args, args.edgelist, args.algo, _multi_rule(args))), args)


def cmd_enum(args) -> int:
    rule = _multi_rule(args)
    algo = "enum_s" if rule.kind == "explicit" and len(rule.nodes) == 1 and not args.multi else "enum_m"
    return _emit(run(_config(args, args.edgelist, algo, rule)), args)


def cmd_gen_threshold(args) -> int:
    spec = random_spec(args.n, args.seed)
    g = realize(spec)
    part = partition(spec, g)
    side = dict(spec.as_dict(), n=spec.n, seed=args.seed,
                partition={"isolated": list(part.isolated), "independent": list(part.independent),
                           "clique": list(part.clique), "z": part.z, "c": part.c})
    text = f"# threshold graph n={spec.n} seed={args.seed}\n" + dump_edge_list(g, use_labels=False)
    if args.out:
        with open(args.out + ".txt", "w") as fh:
            fh.write(text)
        with open(args.out + ".json", "w") as fh:
            json.dump(side, fh, indent=2)
    else:
        sys.stdout.write(text)
        print("# " + json.dumps(side))
    return 0


def _values(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def cmd_sweep(args) -> int:
    cfg = (load_config(args.config, dataset=args.dataset or "cpep:0") if args.config
           else ExperimentConfig(args.dataset or "cpep:0"))
    if args.dataset:
        cfg = cfg.replace(dataset=args.dataset)
    vals = _values(args.values)
    if args.axis == "k":
        vals = [int(v) for v in vals]
    algos = args.algo.split(",") if args.algo else None
    seeds = range(cfg.seed, cfg.seed + args.seeds) if args.seeds else None
    rows = sweep(cfg, args.axis, vals, algorithms=algos, seeds=seeds,
                 graph=load_dataset(cfg.dataset), workers=args.workers)
    text = rows_to_csv(rows)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="netintervene", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lcc", help="print every node's LCC")
    p.add_argument("edgelist")
    p.set_defaults(func=cmd_lcc)

    p = sub.add_parser("centrality", help="print betweenness and harmonic closeness")
    p.add_argument("edgelist")
    p.add_argument("--mode", choices=["exact", "sampled"], default="exact")
    p.add_argument("--samples", type=int, default=256)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_centrality)

    p = sub.add_parser("solve-s", help="single-target plan")
    p.add_argument("edgelist", help="edge-list path or generator (cpep:SEED, gnp:N:P:SEED, threshold:N:SEED)")
    p.add_argument("--target", help="target label; default draws one node above --threshold")
    p.add_argument("--threshold", type=float, default=0.8)
    p.add_argument("--algo", default="crpd", choices=sorted(SINGLE_TARGET) + sorted(MULTI_TARGET))
    _add_solver_args(p)
    p.set_defaults(func=cmd_solve_s)

    for name, helptext, default, choices in (
            ("solve-m", "multi-target plan", "oisa", sorted(MULTI_TARGET)),
            ("enum", "exhaustive optimum on a small instance", None, None)):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("edgelist")
        p.add_argument("--targets", help="comma-separated target labels")
        p.add_argument("--pool", type=float, default=0.4, help="top-LCC pool fraction")
        p.add_argument("--pick", type=float, default=0.2, help="fraction of nodes drawn as targets")
        if default:
            p.add_argument("--algo", default=default, choices=choices)
            p.set_defaults(func=cmd_solve_m)
        else:
            p.add_argument("--multi", action="store_true", help="use the multi-target search even for one target")
            p.set_defaults(func=cmd_enum)
        _add_solver_args(p)

    p = sub.add_parser("gen-threshold", help="random threshold graph plus a JSON sidecar")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="path prefix; writes PREFIX.txt and PREFIX.json")
    p.set_defaults(func=cmd_gen_threshold)

    p = sub.add_parser("sweep", help="CSV table over one parameter")
    p.add_argument("--config")
    p.add_argument("--dataset")
    p.add_argument("--axis", required=True, choices=["k", "tau", "omega_b", "omega_c"])
    p.add_argument("--values", required=True, help="comma-separated, ascending")
    p.add_argument("--algo", help="comma-separated algorithm ids")
    p.add_argument("--seeds", type=int, help="number of seeds, starting at the config seed")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, GraphError, EnumerationTooLarge, OSError, KeyError, RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
