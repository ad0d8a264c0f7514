"""Command-line entry point: ``mumorank validate|rank|bounds|simulate``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .bounds import (
    UndefinedBoundError,
    boundary_stats,
    bound_mumo,
    d0_sat_unequal,
    d_sat_equal,
    d_sat_unequal,
    observed_outflow,
)
from .exceptions import (
    ConfigError,
    ConvergenceError,
    DegenerateSetError,
    HypergraphError,
    InputFormatError,
    MuMoRankError,
)
from .io import bind_config, build_hypergraph, dumps_report, parse_config, parse_hyperedge_csv
from .mumo import build_preference_vector, mumorank
from .walker import MIN_RECOMMENDED_STEPS, WalkConfig, compare, simulate

EXIT_OK = 0
EXIT_IO = 1
EXIT_SCHEMA = 2
EXIT_GRAPH = 3
EXIT_CONVERGENCE = 4
EXIT_DEGENERATE = 5

DEFAULT_STEPS = 10_000_000
DEFAULT_THRESHOLD = 0.01


class _Fail(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _read(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise _Fail(EXIT_IO, f"cannot read {path}: {exc}") from None


def _load(args, need_config=True):
    table = parse_hyperedge_csv(_read(args.graph))
    config = None
    if args.config is not None:
        config = parse_config(_read(args.config), modalities=table.header)
    elif need_config:
        raise _Fail(EXIT_SCHEMA, f"--config is required for {args.command}")
    graph = build_hypergraph(table, config, allow_multi=args.allow_multi)
    problems = graph.validate()
    if problems:
        raise HypergraphError(problems)
    return graph, config


def _require_edges(graph):
    if graph.n_hyperedges == 0:
        raise HypergraphError("no hyperedges")


def _solve(graph, config):
    damping, preferred = bind_config(config, graph)
    s = build_preference_vector(graph, preferred, config.preference_mode)
    ranks = mumorank(graph, damping, s, config.solver)
    return damping, preferred, s, ranks


def _graph_summary(graph):
    pruned = {
        name: [lab for lab, d in zip(graph.labels(i), graph.degrees(i)) if d == 0]
        for i, name in enumerate(graph.modalities)
    }
    return {
        "modalities": list(graph.modalities),
        "n_nodes": graph.n_nodes,
        "n_hyperedges": graph.n_hyperedges,
        "zero_degree_nodes": pruned,
    }


def cmd_validate(args):
    graph, _ = _load(args, need_config=False)
    zero = sum(int((graph.degrees(i) == 0).sum()) for i in range(graph.M))
    text = (f"valid: {graph.M} modalities, {graph.n_nodes} nodes ({zero} zero-degree), "
            f"{graph.n_hyperedges} hyperedges")
    return text + "\n", None


def cmd_rank(args):
    graph, config = _load(args)
    _require_edges(graph)
    _, _, _, ranks = _solve(graph, config)
    edge_ranks = ranks.hyperedge_ranks
    report = {
        "command": "rank",
        "config": config.to_dict(),
        "graph": _graph_summary(graph),
        "node_ranks": ranks.as_dict(),
        "hyperedge_ranks": [float(v) for v in edge_ranks],
        "hyperedge_rank_total": float(edge_ranks.sum()),
        "modality_sums": dict(zip(graph.modalities, map(float, ranks.modality_sums()))),
        "iterations": ranks.n_iter,
        "residual": ranks.residual,
        "max_drift": ranks.max_drift,
    }
    if args.normalize_hyperedges:
        report["hyperedge_ranks_normalized"] = [float(v) for v in edge_ranks / edge_ranks.sum()]
    return None, report


def cmd_bounds(args):
    graph, config = _load(args)
    _require_edges(graph)
    damping, preferred, _, ranks = _solve(graph, config)
    stats = boundary_stats(graph, preferred, damping)
    zetas = stats.zetas
    observed = observed_outflow(ranks, preferred, zetas)
    equal = bool(np.all(zetas == zetas[0]))
    variants = ("equal", "equal_d0", "unequal", "unequal_d0") if equal else ("unequal", "unequal_d0")
    reports = {v: bound_mumo(stats, zetas, v, observed).as_dict() for v in variants}
    notes = []
    try:
        d_sat = d_sat_unequal(stats)
    except UndefinedBoundError as exc:
        d_sat = None
        notes.append(str(exc))
    d0, d_mod = d0_sat_unequal(stats)
    report = {
        "command": "bounds",
        "config": config.to_dict(),
        "graph": _graph_summary(graph),
        "hvol": dict(zip(graph.modalities, map(int, stats.hvol))),
        "boundary": stats.boundary,
        "boundary_zeta": stats.boundary_zeta,
        "d_sat": d_sat,
        "d_sat_equal": d_sat_equal(stats, 0.0),
        "d0_sat": d0,
        "d_modality": dict(zip(graph.modalities, map(float, d_mod))),
        "observed_outflow": observed,
        "bounds": reports,
        "all_hold": all(r["holds"] for r in reports.values()),
        "iterations": ranks.n_iter,
        "residual": ranks.residual,
        "notes": notes,
    }
    return None, report


def cmd_simulate(args):
    graph, config = _load(args)
    _require_edges(graph)
    damping, _, s, ranks = _solve(graph, config)
    sim = config.simulation
    steps = int(args.steps if args.steps is not None else sim.get("steps", DEFAULT_STEPS))
    seed = int(args.seed if args.seed is not None else sim.get("seed", 0))
    walkers = int(args.walkers if args.walkers is not None else sim.get("walkers", 64))
    burn_in = int(sim.get("burn_in", steps // 10))
    threshold = float(sim.get("threshold", DEFAULT_THRESHOLD))
    if steps < 1:
        raise _Fail(EXIT_SCHEMA, "--steps must be positive")
    warnings = []
    if steps < MIN_RECOMMENDED_STEPS:
        warnings.append(f"insufficient samples: {steps} steps (recommended >= {MIN_RECOMMENDED_STEPS})")
    walk = WalkConfig(total_steps=steps + burn_in, burn_in=burn_in, master_seed=seed, walkers=walkers)
    result = simulate(graph, damping, s, walk)
    metrics = compare(result.ranks, ranks)
    report = {
        "command": "simulate",
        "config": config.to_dict(),
        "seed": seed,
        "steps": steps,
        "burn_in": burn_in,
        "walkers": walkers,
        "empirical": result.ranks.as_dict(),
        "counts": {name: dict(zip(result.ranks.labels[i], map(int, result.counts[i])))
                   for i, name in enumerate(graph.modalities)},
        "analytic": ranks.as_dict(),
        "max_abs_deviation": metrics["max_abs_deviation"],
        "l1_per_modality": metrics["l1_per_modality"],
        "threshold": threshold,
        "within_threshold": metrics["max_abs_deviation"] < threshold,
        "warnings": warnings,
    }
    return None, report


COMMANDS = {
    "validate": cmd_validate,
    "rank": cmd_rank,
    "bounds": cmd_bounds,
    "simulate": cmd_simulate,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mumorank",
        description="Per-modality PageRank and authority-outflow bounds on multimodal hypergraphs.",
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("graph", help="CSV file, one hyperedge per row, header = modality names")
    parser.add_argument("--config", help="JSON run configuration")
    parser.add_argument("--out", help="write the report here instead of stdout")
    parser.add_argument("--steps", type=int, help="post-burn-in walk steps (simulate)")
    parser.add_argument("--seed", type=int, help="master seed (simulate)")
    parser.add_argument("--walkers", type=int, help="independent walkers (simulate)")
    parser.add_argument("--allow-multi", action="store_true", help="accept duplicate hyperedges")
    parser.add_argument("--normalize-hyperedges", action="store_true",
                        help="also report hyperedge ranks scaled to sum to 1 (rank)")
    return parser


def _classify(exc):
    if isinstance(exc, _Fail):
        return exc.code
    if isinstance(exc, (InputFormatError, ConfigError)):
        return EXIT_SCHEMA
    if isinstance(exc, HypergraphError):
        return EXIT_GRAPH
    if isinstance(exc, ConvergenceError):
        return EXIT_CONVERGENCE
    if isinstance(exc, DegenerateSetError):
        return EXIT_DEGENERATE
    return EXIT_SCHEMA


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text, report = COMMANDS[args.command](args)
    except (_Fail, MuMoRankError) as exc:
        code = _classify(exc)
        if isinstance(exc, HypergraphError):
            for problem in exc.violations:
                print(f"error: {problem}", file=sys.stderr)
        else:
            print(f"error: {exc}", file=sys.stderr)
        return code
    if text is None:
        text = dumps_report(report)
    if args.out:
        try:
            Path(args.out).write_text(text, encoding="utf-8")
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
