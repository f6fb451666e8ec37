"""Command-line front end: batch experiments, result files and plots.

Subcommands: ``bench`` (mean best fitness tables), ``engineer``
(constrained design problems), ``timecomplexity`` (hitting-time
statistics vs dimension).  Outputs go to ``<out>/runs.csv``,
``<out>/summary.json`` and optionally ``<out>/plots/*.svg``; every file
embeds the resolved config and master seed, and repeated identical
invocations produce byte-identical CSV.

Exit codes: 0 success, 1 runtime failure, 2 usage or config error.
Option precedence: command-line flags override --config file values,
which override the built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import experiments
from .constrained import PenaltyConfig
from .optimizers import ALGORITHMS, AlgorithmConfig
from .problems import make_problem, problem_names

ENGINEER_PROBLEMS = ("truss", "spring", "vessel")

_DEFAULTS = {
    "bench": dict(problem="sphere", algo=["qpso-cd"], pop=20, dim=10,
                  iters=1000, runs=30, seed=2024, pr=0.2, selection=2,
                  alpha_start=1.0, alpha_end=0.5, penalty="sqrt:1000",
                  out="out", plot=False, workers=0),
    "engineer": dict(problem="truss", algo=["qpso-cd"], pop=40, dim=0,
                     iters=0, runs=30, seed=2024, pr=0.2, selection=2,
                     alpha_start=1.0, alpha_end=0.5, penalty="sqrt:1000",
                     out="out", plot=False, workers=0),
    "timecomplexity": dict(algo=["qpso-cd", "pso"], dims="2..10", runs=40,
                           seed=2024, pop=experiments.TIME_POPULATION,
                           xi=1e-4, max_evals=200_000, penalty="sqrt:1000",
                           out="out", plot=False, workers=0),
}

# vessel's feasible set narrows to a cusp; give it a longer squeeze
_ENGINEER_ITERS = {"truss": 2000, "spring": 2000, "vessel": 3000}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpso",
        description="Quantum-behaved particle swarm optimization experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_dims=False):
        p.add_argument("--config", help="JSON file with option defaults")
        p.add_argument("--algo", action="append", choices=ALGORITHMS,
                       help="algorithm (repeatable)")
        p.add_argument("--runs", type=int)
        p.add_argument("--seed", type=int, help="master seed")
        p.add_argument("--penalty", help="penalty schedule kind:coefficient")
        p.add_argument("--out", help="output directory")
        p.add_argument("--plot", action="store_const", const=True,
                       help="emit SVG plots")
        p.add_argument("--workers", type=int,
                       help="worker processes (0 = logical processors)")

    bench = sub.add_parser("bench", help="benchmark function comparison")
    bench.add_argument("--problem", choices=problem_names())
    bench.add_argument("--pop", type=int)
    bench.add_argument("--dim", type=int)
    bench.add_argument("--iters", type=int)
    bench.add_argument("--pr", type=float)
    bench.add_argument("--selection", type=int,
                       help="selection parameter S (0 disables replacement)")
    bench.add_argument("--alpha-start", dest="alpha_start", type=float)
    bench.add_argument("--alpha-end", dest="alpha_end", type=float)
    common(bench)

    eng = sub.add_parser("engineer", help="constrained engineering designs")
    eng.add_argument("--problem", choices=ENGINEER_PROBLEMS)
    eng.add_argument("--pop", type=int)
    eng.add_argument("--iters", type=int)
    eng.add_argument("--pr", type=float)
    eng.add_argument("--selection", type=int)
    eng.add_argument("--alpha-start", dest="alpha_start", type=float)
    eng.add_argument("--alpha-end", dest="alpha_end", type=float)
    common(eng)

    tc = sub.add_parser("timecomplexity", help="hitting-time statistics")
    tc.add_argument("--dims", help="dimension range A..B")
    tc.add_argument("--pop", type=int)
    tc.add_argument("--xi", type=float, help="target region threshold")
    tc.add_argument("--max-evals", dest="max_evals", type=int)
    common(tc)

    return parser


def _resolve_options(args: argparse.Namespace) -> dict:
    """defaults < config file < explicit flags."""
    resolved = dict(_DEFAULTS[args.command])
    if args.config:
        with open(args.config) as handle:
            file_options = json.load(handle)
        unknown = set(file_options) - set(resolved)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        resolved.update(file_options)
    provided = {k: v for k, v in vars(args).items()
                if k not in ("command", "config") and v is not None}
    resolved.update(provided)
    return resolved


def _parse_dims(text: str) -> list[int]:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise ValueError("dimension range must look like A..B")
    lo_i, hi_i = int(lo), int(hi)
    if lo_i < 1 or hi_i < lo_i:
        raise ValueError(f"invalid dimension range {text!r}")
    return list(range(lo_i, hi_i + 1))


def _workers(opts: dict) -> int:
    w = int(opts["workers"])
    return w if w > 0 else (os.cpu_count() or 1)


def _base_config(opts: dict) -> AlgorithmConfig:
    selection = int(opts.get("selection", 2))
    return AlgorithmConfig(
        population=int(opts.get("pop", 20)),
        iterations=int(opts.get("iters", 1000)),
        pr=float(opts.get("pr", 0.2)),
        selection_size=selection if selection > 0 else 2,
        natural_selection=selection > 0,
        alpha_start=float(opts.get("alpha_start", 1.0)),
        alpha_end=float(opts.get("alpha_end", 0.5)),
        penalty=PenaltyConfig.from_string(opts["penalty"]),
    )


def _prepare_out(opts: dict, want_plots: bool) -> Path:
    out = Path(opts["out"])
    out.mkdir(parents=True, exist_ok=True)
    if want_plots:
        (out / "plots").mkdir(exist_ok=True)
    return out


def _provenance(opts: dict) -> dict:
    clean = {}
    for key, value in sorted(opts.items()):
        clean[key] = value
    return clean


def _cmd_bench(opts: dict) -> int:
    problem_name = opts["problem"]
    algos = list(dict.fromkeys(opts["algo"]))
    dim = int(opts["dim"])
    runs = int(opts["runs"])
    master_seed = int(opts["seed"])
    base = _base_config(opts)
    base.resolved()  # validate early, before any run starts
    problem = make_problem(problem_name, dim)
    results = experiments.mean_best_experiment(
        problem_name, algos, int(opts["pop"]), problem.dimension,
        int(opts["iters"]), runs, master_seed,
        workers=_workers(opts), base_config=base)

    out = _prepare_out(opts, opts["plot"])
    rows = []
    cells = []
    for algo in algos:
        cell = results[algo]
        for rec in cell.records:
            rows.append(("bench", algo, problem_name, cell.population,
                         cell.dimension, cell.iterations, rec.seed,
                         rec.final_value, rec.evals_to_region))
        cells.append(dict(problem=problem_name, algorithm=algo,
                          P=cell.population, D=cell.dimension,
                          G=cell.iterations, runs=runs, mean=cell.mean,
                          sd=cell.sd, min=cell.min, max=cell.max))
        print(f"bench {problem_name} {algo}: P={cell.population} "
              f"D={cell.dimension} G={cell.iterations} runs={runs} "
              f"mean={cell.mean:.6g} sd={cell.sd:.6g} best={cell.min:.6g}")

    config = _provenance(opts)
    experiments.write_runs_csv(out / "runs.csv", rows, config, master_seed)
    experiments.write_summary_json(out / "summary.json", {
        "schema": 1, "command": "bench", "config": config,
        "master_seed": master_seed, "cells": cells,
    })
    if opts["plot"]:
        from .plotting import save_convergence_svg
        curves = {}
        for algo in algos:
            records = results[algo].records
            length = min(len(r.trajectory) for r in records)
            curves[algo] = [
                sum(r.trajectory[i] for r in records) / len(records)
                for i in range(length)
            ]
        save_convergence_svg(out / "plots" / f"bench_{problem_name}.svg",
                             curves, f"{problem_name} convergence", config)
    return 0


def _format_g(values) -> str:
    return ", ".join(f"g{i + 1}={v:.6g}" for i, v in enumerate(values))


def _cmd_engineer(opts: dict) -> int:
    problem_name = opts["problem"]
    if problem_name not in ENGINEER_PROBLEMS:
        raise ValueError(f"engineer requires a problem in {ENGINEER_PROBLEMS}")
    algos = list(dict.fromkeys(opts["algo"]))
    runs = int(opts["runs"])
    master_seed = int(opts["seed"])
    iters = int(opts["iters"]) or _ENGINEER_ITERS[problem_name]
    opts = dict(opts, iters=iters)
    base = _base_config(opts)
    base.resolved()
    problem = make_problem(problem_name)
    results = experiments.mean_best_experiment(
        problem_name, algos, int(opts["pop"]), problem.dimension, iters,
        runs, master_seed, workers=_workers(opts), base_config=base)

    out = _prepare_out(opts, opts["plot"])
    rows = []
    best_rows = {}
    for algo in algos:
        cell = results[algo]
        for rec in cell.records:
            rows.append(("engineer", algo, problem_name, cell.population,
                         cell.dimension, cell.iterations, rec.seed,
                         rec.final_value, rec.evals_to_region))
        best = experiments.best_engineering_result(problem, cell.records)
        best_rows[algo] = dict(
            x=[float(v) for v in best.position],
            f=best.objective,
            g=[float(v) for v in best.constraints],
            feasible=best.feasible,
            seed=best.seed,
        )
        xs = ", ".join(f"x{i + 1}={v:.8g}" for i, v in enumerate(best.position))
        print(f"engineer {problem_name} {algo}: f={best.objective:.8g} "
              f"[{xs}] {_format_g(best.constraints)} "
              f"feasible={best.feasible}")

    config = _provenance(opts)
    experiments.write_runs_csv(out / "runs.csv", rows, config, master_seed)
    experiments.write_summary_json(out / "summary.json", {
        "schema": 1, "command": "engineer", "config": config,
        "master_seed": master_seed, "best": best_rows,
    })
    if opts["plot"]:
        from .plotting import save_convergence_svg
        curves = {}
        for algo in algos:
            records = results[algo].records
            length = min(len(r.trajectory) for r in records)
            curves[algo] = [
                sum(r.trajectory[i] for r in records) / len(records)
                for i in range(length)
            ]
        save_convergence_svg(out / "plots" / f"engineer_{problem_name}.svg",
                             curves, f"{problem_name} convergence", config)
    return 0


def _cmd_timecomplexity(opts: dict) -> int:
    algos = list(dict.fromkeys(opts["algo"]))
    dims = _parse_dims(opts["dims"])
    runs = int(opts["runs"])
    master_seed = int(opts["seed"])
    xi = float(opts["xi"])
    max_evals = int(opts["max_evals"])
    population = int(opts["pop"])

    out = _prepare_out(opts, opts["plot"])
    rows = []
    table_rows = []
    means = {algo: [] for algo in algos}
    for algo in algos:
        print(f"timecomplexity {algo}: population={population} xi={xi:g} "
              f"runs={runs}")
        print("  dim     mean      variance        sd        se    mean/dim"
              "  censored")
        for dim in dims:
            result = experiments.time_to_region(
                dim, algo, xi=xi, runs=runs, max_evals=max_evals,
                master_seed=master_seed, population=population,
                workers=_workers(opts))
            s = result.summary
            means[algo].append(s.mean)
            table_rows.append(dict(algorithm=algo, dimension=dim,
                                   mean=s.mean, variance=s.variance, sd=s.sd,
                                   se=s.se, mean_per_dim=s.mean_per_dim,
                                   n_runs=s.n_runs, censored=s.censored))
            for rec in result.records:
                rows.append(("timecomplexity", algo, "constrained-sphere",
                             population, dim, max_evals, rec.seed,
                             rec.final_value, rec.evals_to_region))
            print(f"  {dim:3d} {s.mean:9.2f} {s.variance:13.2f} {s.sd:9.3f} "
                  f"{s.se:9.3f} {s.mean_per_dim:11.2f} {s.censored:9d}")

    correlations = {}
    for algo in algos:
        try:
            correlations[algo] = experiments.pearson(dims, means[algo])
            print(f"pearson {algo}: {correlations[algo]:.4f}")
        except ValueError:
            correlations[algo] = None
            print(f"pearson {algo}: undefined")

    config = _provenance(opts)
    experiments.write_runs_csv(out / "runs.csv", rows, config, master_seed)
    experiments.write_summary_json(out / "summary.json", {
        "schema": 1, "command": "timecomplexity", "config": config,
        "master_seed": master_seed, "rows": table_rows,
        "pearson": correlations,
    })
    if opts["plot"] and len(dims) > 1:
        from .plotting import save_complexity_svg
        save_complexity_svg(out / "plots" / "timecomplexity.svg",
                            dims, means, config)
    return 0


_COMMANDS = {
    "bench": _cmd_bench,
    "engineer": _cmd_engineer,
    "timecomplexity": _cmd_timecomplexity,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        opts = _resolve_options(args)
        handler = _COMMANDS[args.command]
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return handler(opts)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failure
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
