"""Batch experiment harness: comparison tables, hitting-time statistics,
correlation analysis and the heavy-tail sanity check.

Seeding: run r of every experiment uses ``derive_seed(master_seed, r)``,
so repeated invocations (and any worker-pool size) give identical
results; aggregation always follows run index, never completion order.

Hitting times are measured in objective evaluations at stage
granularity: the initial population counts as one stage of N
evaluations, each iteration as another, and ``evals_to_region`` is the
total evaluation count at the end of the first stage whose best value
reached the region.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .constrained import FEASIBILITY_TOL, constraint_values
from .optimizers import AlgorithmConfig, RunRecord, run
from .problems import ProblemSpec, make_problem
from .rng import derive_seed


@dataclass
class StatsSummary:
    """Sample moments of the hitting-time distribution over repeated runs."""

    n_runs: int
    mean: float
    variance: float
    sd: float
    se: float
    mean_per_dim: float
    censored: int = 0


@dataclass
class CellResult:
    """All runs of one (problem, algorithm, P, D, G) table cell."""

    problem: str
    algorithm: str
    population: int
    dimension: int
    iterations: int
    records: list[RunRecord]

    @property
    def finals(self) -> list[float]:
        return [rec.final_value for rec in self.records]

    @property
    def mean(self) -> float:
        vals = self.finals
        return sum(vals) / len(vals)

    @property
    def sd(self) -> float:
        vals = self.finals
        m = self.mean
        return math.sqrt(sum((v - m) ** 2 for v in vals) / len(vals))

    @property
    def min(self) -> float:
        return min(self.finals)

    @property
    def max(self) -> float:
        return max(self.finals)


def _run_named(task):
    name, dimension, cfg = task
    return run(make_problem(name, dimension), cfg)


def run_batch(problem_name: str, dimension: int,
              configs: Sequence[AlgorithmConfig], workers: int = 1) -> list[RunRecord]:
    """Execute seeded runs of a registered problem, in run-index order."""
    tasks = [(problem_name, dimension, cfg) for cfg in configs]
    if workers <= 1 or len(tasks) <= 1:
        return [_run_named(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_named, tasks))


def mean_best_experiment(problem_name: str, algorithms: Sequence[str],
                         population: int, dimension: int, iterations: int,
                         runs: int, master_seed: int, workers: int = 1,
                         base_config: Optional[AlgorithmConfig] = None,
                         ) -> dict[str, CellResult]:
    """Mean final best fitness per algorithm over `runs` seeded runs.

    Run r of every algorithm uses the same derived seed (paired
    comparisons).  Tunables other than (algorithm, P, G, seed) come from
    `base_config` when given.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    base = base_config if base_config is not None else AlgorithmConfig()
    results: dict[str, CellResult] = {}
    for algo in algorithms:
        configs = [replace(base, algorithm=algo, population=population,
                           iterations=iterations,
                           seed=derive_seed(master_seed, r))
                   for r in range(runs)]
        records = run_batch(problem_name, dimension, configs, workers=workers)
        results[algo] = CellResult(problem_name, algo, population, dimension,
                                   iterations, records)
    return results


def summarize_hits(hits: Sequence[int], dimension: int,
                   censored: int = 0) -> StatsSummary:
    """Plug-in sample moments of the hitting-time counts.

    Variance is the population form E[W^2] - E[W]^2 over the observed
    runs; the standard error divides by sqrt(n_runs).
    """
    n = len(hits)
    if n == 0:
        nan = math.nan
        return StatsSummary(0, nan, nan, nan, nan, nan, censored)
    mean = sum(hits) / n
    variance = sum((h - mean) ** 2 for h in hits) / n
    sd = math.sqrt(variance)
    se = sd / math.sqrt(n)
    return StatsSummary(n, mean, variance, sd, se, mean / dimension, censored)


# Settings of the hitting-time experiment: fixed contraction coefficient
# for the QPSO family, exploratory constriction parameters for PSO.
# Population and mutation probability are calibrated so the mean/dimension
# profile stays flat across D = 2..10 (large mutation rates inflate high-D
# hitting times: every fired mutation re-expands the contracted swarm).
TIME_ALPHA = 0.75
TIME_PSO_CHI = 0.73
TIME_PSO_C = 2.25
TIME_POPULATION = 30
TIME_PR = 0.05


@dataclass
class TimeToRegionResult:
    algorithm: str
    dimension: int
    xi: float
    summary: StatsSummary
    records: list[RunRecord]


def time_to_region(dimension: int, algorithm: str, xi: float = 1e-4,
                   runs: int = 40, max_evals: int = 200_000,
                   master_seed: int = 0, population: int = TIME_POPULATION,
                   workers: int = 1) -> TimeToRegionResult:
    """Hitting-time statistics on the constrained sphere.

    Each run executes until its fitness first reaches the region
    (<= xi) or `max_evals` evaluations elapse; runs that never hit are
    censored: counted, flagged, excluded from the moments.
    """
    if runs < 2:
        raise ValueError("runs must be >= 2")
    algorithm = algorithm.lower()
    iterations = max(1, math.ceil(max_evals / population) - 1)
    base = AlgorithmConfig(algorithm=algorithm, population=population,
                           iterations=iterations, target=xi,
                           stop_at_target=True)
    if algorithm == "pso":
        base = replace(base, chi=TIME_PSO_CHI, c1=TIME_PSO_C, c2=TIME_PSO_C)
    else:
        base = replace(base, alpha_start=TIME_ALPHA, alpha_end=TIME_ALPHA,
                       pr=TIME_PR)
    configs = [replace(base, seed=derive_seed(master_seed, r)) for r in range(runs)]
    records = run_batch("constrained-sphere", dimension, configs, workers=workers)
    hits = [rec.evals_to_region for rec in records if rec.evals_to_region is not None]
    censored = runs - len(hits)
    summary = summarize_hits(hits, dimension, censored)
    return TimeToRegionResult(algorithm, dimension, xi, summary, records)


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Pearson product-moment correlation coefficient."""
    n = len(xs)
    if n != len(ys):
        raise ValueError("pearson requires sequences of equal length")
    if n < 2:
        raise ValueError("pearson requires at least two points")
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    cov = 0.0
    var_x = 0.0
    var_y = 0.0
    for x, y in zip(xs, ys):
        dx = x - mean_x
        dy = y - mean_y
        cov += dx * dy
        var_x += dx * dx
        var_y += dy * dy
    if var_x == 0.0 or var_y == 0.0:
        raise ValueError("pearson is undefined for zero-variance input")
    return cov / math.sqrt(var_x * var_y)


def theorem1_check(lam: float, ns: Sequence[int], xi: float, samples: int,
                   master_seed: int = 0) -> list[float]:
    """Empirical tail probabilities P(|n^-lam * C| > xi) of the scaled
    standard Cauchy, one estimate per n; they shrink toward zero as n
    grows."""
    if lam <= 0:
        raise ValueError("lambda must be > 0")
    from .rng import RngStream
    out = []
    for idx, n in enumerate(ns):
        stream = RngStream(derive_seed(master_seed, idx))
        scale = float(n) ** (-lam)
        count = 0
        for _ in range(samples):
            if abs(scale * stream.cauchy_standard()) > xi:
                count += 1
        out.append(count / samples)
    return out


# --- engineering reporting ---------------------------------------------------

@dataclass
class EngineeringResult:
    """Table row for one run of a design problem: x, f(x) and all g_i."""

    seed: int
    position: np.ndarray
    objective: float
    constraints: list[float]
    feasible: bool


def engineering_rows(problem: ProblemSpec, records: Sequence[RunRecord],
                     tol: float = FEASIBILITY_TOL) -> list[EngineeringResult]:
    rows = []
    for rec in records:
        x = rec.final_position
        gs = constraint_values(problem, x)
        rows.append(EngineeringResult(
            seed=rec.seed,
            position=x,
            objective=float(problem.objective(x)),
            constraints=gs,
            feasible=all(g <= tol for g in gs),
        ))
    return rows


def best_engineering_result(problem: ProblemSpec, records: Sequence[RunRecord],
                            tol: float = FEASIBILITY_TOL) -> EngineeringResult:
    """Best-of-runs design: lowest raw objective among feasible rows
    (falling back to lowest violation if no run is feasible)."""
    rows = engineering_rows(problem, records, tol)
    feasible = [r for r in rows if r.feasible]
    if feasible:
        return min(feasible, key=lambda r: r.objective)
    return min(rows, key=lambda r: max(r.constraints))


# --- result files -------------------------------------------------------------

CSV_HEADER = ("experiment", "algorithm", "problem", "P", "D", "G", "seed",
              "final_value", "evals_to_region")


def format_number(value) -> str:
    """Fixed, locale-independent number formatting for CSV cells."""
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_runs_csv(path, rows: Sequence[Sequence], config: dict,
                   master_seed: int) -> None:
    """Write run rows with a provenance header (#schema, #config lines)."""
    lines = ["#schema=1"]
    provenance = dict(config)
    provenance["master_seed"] = master_seed
    lines.append("#config=" + json.dumps(provenance, sort_keys=True,
                                         separators=(",", ":")))
    lines.append(",".join(CSV_HEADER))
    for row in rows:
        lines.append(",".join(format_number(v) for v in row))
    with open(path, "w", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")


def write_summary_json(path, payload: dict) -> None:
    with open(path, "w") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")
