"""Pure-Python reference kernel for the four optimizers.

This is the fallback selected when the compiled extension is not
available, and the executable specification the extension is tested
against: draw order and arithmetic here define the contract.

Draw order per run:

1. initialization: positions row-major (particle outer, coordinate
   inner), one ``uniform_in`` draw each;
2. each iteration: optional mutation gate (only when pr > 0; QPSO-CD /
   QPSO-MO), then per fired mutation coordinate a uniform scale followed
   by a Cauchy draw;
3. per particle: attractor draws r1, r2 per coordinate, then move draws
   u, s per coordinate (PSO: r1, r2 only), then any bound-repair draws.

Penalty iteration number: the initial evaluation and iteration 1 both
use t = 1.  Evaluations cache (raw objective, violation sum); the
penalized score of any cached point is recomputed at the weight of the
iteration doing the comparison.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .constrained import repair_bounds, violation_sum
from .optimizers import (AlgorithmConfig, RunRecord, SwarmState, _fold_particle,
                         alpha_at, local_attractor, mean_best, mutation_offsets,
                         natural_selection, pso_step, qpso_move)
from .problems import ProblemSpec
from .rng import RngStream


def _initial_swarm(problem: ProblemSpec, cfg: AlgorithmConfig,
                   stream: RngStream, with_velocity: bool) -> SwarmState:
    n = cfg.population
    dim = problem.dimension
    lo = problem.init_lo
    hi = problem.init_hi
    positions = np.empty((n, dim), dtype=float)
    for i in range(n):
        for j in range(dim):
            positions[i, j] = stream.uniform_in(lo[j], hi[j])
    velocities = np.zeros((n, dim), dtype=float) if with_velocity else None
    return SwarmState(
        positions=positions,
        pbest_positions=positions.copy(),
        pbest_objectives=np.full(n, math.inf),
        pbest_violations=np.zeros(n),
        objectives=np.full(n, math.inf),
        violations=np.zeros(n),
        gbest_position=positions[0].copy(),
        gbest_objective=math.inf,
        gbest_violation=0.0,
        velocities=velocities,
    )


def run_python(problem: ProblemSpec, cfg: AlgorithmConfig) -> RunRecord:
    """Reference implementation of ``qpso.optimizers.run``.

    `cfg` must already be resolved (c1/c2 concrete, algorithm normalized).
    """
    # Divisions by zero / overflows map to inf fitness by contract; keep
    # numpy quiet about them, same as the compiled kernel.
    old_err = np.seterr(all="ignore")
    try:
        return _run_python(problem, cfg)
    finally:
        np.seterr(**old_err)


def _run_python(problem: ProblemSpec, cfg: AlgorithmConfig) -> RunRecord:
    algo = cfg.algorithm
    stream = RngStream(cfg.seed)
    n = cfg.population
    iters = cfg.iterations
    constrained = problem.constrained
    box = None
    if constrained:
        box = (problem.constraints.box_lo, problem.constraints.box_hi)

    def weight_at(t: int) -> float:
        return cfg.penalty.weight(t) if constrained else 0.0

    evals = 0
    best_seen = math.inf

    def evaluate(x, w: float) -> tuple[float, float]:
        nonlocal evals, best_seen
        value = problem.objective(x)
        if not math.isfinite(value):
            value = math.inf
        violation = violation_sum(x, problem.constraints) if constrained else 0.0
        evals += 1
        scored = value + w * violation
        if scored < best_seen:
            best_seen = scored
        return value, violation

    swarm = _initial_swarm(problem, cfg, stream, with_velocity=(algo == "pso"))
    swarm.penalty_weight = weight_at(1)
    for i in range(n):
        obj, viol = evaluate(swarm.positions[i], swarm.penalty_weight)
        swarm.objectives[i] = obj
        swarm.violations[i] = viol
        swarm.pbest_objectives[i] = obj
        swarm.pbest_violations[i] = viol
        if swarm.pbest_value(i) < swarm.gbest_value:
            swarm.gbest_objective = obj
            swarm.gbest_violation = viol
            swarm.gbest_position = swarm.positions[i].copy()
    if not math.isfinite(swarm.gbest_value):
        raise RuntimeError(
            f"run aborted: every initial fitness value of {problem.name!r} "
            "is non-finite")

    target = cfg.target
    hit: Optional[int] = None
    if target is not None and best_seen <= target:
        hit = evals

    trajectory = []
    for k in range(1, iters + 1):
        swarm.penalty_weight = weight_at(k)
        if algo == "pso":
            _pso_iteration(swarm, cfg, stream, evaluate, box)
        else:
            _qpso_iteration(swarm, cfg, stream, evaluate, box, k, algo)
        swarm.iteration = k
        trajectory.append(best_seen)
        if target is not None and hit is None and best_seen <= target:
            hit = evals
        if hit is not None and cfg.stop_at_target:
            break

    for i in range(n):
        _fold_particle(swarm, i)

    return RunRecord(
        trajectory=np.asarray(trajectory, dtype=float),
        final_value=swarm.gbest_value,
        final_position=swarm.gbest_position.copy(),
        evals_total=evals,
        evals_to_region=hit,
        seed=cfg.seed,
    )


def _qpso_iteration(swarm, cfg, stream, evaluate, box, k, algo) -> None:
    n, dim = swarm.positions.shape
    alpha = alpha_at(k, cfg.iterations, cfg.alpha_start, cfg.alpha_end)
    mbest = mean_best(swarm)
    swarm.mbest = mbest

    offsets = None
    if algo == "qpso-cd" or algo == "qpso-mo":
        offsets = mutation_offsets(dim, cfg.pr, stream)
    mbest_used = mbest
    if algo == "qpso-cd" and offsets is not None:
        mbest_used = np.asarray([mbest[j] + offsets[j] for j in range(dim)])

    w = swarm.penalty_weight
    for i in range(n):
        _fold_particle(swarm, i)
        gbest = swarm.gbest_position
        if algo == "qpso-mo" and offsets is not None:
            gbest = np.asarray([gbest[j] + offsets[j] for j in range(dim)])
        attractor = local_attractor(swarm.pbest_positions[i], gbest,
                                    cfg.c1, cfg.c2, stream)
        moved = qpso_move(swarm.positions[i], attractor, mbest_used, alpha, stream)
        if box is not None:
            moved = repair_bounds(moved, box, stream)
        swarm.positions[i] = moved
        swarm.objectives[i], swarm.violations[i] = evaluate(swarm.positions[i], w)

    if algo == "qpso-cd" and cfg.natural_selection:
        natural_selection(swarm, cfg.selection_size)


def _pso_iteration(swarm, cfg, stream, evaluate, box) -> None:
    repair = None
    if box is not None:
        repair = lambda x: repair_bounds(x, box, stream)
    w = swarm.penalty_weight
    pso_step(swarm, cfg, stream, lambda x: evaluate(x, w), repair)
