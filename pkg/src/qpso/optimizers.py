"""Swarm optimizers: constriction PSO, QPSO, QPSO-MO and QPSO-CD.

A run is a deterministic function of (problem, config): the config seed
creates one :class:`~qpso.rng.RngStream` that supplies every draw in a
documented order, so records are reproducible bit-for-bit.  The same
loops exist twice: a compiled kernel (``qpso._core``) used for built-in
problems when available, and the pure-Python reference in
``qpso._pykernel``.  Both follow identical draw order and arithmetic;
``tests/test_backend_parity.py`` asserts exact agreement.

Update rules, per iteration k (QPSO family):

* contraction coefficient ``alpha_at(k, M, a0, a1)``, linear a0 -> a1;
* ``mean_best``: coordinate-wise mean of the personal bests;
* QPSO-CD adds a Cauchy perturbation of the mean best (probability
  ``pr`` per iteration) and elitist replacement of the worst positions
  (``natural_selection``); QPSO-MO perturbs the global best instead and
  keeps no replacement;
* per particle: personal/global best refresh from the cached
  evaluation, then ``local_attractor`` and ``qpso_move``.

Constrained problems cache the raw objective and the violation sum per
point and score every comparison at the penalty weight y(t) of the
iteration performing it, so the rising schedule actually tightens the
pressure on remembered bests (a best that was cheap when its weight was
low does not stay cheap).  Evaluation accounting: N evaluations at
initialization plus N per iteration, total N*(M+1) for a full run.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .constrained import PenaltyConfig
from .problems import ProblemSpec, Vector
from .rng import RngStream

ALGORITHMS = ("pso", "qpso", "qpso-mo", "qpso-cd")
_QPSO_FAMILY = ("qpso", "qpso-mo", "qpso-cd")


@dataclass
class AlgorithmConfig:
    """Algorithm selector plus every tunable of the four optimizers.

    ``c1``/``c2`` default to 2.0 for the QPSO family and 2.05 for PSO
    when left as None.  ``target`` is the optional fitness threshold
    whose first hit is recorded as ``evals_to_region`` (checked after
    initialization and after each iteration).
    """

    algorithm: str = "qpso-cd"
    population: int = 20
    iterations: int = 1000
    c1: Optional[float] = None
    c2: Optional[float] = None
    alpha_start: float = 1.0
    alpha_end: float = 0.5
    pr: float = 0.2
    selection_size: int = 2
    natural_selection: bool = True
    chi: float = 0.729
    seed: int = 0
    target: Optional[float] = None
    stop_at_target: bool = False
    penalty: PenaltyConfig = field(default_factory=PenaltyConfig)

    def resolved(self) -> "AlgorithmConfig":
        """Validated copy with per-algorithm c1/c2 defaults filled in."""
        algo = self.algorithm.lower()
        if algo not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; "
                             f"choose from {', '.join(ALGORITHMS)}")
        if self.population < 2:
            raise ValueError("population must be >= 2")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if not 0.0 <= self.pr <= 1.0:
            raise ValueError("mutation probability pr must lie in [0, 1]")
        if self.selection_size < 1:
            raise ValueError("selection parameter S must be >= 1")
        if not (self.alpha_start >= self.alpha_end > 0.0):
            raise ValueError("alpha schedule requires alpha_start >= alpha_end > 0")
        if self.chi < 0.0:
            raise ValueError("constriction coefficient chi must be >= 0")
        default = 2.0 if algo in _QPSO_FAMILY else 2.05
        c1 = default if self.c1 is None else self.c1
        c2 = default if self.c2 is None else self.c2
        if algo in _QPSO_FAMILY and (c1 <= 0.0 or c2 <= 0.0):
            raise ValueError("QPSO variants require c1 > 0 and c2 > 0")
        if c1 < 0.0 or c2 < 0.0:
            raise ValueError("acceleration coefficients must be >= 0")
        if self.seed < 0:
            raise ValueError("seed must be >= 0")
        return replace(self, algorithm=algo, c1=c1, c2=c2)


@dataclass
class Particle:
    """Snapshot of one particle (velocity only for classical PSO)."""

    position: np.ndarray
    pbest_position: np.ndarray
    pbest_value: float
    velocity: Optional[np.ndarray] = None


@dataclass
class SwarmState:
    """Struct-of-arrays swarm: positions, bests and cached evaluations.

    Raw objective values and constraint-violation sums are cached
    separately so that a point can be re-scored under the penalty weight
    of any later iteration: the fitness of particle i at the current
    weight w is ``objectives[i] + w * violations[i]``.  Unconstrained
    problems keep ``violations`` at zero and ``penalty_weight`` is
    irrelevant.  ``objectives``/``violations`` describe each particle's
    *current* position from its most recent evaluation; the per-particle
    best refresh reads them at the start of the next iteration.
    """

    positions: np.ndarray
    pbest_positions: np.ndarray
    pbest_objectives: np.ndarray
    pbest_violations: np.ndarray
    objectives: np.ndarray
    violations: np.ndarray
    gbest_position: np.ndarray
    gbest_objective: float
    gbest_violation: float
    penalty_weight: float = 0.0
    iteration: int = 0
    mbest: Optional[np.ndarray] = None
    velocities: Optional[np.ndarray] = None

    @property
    def size(self) -> int:
        return self.positions.shape[0]

    def fitness(self, i: int) -> float:
        """Current position's penalized value at the current weight."""
        return float(self.objectives[i] + self.penalty_weight * self.violations[i])

    def pbest_value(self, i: int) -> float:
        return float(self.pbest_objectives[i]
                     + self.penalty_weight * self.pbest_violations[i])

    @property
    def gbest_value(self) -> float:
        return float(self.gbest_objective
                     + self.penalty_weight * self.gbest_violation)

    def particle(self, i: int) -> Particle:
        vel = None if self.velocities is None else self.velocities[i].copy()
        return Particle(self.positions[i].copy(), self.pbest_positions[i].copy(),
                        self.pbest_value(i), vel)


@dataclass
class RunRecord:
    """Result of one run.

    ``trajectory[k]`` is the best fitness evaluated anywhere up to and
    including iteration k+1 (each evaluation scored with the penalty
    weight of its own iteration), so it is non-increasing by
    construction.  ``final_value``/``final_position`` describe the
    global best under the *final* iteration's penalty weight; for
    unconstrained problems the two notions coincide.
    ``evals_to_region`` is the total evaluation count at the end of the
    first stage (initialization or iteration) whose best reached the
    configured target, or None.
    """

    trajectory: np.ndarray
    final_value: float
    final_position: np.ndarray
    evals_total: int
    evals_to_region: Optional[int]
    seed: int


def alpha_at(k: int, total: int, a0: float, a1: float) -> float:
    """Linear contraction-expansion schedule: a0 at the start, a1 at k = total."""
    return a0 - (a0 - a1) * k / total


def mean_best(swarm: SwarmState) -> np.ndarray:
    """Coordinate-wise mean of all personal-best positions.

    Accumulates sequentially over particles (ascending index) so the
    compiled kernel reproduces the same rounding.
    """
    pb = swarm.pbest_positions
    n, dim = pb.shape
    out = []
    for j in range(dim):
        acc = 0.0
        for i in range(n):
            acc += pb[i, j]
        out.append(acc / n)
    return np.asarray(out, dtype=float)


def local_attractor(pbest: Vector, gbest: Vector, c1: float, c2: float,
                    stream: RngStream) -> np.ndarray:
    """Per-coordinate convex mix of personal and global best.

    Draws r1, r2 per coordinate; weight phi = c1*r1 / (c1*r1 + c2*r2),
    so the result always lies between the two inputs.  A zero
    denominator (both draws exactly 0) falls back to phi = 0.5.
    """
    out = []
    for j in range(len(pbest)):
        r1 = stream.uniform01()
        r2 = stream.uniform01()
        a = c1 * r1
        b = c2 * r2
        den = a + b
        phi = 0.5 if den == 0.0 else a / den
        out.append(phi * pbest[j] + (1.0 - phi) * gbest[j])
    return np.asarray(out, dtype=float)


def qpso_move(position: Vector, attractor: Vector, mbest: Vector,
              alpha: float, stream: RngStream) -> np.ndarray:
    """Quantum position update around the attractor.

    Per coordinate: draw u in (0, 1) and a sign uniform s; the new value
    is ``p +/- alpha * |mbest - x| * ln(1/u)`` with + when s < 0.5.
    """
    out = []
    for j in range(len(position)):
        u = stream.uniform_open01()
        s = stream.uniform01()
        spread = alpha * abs(mbest[j] - position[j]) * math.log(1.0 / u)
        if s < 0.5:
            out.append(attractor[j] + spread)
        else:
            out.append(attractor[j] - spread)
    return np.asarray(out, dtype=float)


def mutation_offsets(dim: int, pr: float, stream: RngStream) -> Optional[list[float]]:
    """Cauchy mutation offsets, or None when the gate does not fire.

    One Bernoulli gate per call (no draw at all when pr == 0, keeping
    mutation-free configs stream-identical to plain QPSO); when it
    fires, each coordinate gets ``scale * cauchy`` with a fresh
    uniform(0,1) scale and a fresh standard Cauchy draw.
    """
    if not 0.0 <= pr <= 1.0:
        raise ValueError("mutation probability must lie in [0, 1]")
    if pr <= 0.0:
        return None
    gate = stream.uniform01()
    if not gate < pr:
        return None
    offsets = []
    for _ in range(dim):
        scale = stream.uniform01()
        draw = stream.cauchy_standard()
        offsets.append(scale * draw)
    return offsets


def cauchy_mutate_mbest(mbest: Vector, pr: float, stream: RngStream) -> np.ndarray:
    """Heavy-tailed perturbation of a swarm-level vector (mean best or
    global best), applied to every coordinate with probability pr per
    call; otherwise the vector is returned unchanged."""
    offsets = mutation_offsets(len(mbest), pr, stream)
    if offsets is None:
        return np.asarray([float(v) for v in mbest])
    return np.asarray([mbest[j] + offsets[j] for j in range(len(mbest))])


def natural_selection(swarm: SwarmState, selection_size: int) -> SwarmState:
    """Elitist replacement: positions of the worst Z particles are
    overwritten by the positions of the best Z, Z = round((N-1)/S)
    half-away-from-zero.

    Ranking uses each particle's current fitness at the swarm's current
    penalty weight (ties broken by index).  The cached evaluation moves
    with the copied position so it stays consistent; personal-best data
    is untouched.  Sources are snapshotted first, so overlapping ranks
    (large Z) still copy pre-selection positions.
    """
    if selection_size < 1:
        raise ValueError("selection parameter S must be >= 1")
    n = swarm.size
    z = int(math.floor((n - 1) / selection_size + 0.5))
    if z >= n:
        raise ValueError("selection would overwrite the entire swarm")
    if z == 0:
        return swarm
    fit = [swarm.fitness(i) for i in range(n)]
    order = sorted(range(n), key=lambda i: (fit[i], i))
    src = [(swarm.positions[order[k]].copy(), float(swarm.objectives[order[k]]),
            float(swarm.violations[order[k]])) for k in range(z)]
    for k in range(z):
        dst = order[n - z + k]
        swarm.positions[dst] = src[k][0]
        swarm.objectives[dst] = src[k][1]
        swarm.violations[dst] = src[k][2]
    return swarm


def pso_step(swarm: SwarmState, cfg: AlgorithmConfig, stream: RngStream,
             evaluate: Callable[[np.ndarray], tuple[float, float]],
             repair: Optional[Callable[[np.ndarray], np.ndarray]] = None) -> SwarmState:
    """One constriction-PSO iteration over the whole swarm.

    Per particle: fold the cached evaluation into pbest/gbest, then
    ``v <- chi * (v + c1*r1*(P - x) + c2*r2*(G - x))``, ``x <- x + v``
    with fresh r1, r2 per coordinate, optional bound repair, and one
    call of `evaluate` returning the (objective, violation) pair that is
    cached for the next fold.
    """
    if swarm.velocities is None:
        raise ValueError("pso_step requires a swarm with velocities")
    n, dim = swarm.positions.shape
    chi = cfg.chi
    c1 = cfg.c1
    c2 = cfg.c2
    for i in range(n):
        _fold_particle(swarm, i)
        x = swarm.positions[i]
        v = swarm.velocities[i]
        pb = swarm.pbest_positions[i]
        gb = swarm.gbest_position
        for j in range(dim):
            r1 = stream.uniform01()
            r2 = stream.uniform01()
            vel = chi * (v[j] + c1 * r1 * (pb[j] - x[j]) + c2 * r2 * (gb[j] - x[j]))
            v[j] = vel
            x[j] = x[j] + vel
        if repair is not None:
            swarm.positions[i] = repair(x)
        swarm.objectives[i], swarm.violations[i] = evaluate(swarm.positions[i])
    swarm.iteration += 1
    return swarm


def _fold_particle(swarm: SwarmState, i: int) -> None:
    """Refresh pbest/gbest of particle i from its cached evaluation.

    All comparisons happen at the swarm's current penalty weight, so a
    personal best that was feasible when found can displace a global
    best whose violation has since grown expensive.  Strictly-better
    replacement only; the global best is copied, never aliased.
    """
    w = swarm.penalty_weight
    if (swarm.objectives[i] + w * swarm.violations[i]
            < swarm.pbest_objectives[i] + w * swarm.pbest_violations[i]):
        swarm.pbest_positions[i] = swarm.positions[i]
        swarm.pbest_objectives[i] = swarm.objectives[i]
        swarm.pbest_violations[i] = swarm.violations[i]
    if (swarm.pbest_objectives[i] + w * swarm.pbest_violations[i]
            < swarm.gbest_objective + w * swarm.gbest_violation):
        swarm.gbest_objective = float(swarm.pbest_objectives[i])
        swarm.gbest_violation = float(swarm.pbest_violations[i])
        swarm.gbest_position = swarm.pbest_positions[i].copy()


def _use_compiled(problem: ProblemSpec, cfg: AlgorithmConfig) -> bool:
    if os.environ.get("QPSO_PURE_PYTHON"):
        return False
    if problem.kernel_id is None:
        return False
    from . import _backend
    return _backend.core() is not None


def run(problem: ProblemSpec, cfg: AlgorithmConfig) -> RunRecord:
    """Execute one full optimizer run; deterministic in (problem, cfg).

    Built-in problems run on the compiled kernel when it is importable
    (override with QPSO_PURE_PYTHON=1); both kernels produce identical
    records.  Non-finite fitness values are treated as +inf; a run whose
    global best would itself be non-finite aborts with a diagnostic.
    """
    rcfg = cfg.resolved()
    if _use_compiled(problem, rcfg):
        from . import _backend
        return _backend.run_compiled(problem, rcfg)
    from ._pykernel import run_python
    return run_python(problem, rcfg)
