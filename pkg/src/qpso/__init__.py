"""Quantum-behaved particle swarm optimizers with Cauchy mutation.

Public surface: seeded random streams (:mod:`qpso.rng`), benchmark and
engineering problems (:mod:`qpso.problems`, :mod:`qpso.constrained`),
the four optimizers (:mod:`qpso.optimizers`), and the experiment
harness (:mod:`qpso.experiments`).  The ``qpso`` CLI wraps the harness.
"""

from . import constrained as _constrained  # registers engineering problems
from ._backend import backend_name
from .constrained import (FEASIBILITY_TOL, PenaltyConfig, constraint_values,
                          is_feasible, penalized_objective,
                          pressure_vessel_spec, repair_bounds,
                          tension_spring_spec, three_bar_truss_spec,
                          violation_sum)
from .optimizers import (ALGORITHMS, AlgorithmConfig, Particle, RunRecord,
                         SwarmState, alpha_at, cauchy_mutate_mbest,
                         local_attractor, mean_best, natural_selection,
                         pso_step, qpso_move, run)
from .problems import (ConstraintSet, ProblemSpec, constrained_sphere_spec,
                       griewank, griewank_classic, make_problem,
                       problem_names, rastrigin, rosenbrock, sphere)
from .rng import RngStream, derive_seed

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS", "AlgorithmConfig", "ConstraintSet", "FEASIBILITY_TOL",
    "Particle", "PenaltyConfig", "ProblemSpec", "RngStream", "RunRecord",
    "SwarmState", "alpha_at", "backend_name", "cauchy_mutate_mbest",
    "constrained_sphere_spec", "constraint_values", "derive_seed",
    "griewank", "griewank_classic", "is_feasible", "local_attractor",
    "make_problem", "mean_best", "natural_selection", "penalized_objective",
    "pressure_vessel_spec", "problem_names", "pso_step", "qpso_move",
    "rastrigin", "repair_bounds", "rosenbrock", "run", "sphere",
    "tension_spring_spec", "three_bar_truss_spec", "violation_sum",
]
