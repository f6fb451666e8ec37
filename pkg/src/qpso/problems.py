"""Benchmark objectives and the problem-definition interface.

Indexing convention, stated once for the whole package: formulas are
written 1-based as usually printed; storage and code are 0-based.

Evaluators are pure scalar loops (no vectorized reductions) so that a
given input produces the same bits regardless of backend: the compiled
kernels replicate these exact operation orders.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

Vector = Sequence[float]

# Kernel ids shared with the compiled extension (keep in sync with _core.pyx).
KERNEL_SPHERE = 0
KERNEL_ROSENBROCK = 1
KERNEL_GRIEWANK = 2
KERNEL_RASTRIGIN = 3
KERNEL_CONSTRAINED_SPHERE = 10
KERNEL_TRUSS = 11
KERNEL_SPRING = 12
KERNEL_VESSEL = 13


@dataclass(frozen=True)
class ConstraintSet:
    """Inequality constraints g_i(x) <= 0 plus the repair box.

    `box_lo`/`box_hi` are the per-dimension search-space bounds used by
    bound repair; feasibility of a point means every inequality is <= 0.
    """

    inequalities: tuple[Callable[[Vector], float], ...]
    box_lo: tuple[float, ...]
    box_hi: tuple[float, ...]

    def __post_init__(self):
        if len(self.box_lo) != len(self.box_hi):
            raise ValueError("box bounds must have equal lengths")
        for lo, hi in zip(self.box_lo, self.box_hi):
            if not lo < hi:
                raise ValueError(f"invalid box: [{lo}, {hi}]")


@dataclass(frozen=True)
class ProblemSpec:
    """One optimization problem: objective, init box, optional constraints."""

    name: str
    dimension: int
    init_lo: tuple[float, ...]
    init_hi: tuple[float, ...]
    objective: Callable[[Vector], float]
    constraints: Optional[ConstraintSet] = None
    known_optimum: Optional[float] = None
    kernel_id: Optional[int] = field(default=None, repr=False)

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        if len(self.init_lo) != self.dimension or len(self.init_hi) != self.dimension:
            raise ValueError("init bounds must match the dimension")
        for lo, hi in zip(self.init_lo, self.init_hi):
            if not lo < hi:
                raise ValueError(f"invalid init range: [{lo}, {hi})")

    @property
    def constrained(self) -> bool:
        return self.constraints is not None and len(self.constraints.inequalities) > 0


def sphere(x: Vector) -> float:
    """Sum of squares; global minimum 0 at the origin."""
    acc = 0.0
    for v in x:
        acc += v * v
    return acc


def rosenbrock(x: Vector) -> float:
    """Banana-valley function; global minimum 0 at (1, ..., 1).

    Needs at least two coordinates.
    """
    n = len(x)
    if n < 2:
        raise ValueError("rosenbrock requires dimension >= 2")
    acc = 0.0
    for i in range(n - 1):
        a = x[i + 1] - x[i] * x[i]
        b = x[i] - 1.0
        acc += 100.0 * a * a + b * b
    return acc


def griewank(x: Vector) -> float:
    """Griewank variant with sqrt(i+1) cosine scaling (1-based i).

    The first coordinate is divided by sqrt(2), the second by sqrt(3),
    and so on; the minimum is still 0 at the origin.  See
    `griewank_classic` for the textbook sqrt(i) form.
    """
    acc = 0.0
    prod = 1.0
    for i, v in enumerate(x):
        acc += v * v
        prod *= math.cos(v / math.sqrt(i + 2.0))
    return acc / 4000.0 - prod + 1.0


def griewank_classic(x: Vector) -> float:
    """Textbook Griewank: cosine scaling sqrt(i) with 1-based i."""
    acc = 0.0
    prod = 1.0
    for i, v in enumerate(x):
        acc += v * v
        prod *= math.cos(v / math.sqrt(i + 1.0))
    return acc / 4000.0 - prod + 1.0


def rastrigin(x: Vector) -> float:
    """Rastrigin function; global minimum 0 at the origin."""
    acc = 0.0
    two_pi = 2.0 * math.pi
    for v in x:
        acc += v * v - 10.0 * math.cos(two_pi * v) + 10.0
    return acc


def _box(value_lo: float, value_hi: float, dim: int) -> tuple[tuple[float, ...], tuple[float, ...]]:
    return (value_lo,) * dim, (value_hi,) * dim


def sphere_spec(dimension: int) -> ProblemSpec:
    lo, hi = _box(-100.0, 100.0, dimension)
    return ProblemSpec("sphere", dimension, lo, hi, sphere,
                       known_optimum=0.0, kernel_id=KERNEL_SPHERE)


def rosenbrock_spec(dimension: int) -> ProblemSpec:
    if dimension < 2:
        raise ValueError("rosenbrock requires dimension >= 2")
    lo, hi = _box(-5.12, 5.12, dimension)
    return ProblemSpec("rosenbrock", dimension, lo, hi, rosenbrock,
                       known_optimum=0.0, kernel_id=KERNEL_ROSENBROCK)


def griewank_spec(dimension: int) -> ProblemSpec:
    lo, hi = _box(-600.0, 600.0, dimension)
    return ProblemSpec("griewank", dimension, lo, hi, griewank,
                       known_optimum=0.0, kernel_id=KERNEL_GRIEWANK)


def rastrigin_spec(dimension: int) -> ProblemSpec:
    lo, hi = _box(-5.12, 5.12, dimension)
    return ProblemSpec("rastrigin", dimension, lo, hi, rastrigin,
                       known_optimum=0.0, kernel_id=KERNEL_RASTRIGIN)


def constrained_sphere_spec(dimension: int) -> ProblemSpec:
    """Sphere with the half-space constraint sum(x) >= 0, init box [-10, 10]^D.

    The constraint is stored in the g(x) <= 0 convention: g(x) = -sum(x).
    This is the problem used by the hitting-time experiments.
    """
    if dimension < 1:
        raise ValueError("dimension must be >= 1")

    def g_sum(x: Vector) -> float:
        acc = 0.0
        for v in x:
            acc += v
        return -acc

    lo, hi = _box(-10.0, 10.0, dimension)
    cs = ConstraintSet(inequalities=(g_sum,), box_lo=lo, box_hi=hi)
    return ProblemSpec("constrained-sphere", dimension, lo, hi, sphere,
                       constraints=cs, known_optimum=0.0,
                       kernel_id=KERNEL_CONSTRAINED_SPHERE)


# CLI problem selectors.  Engineering problems register themselves from
# the constrained module at import time (see qpso/__init__.py).
_FACTORIES: dict[str, Callable[[int], ProblemSpec]] = {
    "sphere": sphere_spec,
    "rosenbrock": rosenbrock_spec,
    "griewank": griewank_spec,
    "rastrigin": rastrigin_spec,
    "constrained-sphere": constrained_sphere_spec,
}


def register_problem(name: str, factory: Callable[[int], ProblemSpec]) -> None:
    _FACTORIES[name] = factory


def problem_names() -> tuple[str, ...]:
    return tuple(sorted(_FACTORIES))


def make_problem(name: str, dimension: int = 0) -> ProblemSpec:
    """Build a registered problem; `dimension` is ignored by fixed-size ones."""
    try:
        factory = _FACTORIES[name]
    except KeyError:
        raise ValueError(
            f"unknown problem {name!r}; choose from {', '.join(problem_names())}"
        ) from None
    return factory(dimension)
