"""Penalty-method constraint handling and the engineering design problems.

Infeasible points are charged ``y(t) * sum(max(0, g_i(x)))`` on top of the
raw objective, with a nondecreasing weight schedule y(t) over iteration
number t.  Search-space bound violations are repaired by randomized
re-insertion (up to ten attempts per coordinate, then a clamp to the
nearer bound).

The three design problems (three-bar truss, tension/compression spring,
pressure vessel) are exposed as :class:`ProblemSpec` factories and under
the CLI names "truss", "spring", "vessel".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .problems import ConstraintSet, ProblemSpec, Vector, register_problem
from .problems import KERNEL_TRUSS, KERNEL_SPRING, KERNEL_VESSEL
from .rng import RngStream

_PENALTY_KINDS = ("constant", "sqrt", "linear")


@dataclass(frozen=True)
class PenaltyConfig:
    """Penalty weight schedule y(t): positive and nondecreasing in t.

    Kinds: "constant" -> c, "sqrt" -> c*sqrt(t), "linear" -> c*t.
    The default c*sqrt(t) with c=1000 grows without saturating, replacing
    the fixed-constant approach used by earlier penalty formulations.
    """

    kind: str = "sqrt"
    coefficient: float = 1000.0

    def __post_init__(self):
        if self.kind not in _PENALTY_KINDS:
            raise ValueError(f"penalty kind must be one of {_PENALTY_KINDS}")
        if not self.coefficient > 0:
            raise ValueError("penalty coefficient must be > 0")

    def weight(self, t: int) -> float:
        """y(t) for iteration t >= 1."""
        if t < 1:
            raise ValueError("iteration number must be >= 1")
        if self.kind == "constant":
            return self.coefficient
        if self.kind == "sqrt":
            return self.coefficient * math.sqrt(t)
        return self.coefficient * t

    @classmethod
    def from_string(cls, text: str) -> "PenaltyConfig":
        """Parse "kind:coefficient", e.g. "sqrt:1000"."""
        kind, sep, coeff = text.partition(":")
        if not sep:
            return cls(kind=kind)
        return cls(kind=kind, coefficient=float(coeff))


def repair_bounds(x: Vector,
                  box: tuple[Sequence[float], Sequence[float]],
                  stream: RngStream) -> np.ndarray:
    """Pull out-of-box coordinates back inside [q_i, p_i].

    A violating coordinate is shifted by the box width times a fresh
    uniform draw, toward the box, re-checking after each shift; after ten
    attempts it is clamped to the nearer bound.  In-box coordinates are
    returned untouched and consume no draws.
    """
    box_lo, box_hi = box
    out = [float(v) for v in x]
    for j in range(len(out)):
        lo = box_lo[j]
        hi = box_hi[j]
        if not lo < hi:
            raise ValueError(f"invalid box: [{lo}, {hi}]")
        v = out[j]
        if lo <= v <= hi:
            continue
        width = hi - lo
        for _ in range(10):
            if v < lo:
                v = v + width * stream.uniform01()
            elif v > hi:
                v = v - width * stream.uniform01()
            else:
                break
        if v < lo:
            v = lo
        elif v > hi:
            v = hi
        out[j] = v
    return np.asarray(out, dtype=float)


def violation_sum(x: Vector, cs: ConstraintSet) -> float:
    """Total positive part of the constraint values: sum(max(0, g_i(x))).

    Feasible points contribute exactly 0.  A constraint that evaluates to
    NaN (undefined point) counts as an infinite violation.
    """
    total = 0.0
    for g in cs.inequalities:
        value = g(x)
        if math.isnan(value):
            return math.inf
        if value > 0.0:
            total += value
    return total


def penalized_objective(x: Vector, t: int, spec: ProblemSpec,
                        penalty: PenaltyConfig) -> float:
    """f(x) when feasible, else f(x) + y(t) * violation_sum(x)."""
    if t < 1:
        raise ValueError("iteration number must be >= 1")
    value = spec.objective(x)
    if spec.constraints is None:
        return value
    violation = violation_sum(x, spec.constraints)
    if violation > 0.0:
        value = value + penalty.weight(t) * violation
    return value


# --- three-bar truss -------------------------------------------------------
# Two cross-section areas; minimize weight (2*sqrt(2)*x1 + x2)*l with
# l = 100 under three stress constraints with load P = stress limit = 2.

_SQRT2 = math.sqrt(2.0)
_TRUSS_L = 100.0
_TRUSS_P = 2.0
_TRUSS_SIGMA = 2.0


def truss_objective(x: Vector) -> float:
    return (2.0 * _SQRT2 * x[0] + x[1]) * _TRUSS_L


def truss_g1(x: Vector) -> float:
    num = _SQRT2 * x[0] + x[1]
    den = _SQRT2 * x[0] * x[0] + 2.0 * x[0] * x[1]
    return num / den * _TRUSS_P - _TRUSS_SIGMA


def truss_g2(x: Vector) -> float:
    den = _SQRT2 * x[0] * x[0] + 2.0 * x[0] * x[1]
    return x[1] / den * _TRUSS_P - _TRUSS_SIGMA


def truss_g3(x: Vector) -> float:
    den = x[0] + _SQRT2 * x[1]
    return 1.0 / den * _TRUSS_P - _TRUSS_SIGMA


def three_bar_truss_spec() -> ProblemSpec:
    lo = (0.0, 0.0)
    hi = (1.0, 1.0)
    cs = ConstraintSet((truss_g1, truss_g2, truss_g3), lo, hi)
    return ProblemSpec("truss", 2, lo, hi, truss_objective,
                       constraints=cs, kernel_id=KERNEL_TRUSS)


# --- tension/compression spring --------------------------------------------
# x1 wire diameter, x2 coil diameter, x3 number of active coils (treated
# as continuous on [2, 15]); minimize volume (x3 + 2)*x2*x1^2.

def spring_objective(x: Vector) -> float:
    return (x[2] + 2.0) * x[1] * x[0] * x[0]


def spring_g1(x: Vector) -> float:
    x2_cubed = x[1] * x[1] * x[1]
    x1_sq = x[0] * x[0]
    return 1.0 - (x2_cubed * x[2]) / (71785.0 * (x1_sq * x1_sq))


def spring_g2(x: Vector) -> float:
    x1_cubed = x[0] * x[0] * x[0]
    x1_fourth = x1_cubed * x[0]
    num = 4.0 * x[1] * x[1] - x[0] * x[1]
    den = 12566.0 * (x[1] * x1_cubed - x1_fourth)
    return num / den + 1.0 / (5108.0 * x[0] * x[0]) - 1.0


def spring_g3(x: Vector) -> float:
    return 1.0 - 140.45 * x[0] / (x[1] * x[1] * x[2])


def spring_g4(x: Vector) -> float:
    return (x[1] + x[0]) / 1.5 - 1.0


def tension_spring_spec() -> ProblemSpec:
    lo = (0.05, 0.25, 2.0)
    hi = (2.0, 1.3, 15.0)
    cs = ConstraintSet((spring_g1, spring_g2, spring_g3, spring_g4), lo, hi)
    return ProblemSpec("spring", 3, lo, hi, spring_objective,
                       constraints=cs, kernel_id=KERNEL_SPRING)


# --- pressure vessel --------------------------------------------------------
# x1 shell thickness, x2 head thickness, x3 inner radius, x4 length;
# minimize fabrication cost.  Thicknesses are continuous on
# [0.0625, 6.1875] (no 0.0625-multiple rounding).

def vessel_objective(x: Vector) -> float:
    return (0.6224 * x[0] * x[2] * x[3]
            + 1.7781 * x[1] * x[2] * x[2]
            + 3.166 * x[0] * x[0] * x[3]
            + 19.84 * x[0] * x[0] * x[2])


def vessel_g1(x: Vector) -> float:
    return -x[0] + 0.0193 * x[2]


def vessel_g2(x: Vector) -> float:
    return -x[1] + 0.00954 * x[2]


def vessel_g3(x: Vector) -> float:
    x3_cubed = x[2] * x[2] * x[2]
    return (-math.pi * x[2] * x[2] * x[3]
            - 4.0 / 3.0 * math.pi * x3_cubed
            + 1296000.0)


def vessel_g4(x: Vector) -> float:
    return x[3] - 240.0


def pressure_vessel_spec() -> ProblemSpec:
    lo = (0.0625, 0.0625, 10.0, 10.0)
    hi = (6.1875, 6.1875, 200.0, 200.0)
    cs = ConstraintSet((vessel_g1, vessel_g2, vessel_g3, vessel_g4), lo, hi)
    return ProblemSpec("vessel", 4, lo, hi, vessel_objective,
                       constraints=cs, kernel_id=KERNEL_VESSEL)


# Feasibility tolerance used when reporting engineering results: a design
# with every g_i below this counts as feasible.
FEASIBILITY_TOL = 1e-4


def constraint_values(spec: ProblemSpec, x: Vector) -> list[float]:
    """Evaluate every g_i at x (empty list for unconstrained problems)."""
    if spec.constraints is None:
        return []
    return [g(x) for g in spec.constraints.inequalities]


def is_feasible(spec: ProblemSpec, x: Vector, tol: float = FEASIBILITY_TOL) -> bool:
    return all(value <= tol for value in constraint_values(spec, x))


def _fixed_size_factory(builder, size):
    def factory(dimension: int = 0) -> ProblemSpec:
        if dimension not in (0, size):
            raise ValueError(f"problem has fixed dimension {size}")
        return builder()
    return factory


register_problem("truss", _fixed_size_factory(three_bar_truss_spec, 2))
register_problem("spring", _fixed_size_factory(tension_spring_spec, 3))
register_problem("vessel", _fixed_size_factory(pressure_vessel_spec, 4))
