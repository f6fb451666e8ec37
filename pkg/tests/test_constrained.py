"""Penalty handling, bound repair and the engineering design problems."""

import math

import numpy as np
import pytest

from helpers import FakeStream
from qpso.constrained import (PenaltyConfig, constraint_values, is_feasible,
                              penalized_objective, pressure_vessel_spec,
                              repair_bounds, tension_spring_spec,
                              three_bar_truss_spec, violation_sum)
from qpso.problems import ConstraintSet, ProblemSpec, make_problem
from qpso.rng import RngStream

SQRT2 = math.sqrt(2.0)


# --- penalty schedule -------------------------------------------------------

def test_penalty_weights():
    assert PenaltyConfig("constant", 5000.0).weight(17) == 5000.0
    assert PenaltyConfig("sqrt", 1000.0).weight(4) == 2000.0
    assert PenaltyConfig("linear", 10.0).weight(7) == 70.0


def test_penalty_weight_nondecreasing_and_positive():
    for kind in ("constant", "sqrt", "linear"):
        pc = PenaltyConfig(kind, 123.0)
        weights = [pc.weight(t) for t in range(1, 1001)]
        assert all(w > 0.0 for w in weights)
        assert all(b >= a for a, b in zip(weights, weights[1:]))


def test_penalty_validation():
    with pytest.raises(ValueError):
        PenaltyConfig("exp", 1.0)
    with pytest.raises(ValueError):
        PenaltyConfig("sqrt", 0.0)
    with pytest.raises(ValueError):
        PenaltyConfig("sqrt", 1.0).weight(0)


def test_penalty_from_string():
    pc = PenaltyConfig.from_string("linear:250")
    assert pc.kind == "linear" and pc.coefficient == 250.0
    assert PenaltyConfig.from_string("sqrt").coefficient == 1000.0


# --- bound repair ------------------------------------------------------------

BOX = ((0.0, 0.0), (1.0, 1.0))


def test_repair_leaves_interior_untouched():
    stream = FakeStream()  # any draw attempt would raise IndexError
    x = repair_bounds([0.25, 0.75], BOX, stream)
    assert list(x) == [0.25, 0.75]
    assert stream.drained


def test_repair_shift_arithmetic():
    # below the lower bound by 0.1, box width 1, draw 0.5 -> shifted up by 0.5
    stream = FakeStream([0.5])
    x = repair_bounds([-0.1, 0.5], BOX, stream)
    assert abs(x[0] - 0.4) < 1e-15
    assert x[1] == 0.5


def test_repair_clamps_after_ten_attempts():
    # zero draws never move the point; it ends clamped on the nearer bound
    stream = FakeStream([0.0] * 10)
    x = repair_bounds([7.5, 0.5], BOX, stream)
    assert x[0] == 1.0
    assert stream.drained
    stream = FakeStream([0.0] * 10)
    x = repair_bounds([-3.0, 0.5], BOX, stream)
    assert x[0] == 0.0


def test_repair_membership_over_random_violations():
    stream = RngStream(77)
    box = ((-2.0, 0.0, 5.0), (3.0, 1.0, 6.0))
    for _ in range(34_000):
        x = [stream.uniform_in(-50.0, 50.0) for _ in range(3)]
        repaired = repair_bounds(x, box, stream)
        for j in range(3):
            assert box[0][j] <= repaired[j] <= box[1][j]


def test_repair_rejects_bad_box():
    with pytest.raises(ValueError):
        repair_bounds([0.0], ((1.0,), (0.0,)), FakeStream())


# --- violation sum and penalized objective -----------------------------------

def _const_cs(*values):
    return ConstraintSet(tuple((lambda v: (lambda x: v))(v) for v in values),
                         (0.0,), (1.0,))


def test_violation_sum_feasible_is_zero():
    assert violation_sum([0.5], _const_cs(-1.0, 0.0, -0.25)) == 0.0


def test_violation_sum_positive_parts():
    assert violation_sum([0.5], _const_cs(0.5, -1.0, 0.25)) == 0.75


def test_violation_sum_nan_counts_as_infinite():
    assert violation_sum([0.5], _const_cs(math.nan, -1.0)) == math.inf


def test_violation_sum_truss_table_row():
    truss = three_bar_truss_spec()
    v = violation_sum(np.array([0.788658, 0.40828488]), truss.constraints)
    assert abs(v - 9.00037e-06) < 1e-10


def test_penalized_objective_feasible_is_exact():
    spec = ProblemSpec("toy", 1, (0.0,), (1.0,), lambda x: 5.0,
                       constraints=_const_cs(-1.0))
    assert penalized_objective([0.5], 3, spec, PenaltyConfig()) == 5.0


def test_penalized_objective_adds_weighted_violation():
    spec = ProblemSpec("toy", 1, (0.0,), (1.0,), lambda x: 5.0,
                       constraints=_const_cs(0.1))
    value = penalized_objective([0.5], 1, spec, PenaltyConfig("constant", 1000.0))
    assert abs(value - 105.0) < 1e-12


def test_penalized_objective_monotone_in_iteration():
    spec = ProblemSpec("toy", 1, (0.0,), (1.0,), lambda x: 5.0,
                       constraints=_const_cs(0.3))
    pc = PenaltyConfig("sqrt", 1000.0)
    values = [penalized_objective([0.5], t, spec, pc) for t in range(1, 1001)]
    assert all(b >= a for a, b in zip(values, values[1:]))
    with pytest.raises(ValueError):
        penalized_objective([0.5], 0, spec, pc)


def test_penalized_objective_unconstrained_passthrough():
    spec = ProblemSpec("toy", 1, (0.0,), (1.0,), lambda x: 2.5)
    assert penalized_objective([0.5], 9, spec, PenaltyConfig()) == 2.5


# --- three-bar truss ----------------------------------------------------------

TRUSS_ROWS = [
    # label, x, reported f
    ("pso", (0.78911058, 0.40702683), 263.89686),
    ("qpso", (0.788649, 0.408322), 263.89584),
    ("sp-qpso", (0.788796, 0.407898), 263.89500),
    ("qpso-cd", (0.788658, 0.40828488), 263.89465),
]


def test_truss_reported_rows():
    truss = three_bar_truss_spec()
    for _, x, f_ref in TRUSS_ROWS:
        assert abs(truss.objective(np.asarray(x)) - f_ref) <= 0.05


def test_truss_direct_substitution():
    truss = three_bar_truss_spec()
    x = np.array([1.0, 1.0])
    assert abs(truss.objective(x) - (2.0 * SQRT2 + 1.0) * 100.0) < 1e-9
    # direct substitution of the stress formulas
    den = SQRT2 + 2.0
    expected = [(SQRT2 + 1.0) / den * 2.0 - 2.0,
                1.0 / den * 2.0 - 2.0,
                1.0 / (1.0 + SQRT2) * 2.0 - 2.0]
    got = constraint_values(truss, x)
    assert got == pytest.approx(expected, abs=1e-12)
    assert is_feasible(truss, x)


def test_truss_negative_g_reproduction():
    truss = three_bar_truss_spec()
    for _, x, _f in TRUSS_ROWS:
        gs = constraint_values(truss, np.asarray(x))
        # g2, g3 are reported negative in every row; g1 only in the pso row
        assert gs[1] < 0.0 and gs[2] < 0.0
    pso_gs = constraint_values(truss, np.asarray(TRUSS_ROWS[0][1]))
    assert pso_gs[0] < 0.0


# --- tension/compression spring -----------------------------------------------

SPRING_ROWS = [
    ("pso", (0.0516, 0.3542, 11.7942), 0.01305),
    ("qpso", (0.0524, 0.2505, 2.0), 0.00275),
    ("sp-qpso", (0.05, 0.25, 2.0), 0.00250),
    ("qpso-cd", (0.0513, 0.2502, 2.0), 0.00263),
]


def test_spring_reported_objectives():
    spring = tension_spring_spec()
    for _, x, f_ref in SPRING_ROWS:
        assert abs(spring.objective(np.asarray(x)) - f_ref) <= 1e-4


def test_spring_quadratic_in_wire_diameter():
    spring = tension_spring_spec()
    x = np.array([0.06, 0.4, 5.0])
    doubled = np.array([0.12, 0.4, 5.0])
    assert abs(spring.objective(doubled) / spring.objective(x) - 4.0) < 1e-12


def test_spring_negative_g_reproduction():
    spring = tension_spring_spec()
    for label, x, _f in SPRING_ROWS:
        gs = constraint_values(spring, np.asarray(x))
        assert gs[2] < 0.0 and gs[3] < 0.0  # g3, g4 negative in every row
        if label == "pso":
            assert gs[0] < 0.0 and gs[1] < 0.0  # feasible row
        else:
            assert gs[1] < 0.0


def test_spring_box_and_dimension():
    spring = tension_spring_spec()
    assert spring.dimension == 3
    assert spring.constraints.box_lo == (0.05, 0.25, 2.0)
    assert spring.constraints.box_hi == (2.0, 1.3, 15.0)


# --- pressure vessel ------------------------------------------------------------

VESSEL_ROWS = [
    ("pso", (0.8125, 0.4375, 42.0984, 176.6365), 6059.714),
    ("qpso", (0.7783, 0.3849, 40.3289, 199.8899), 5886.189),
    ("sp-qpso", (0.7782, 0.3845, 40.3206, 199.9988), 5885.268),
    ("qpso-cd", (0.7776, 0.3848, 40.3278, 199.8865), 5886.137),
]


def test_vessel_reported_objectives():
    vessel = pressure_vessel_spec()
    for _, x, f_ref in VESSEL_ROWS:
        value = vessel.objective(np.asarray(x))
        assert abs(value - f_ref) / f_ref <= 0.005


def test_vessel_g4_boundary():
    vessel = pressure_vessel_spec()
    gs = constraint_values(vessel, np.array([1.0, 1.0, 50.0, 240.0]))
    assert gs[3] == 0.0


def test_vessel_negative_g_reproduction():
    # Every reported-negative g value reproduces as negative, except the
    # pso row's g3 (-1.164e-10 in print): |dg3/dx3| ~ 7e4 amplifies the
    # 4-decimal rounding of the printed x into a sign flip (+3.7 here).
    vessel = pressure_vessel_spec()
    for label, x, _f in VESSEL_ROWS:
        gs = constraint_values(vessel, np.asarray(x))
        assert gs[3] < 0.0
        if label != "pso":
            assert gs[2] < 0.0
        if label in ("pso", "qpso", "qpso-cd"):
            assert gs[1] < 0.0
    pso_gs = constraint_values(vessel, np.asarray(VESSEL_ROWS[0][1]))
    assert pso_gs[0] < 0.0


def test_fixed_dimension_factories():
    assert make_problem("truss").dimension == 2
    assert make_problem("vessel", 4).dimension == 4
    with pytest.raises(ValueError):
        make_problem("spring", 5)


# --- independent solver oracle ----------------------------------------------------

@pytest.mark.parametrize("name,start,f_expected,tol", [
    ("truss", (0.8, 0.4), 263.895843, 1e-3),
    ("spring", (0.052, 0.35, 11.5), 0.012665, 1e-4),
    ("vessel", (0.78, 0.39, 40.0, 199.0), 5885.3364, 0.5),
])
def test_constrained_optima_against_slsqp(name, start, f_expected, tol):
    # gradient-based solver started near the optimum pins the frozen
    # objective values used elsewhere in the suite
    minimize = pytest.importorskip("scipy.optimize").minimize
    prob = make_problem(name)
    cons = [{"type": "ineq", "fun": (lambda g: (lambda x: -g(x)))(g)}
            for g in prob.constraints.inequalities]
    bounds = list(zip(prob.constraints.box_lo, prob.constraints.box_hi))
    result = minimize(prob.objective, np.asarray(start), method="SLSQP",
                      bounds=bounds, constraints=cons,
                      options={"maxiter": 500, "ftol": 1e-12})
    # the success flag can be false at active-constraint corners (line
    # search stalls after convergence); the point itself is what matters
    assert max(constraint_values(prob, result.x)) <= 1e-6
    assert abs(result.fun - f_expected) <= tol
