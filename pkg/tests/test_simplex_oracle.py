import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from schedlab.core import BudgetExceeded, Instance, IntegralAssignment, makespan, min_load
from schedlab.gaplab import generate_gap_instance
from schedlab.generators import random_instance
from schedlab.oracle import MAKESPAN, MAXMIN, brute_force
from schedlab.simplex import LinearProgram, RevisedSimplex, Unbounded, check_point, solve_feasibility


def test_single_variable_feasible():
    lp = LinearProgram()
    lp.add_variable("x")
    lp.add_constraint({"x": 1}, "<=", 1)
    lp.add_constraint({"x": 1}, "==", F(1, 2))
    assert solve_feasibility(lp) == {"x": F(1, 2)}


def test_contradictory_bounds():
    lp = LinearProgram()
    lp.add_variable("x")
    lp.add_constraint({"x": 1}, ">=", 1)
    lp.add_constraint({"x": 1}, "<=", 0)
    assert solve_feasibility(lp) is None


def test_negative_right_hand_side_is_flipped():
    lp = LinearProgram()
    lp.add_variable("x")
    lp.add_variable("y")
    lp.add_constraint({"x": -1, "y": 1}, "<=", -2)
    lp.add_constraint({"x": 1}, "<=", 3)
    point = solve_feasibility(lp)
    assert point is not None and check_point(lp, point)


def test_undeclared_variable_rejected():
    lp = LinearProgram()
    with pytest.raises(KeyError):
        lp.add_constraint({"z": 1}, "<=", 1)


def test_unbounded_direction_detected():
    # min -x with only x - y = 0
    engine = RevisedSimplex([0], [{0: 1}, {0: 1}, {0: -1}], [0, -1, 0], [0])
    with pytest.raises(Unbounded):
        engine.solve()


def _lp_from_matrix(rows, rhs, senses):
    lp = LinearProgram()
    n = len(rows[0])
    for k in range(n):
        lp.add_variable(k)
    for row, b, s in zip(rows, rhs, senses):
        lp.add_constraint({k: c for k, c in enumerate(row)}, s, b)
    return lp


@settings(max_examples=80, deadline=None)
@given(
    st.integers(1, 4).flatmap(
        lambda n: st.lists(
            st.tuples(
                st.lists(st.integers(-3, 3), min_size=n, max_size=n),
                st.integers(-4, 6),
                st.sampled_from(["<=", ">=", "=="]),
            ),
            min_size=1,
            max_size=4,
        )
    )
)
def test_feasible_points_check_and_grid_agrees(system):
    rows = [r for r, _, _ in system]
    lp = _lp_from_matrix(rows, [b for _, b, _ in system], [s for _, _, s in system])
    point = solve_feasibility(lp)
    if point is not None:
        assert check_point(lp, point)
        return
    # no feasible point on a coarse grid either (a weak but independent check)
    n = len(rows[0])
    grid = [F(k, 2) for k in range(0, 13)]
    for cand in itertools.product(grid, repeat=n):
        assert not check_point(lp, dict(enumerate(cand)))


# ---------------------------------------------------------------------------
# oracle


def test_oracle_unit_jobs():
    inst = Instance.from_matrix([[1, 1, 1], [1, 1, 1]])
    assert brute_force(inst, MAKESPAN).optimum == 2
    assert brute_force(inst, MAXMIN).optimum == 1


def test_oracle_single_machine():
    inst = Instance.from_matrix([[2, 3]])
    assert brute_force(inst, MAKESPAN).optimum == 5
    assert brute_force(inst, MAXMIN).optimum == 5


def test_oracle_on_smallest_gap_instance():
    g = generate_gap_instance(3, allow_small_k=True)
    assert (g.instance.m, g.instance.n) == (4, 7)
    assert brute_force(g.instance, MAKESPAN).optimum == 5


def test_budget_exceeded():
    inst = random_instance(4, 12, (1, 50), 1.0, 3)
    with pytest.raises(BudgetExceeded):
        brute_force(inst, MAKESPAN, budget=10)


def test_lexicographically_first_witness():
    inst = Instance.from_matrix([[1, 1], [1, 1]])
    assert brute_force(inst, MAKESPAN).witness == IntegralAssignment((0, 1))


def _all_assignments(inst):
    for choice in itertools.product(*(sorted(row) for row in inst.times)):
        yield IntegralAssignment(choice)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(1, 6), st.integers(0, 10**6))
def test_oracle_matches_enumeration(m, n, seed):
    inst = random_instance(m, n, (1, 9), 0.7, seed)
    everything = list(_all_assignments(inst))
    best_ms = min(makespan(inst, a) for a in everything)
    best_mm = max(min_load(inst, a) for a in everything)
    ms = brute_force(inst, MAKESPAN)
    mm = brute_force(inst, MAXMIN)
    assert ms.optimum == best_ms == makespan(inst, ms.witness)
    assert mm.optimum == best_mm == min_load(inst, mm.witness)
    assert ms.witness.machine_of == min(a.machine_of for a in everything if makespan(inst, a) == best_ms)
    assert mm.witness.machine_of == min(a.machine_of for a in everything if min_load(inst, a) == best_mm)


def test_rational_times():
    inst = Instance.from_matrix([[F(1, 2), F(1, 3)], [F(1, 3), F(1, 2)]])
    assert brute_force(inst, MAKESPAN).optimum == F(1, 3)
