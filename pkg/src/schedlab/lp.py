"""Assignment LP, its rounding, and the makespan approximation algorithms.

The assignment LP at target ``T`` asks for ``x >= 0`` with every job fully
assigned, every machine load at most ``T``, and ``x[i,j] = 0`` whenever
``p[i,j] > T``. The last family is realised by never creating those
variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import networkx as nx

from .core import (
    FractionalAssignment,
    Instance,
    IntegralAssignment,
    PreconditionViolated,
    rational_gcd,
)
from .simplex import LinearProgram, solve_feasibility


@dataclass(frozen=True)
class LstLpResult:
    feasible: bool
    target: Fraction
    assignment: Optional[FractionalAssignment] = None


def _assignment_lp(instance: Instance, T: Fraction, cuts: bool = False, count_cut: bool = False) -> Optional[LinearProgram]:
    lp = LinearProgram()
    per_job = [[] for _ in range(instance.n)]
    per_machine = [[] for _ in range(instance.m)]
    for j, row in enumerate(instance.times):
        for i, p in row.items():
            if p <= T:
                lp.add_variable((i, j))
                per_job[j].append((i, j))
                per_machine[i].append(((i, j), p))
        if not per_job[j]:
            return None
    for j in range(instance.n):
        lp.add_constraint({v: 1 for v in per_job[j]}, "==", 1)
    for i in range(instance.m):
        if per_machine[i]:
            lp.add_constraint({v: p for v, p in per_machine[i]}, "<=", T)
    if cuts:
        for i in range(instance.m):
            half = {v: 1 for v, p in per_machine[i] if p > T / 2}
            third = {v: 1 for v, p in per_machine[i] if p > T / 3}
            every = {v: 1 for v, _ in per_machine[i]}
            if half:
                lp.add_constraint(half, "<=", 1)
            if third:
                lp.add_constraint(third, "<=", 2)
            if every and count_cut:
                lp.add_constraint(every, "<=", 3)
    return lp


def _to_assignment(instance: Instance, point: dict) -> FractionalAssignment:
    rows = [dict() for _ in range(instance.n)]
    for (i, j), w in point.items():
        rows[j][i] = w
    return FractionalAssignment(instance.m, instance.n, tuple(rows))


def _single_machine(instance: Instance, T: Fraction) -> LstLpResult:
    total = sum(instance.finite_times(), Fraction(0))
    if total <= T:
        x = FractionalAssignment(1, instance.n, tuple({0: 1} for _ in range(instance.n)))
        return LstLpResult(True, T, x)
    return LstLpResult(False, T)


def lst_lp(instance: Instance, T) -> LstLpResult:
    """Solve the assignment LP at target makespan ``T`` exactly."""
    T = Fraction(T)
    if T <= 0:
        raise PreconditionViolated("target must be positive")
    if instance.m == 1:
        return _single_machine(instance, T)
    return _solve(instance, T, cuts=False)


def _solve(instance: Instance, T: Fraction, cuts: bool, count_cut: bool = False) -> LstLpResult:
    lp = _assignment_lp(instance, T, cuts, count_cut)
    if lp is None:
        return LstLpResult(False, T)
    point = solve_feasibility(lp)
    if point is None:
        return LstLpResult(False, T)
    return LstLpResult(True, T, _to_assignment(instance, point))


def lst_lp_violations(instance: Instance, x: FractionalAssignment, T, coverage=None) -> list:
    """Every assignment-LP row that ``x`` breaks at target ``T`` (empty when feasible).

    ``coverage(j)`` overrides the required total weight of job ``j``
    (default 1), for checking projections of partial solutions.
    """
    T = Fraction(T)
    problems = []
    for j, row in enumerate(x.x):
        want = 1 if coverage is None else coverage(j)
        if sum(row.values()) != want:
            problems.append(f"job {j}: coverage {sum(row.values())} != {want}")
        for i, w in row.items():
            if w < 0:
                problems.append(f"x[{i},{j}] negative")
            if not instance.is_finite(i, j):
                problems.append(f"x[{i},{j}] > 0 on infinite entry")
            elif instance.times[j][i] > T:
                problems.append(f"x[{i},{j}] > 0 but p = {instance.times[j][i]} > T")
    loads = [Fraction(0)] * instance.m
    for j, row in enumerate(x.x):
        for i, w in row.items():
            if instance.is_finite(i, j):
                loads[i] += w * instance.times[j][i]
    for i, l in enumerate(loads):
        if l > T:
            problems.append(f"machine {i}: load {l} > T = {T}")
    return problems


def granularity(instance: Instance) -> Fraction:
    return rational_gcd(instance.finite_times())


def _bracket(instance: Instance):
    mins = [min(row.values()) for row in instance.times]
    return max(mins), sum(mins)


def _smallest_feasible_multiple(instance: Instance, g: Fraction, feasible) -> Fraction:
    lo, hi = _bracket(instance)
    klo, khi = lo / g, hi / g
    if klo.denominator != 1 or khi.denominator != 1:
        raise PreconditionViolated(f"processing times are not all multiples of {g}")
    klo, khi = int(klo), int(khi)
    if feasible(klo * g):
        return klo * g
    if not feasible(khi * g):
        raise AssertionError("upper end of the search bracket is infeasible")
    # invariant: klo infeasible, khi feasible
    while khi - klo > 1:
        mid = (klo + khi) // 2
        if feasible(mid * g):
            khi = mid
        else:
            klo = mid
    return khi * g


def find_c_lp(instance: Instance, g) -> Fraction:
    """Smallest multiple of ``g`` at which the assignment LP is feasible.

    Binary search over ``[max_j min_i p, sum_j min_i p]``.
    """
    g = Fraction(g)
    if g <= 0:
        raise PreconditionViolated("granularity must be positive")
    if any((p / g).denominator != 1 for p in instance.finite_times()):
        raise PreconditionViolated(f"processing times are not all multiples of {g}")
    return _smallest_feasible_multiple(instance, g, lambda T: lst_lp(instance, T).feasible)


def shmoys_tardos_round(instance: Instance, x: FractionalAssignment, T) -> IntegralAssignment:
    """Round a feasible assignment-LP solution to an integral assignment.

    Each machine gets ``ceil(sum_j x[i,j])`` unit slots; its jobs, sorted by
    non-increasing processing time (ties by job index), pour their weight
    into consecutive slots. A job-saturating matching in the resulting
    slot graph exists and never leaves the support of ``x``; on every
    machine the load stays below ``T`` plus the largest supported job.
    """
    if x.is_integral():
        return x.to_integral()
    graph, job_nodes, _ = _slot_graph(instance, x, unit=Fraction(1))
    matching = nx.bipartite.hopcroft_karp_matching(graph, top_nodes=job_nodes)
    machine_of = []
    for j in range(instance.n):
        slot = matching.get(("job", j))
        if slot is None:
            raise AssertionError(f"job {j} unmatched; input is not a feasible LP solution")
        machine_of.append(slot[1])
    return IntegralAssignment(tuple(machine_of))


def _slot_graph(instance: Instance, x: FractionalAssignment, unit: Fraction, weights=None):
    """Bipartite job/slot graph with slots of size ``unit``.

    ``weights[i][j]`` overrides the sorting key (defaults to ``p[i,j]``).
    Returns the graph, the job nodes, and the slot nodes that are full.
    """
    graph = nx.Graph()
    job_nodes = [("job", j) for j in range(instance.n)]
    graph.add_nodes_from(job_nodes)
    per_machine = [[] for _ in range(instance.m)]
    for j, row in enumerate(x.x):
        for i, w in row.items():
            key = instance.times[j][i] if weights is None else weights(i, j)
            per_machine[i].append((-key, j, w))
    full_slots = []
    for i, items in enumerate(per_machine):
        items.sort()
        filled = Fraction(0)
        for _, j, w in items:
            start, end = filled, filled + w
            s = int(start // unit)
            while s * unit < end:
                graph.add_edge(("job", j), ("slot", i, s))
                s += 1
            filled = end
        for s in range(int(filled // unit)):
            full_slots.append(("slot", i, s))
    return graph, job_nodes, full_slots


def approximate_makespan(instance: Instance) -> IntegralAssignment:
    """Factor-2 approximation: smallest feasible LP target, then rounding."""
    if instance.m == 1:
        return IntegralAssignment((0,) * instance.n)
    g = granularity(instance)
    T = find_c_lp(instance, g)
    result = lst_lp(instance, T)
    return shmoys_tardos_round(instance, result.assignment, T)


def gcd_granularity_round(instance: Instance) -> IntegralAssignment:
    """Rounding at the smallest feasible multiple of the gcd of processing times.

    Loads stay within ``T* + M - g`` for gcd ``g`` and largest time ``M``,
    so the makespan is within ``2 - g/M`` of optimal.
    """
    # identical pipeline to approximate_makespan; kept separate because its
    # guarantee is stated in terms of the granularity
    return approximate_makespan(instance)


def _check_gamma_band(instance: Instance, gamma: Fraction) -> None:
    for p in instance.finite_times():
        if not gamma <= p <= 3 * gamma:
            raise PreconditionViolated(f"processing time {p} outside [{gamma}, {3 * gamma}]")


def three_cut_lp(instance: Instance, gamma) -> LstLpResult:
    """Smallest gcd-multiple target feasible for the assignment LP with cuts.

    Every machine gets ``sum_{p > T/2} x <= 1`` and ``sum_{p > T/3} x <= 2``,
    which hold for any schedule of makespan ``T``. Below ``4 gamma`` it also
    gets ``sum x <= 3``: four jobs of size at least ``gamma`` would exceed
    ``T``. The rounding keeps all cuts that were present, so below
    ``18/5 gamma`` a machine ends with at most ``T + T/2 + T/3``; above it,
    ``T`` plus one job of at most ``3 gamma`` is already within ``11/6 T``.
    """
    gamma = Fraction(gamma)
    if gamma <= 0:
        raise PreconditionViolated("gamma must be positive")
    _check_gamma_band(instance, gamma)

    def solve(T):
        if instance.m == 1:
            return _single_machine(instance, T)
        return _solve(instance, T, cuts=True, count_cut=T < 4 * gamma)

    T = _smallest_feasible_multiple(instance, granularity(instance), lambda t: solve(t).feasible)
    return solve(T)


def three_cut_round(instance: Instance, gamma) -> IntegralAssignment:
    """Makespan within ``11/6`` of optimal for times in ``[gamma, 3 gamma]``."""
    result = three_cut_lp(instance, gamma)
    return shmoys_tardos_round(instance, result.assignment, result.target)
