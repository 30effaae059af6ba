"""Exhaustive branch-and-bound solvers for tiny instances.

These are the ground truth that the approximation algorithms are checked
against. Processing times are scaled to integers internally so the search
runs on plain ints.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import BudgetExceeded, Instance, IntegralAssignment, common_denominator

MAKESPAN = "makespan"
MAXMIN = "maxmin"

DEFAULT_BUDGET = 10**8


@dataclass(frozen=True)
class OracleResult:
    optimum: Fraction
    witness: IntegralAssignment


class _Counter:
    def __init__(self, budget: int):
        self.budget = budget
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(f"search exceeded {self.budget} nodes")


def _scaled(instance: Instance):
    scale = common_denominator(instance.finite_times())
    rows = [
        [(i, int(p * scale)) for i, p in sorted(row.items())]
        for row in instance.times
    ]
    return scale, rows


def brute_force(instance: Instance, objective: str = MAKESPAN, budget: int = DEFAULT_BUDGET) -> OracleResult:
    """Optimal integral assignment by exhaustive search.

    ``objective`` is ``"makespan"`` (minimize the largest load) or
    ``"maxmin"`` (maximize the smallest load, empty machines included).
    The witness is the lexicographically smallest optimal ``machine_of``.
    Raises :class:`BudgetExceeded` once more than ``budget`` search nodes
    have been expanded.
    """
    if objective not in (MAKESPAN, MAXMIN):
        raise ValueError(f"unknown objective {objective!r}")
    scale, rows = _scaled(instance)
    counter = _Counter(budget)
    if objective == MAKESPAN:
        best = _min_makespan(instance.m, rows, counter)
        witness = _lex_first(instance.m, rows, counter, best, MAKESPAN)
    else:
        best = _max_min_load(instance.m, rows, counter)
        witness = _lex_first(instance.m, rows, counter, best, MAXMIN)
    return OracleResult(Fraction(best, scale), IntegralAssignment(witness))


def _min_makespan(m, rows, counter) -> int:
    order = sorted(range(len(rows)), key=lambda j: (-min(p for _, p in rows[j]), j))
    # greedy upper bound
    load = [0] * m
    for j in order:
        i, p = min(rows[j], key=lambda e: (load[e[0]] + e[1], e[0]))
        load[i] += p
    best = max(load)

    suffix_min = [0] * (len(order) + 1)
    for d in range(len(order) - 1, -1, -1):
        suffix_min[d] = suffix_min[d + 1] + min(p for _, p in rows[order[d]])

    load = [0] * m

    def dfs(depth: int, total: int, current: int):
        nonlocal best
        counter.tick()
        if depth == len(order):
            best = current
            return
        # average-load bound: some machine ends at least at the mean
        if -(-(total + suffix_min[depth]) // m) >= best:
            return
        for i, p in rows[order[depth]]:
            if load[i] + p >= best:
                continue
            load[i] += p
            dfs(depth + 1, total + p, max(current, load[i]))
            load[i] -= p

    dfs(0, 0, 0)
    return best


def _max_min_load(m, rows, counter) -> int:
    n = len(rows)
    order = sorted(range(n), key=lambda j: (-max(p for _, p in rows[j]), j))
    load = [0] * m
    for j in order:
        i, p = min(rows[j], key=lambda e: (load[e[0]], -e[1], e[0]))
        load[i] += p
    best = min(load)

    remaining = [0] * m
    for row in rows:
        for i, p in row:
            remaining[i] += p
    load = [0] * m

    def dfs(depth: int):
        nonlocal best
        counter.tick()
        if min(l + r for l, r in zip(load, remaining)) <= best:
            return
        if depth == n:
            best = min(load)
            return
        row = rows[order[depth]]
        for i, p in row:
            remaining[i] -= p
        for i, p in row:
            load[i] += p
            dfs(depth + 1)
            load[i] -= p
        for i, p in row:
            remaining[i] += p

    dfs(0)
    return best


def _lex_first(m, rows, counter, target: int, objective: str) -> tuple:
    """First assignment in natural job/machine order reaching ``target``."""
    n = len(rows)
    load = [0] * m
    remaining = [0] * m
    for row in rows:
        for i, p in row:
            remaining[i] += p
    choice = [0] * n

    def dfs(j: int) -> bool:
        counter.tick()
        if objective == MAXMIN and min(l + r for l, r in zip(load, remaining)) < target:
            return False
        if j == n:
            return True
        row = rows[j]
        for i, p in row:
            remaining[i] -= p
        found = False
        for i, p in row:
            if objective == MAKESPAN and load[i] + p > target:
                continue
            load[i] += p
            choice[j] = i
            found = dfs(j + 1)
            load[i] -= p
            if found:
                break
        for i, p in row:
            remaining[i] += p
        return found

    if not dfs(0):
        raise AssertionError("optimum not reproducible; oracle bookkeeping is broken")
    return tuple(choice)
