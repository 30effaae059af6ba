"""Configuration LP: column generation, projection, and certificate checking.

A configuration of machine ``i`` at target ``T`` is a set of jobs whose
processing times on ``i`` sum to at most ``T``. The LP asks for a
distribution over configurations per machine such that every job is
covered exactly once in total.

Feasibility is decided by phase one of the simplex method on the master
problem. Job rows carry artificial columns whose total is minimized;
machine rows start from the empty configuration. New columns come from a
knapsack over the job duals.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

from .core import (
    BudgetExceeded,
    FractionalAssignment,
    Instance,
    InstanceFormatError,
    PreconditionViolated,
    _content_lines,
    format_rational,
    parse_rational,
)
from .simplex import LinearProgram, RevisedSimplex, solve_feasibility

EXACT = "exact"
RELAXED = "relaxed"

DEFAULT_EPSILON = Fraction(1, 100)
MAX_DP_CAPACITY = 10**6
MAX_ENUMERATION_ITEMS = 20


@dataclass(frozen=True, order=True)
class Configuration:
    machine: int
    jobs: tuple

    def __post_init__(self):
        object.__setattr__(self, "jobs", tuple(sorted(set(self.jobs))))

    def load(self, instance: Instance) -> Fraction:
        return sum((instance.times[j][self.machine] for j in self.jobs), Fraction(0))


@dataclass
class ConfigSolution:
    target: Fraction
    weights: dict = field(default_factory=dict)

    def add(self, config: Configuration, weight) -> None:
        weight = Fraction(weight)
        if weight == 0:
            return
        self.weights[config] = self.weights.get(config, Fraction(0)) + weight

    def coverage(self, j: int) -> Fraction:
        return 1


@dataclass
class PartialConfigSolution(ConfigSolution):
    """Configuration solution where job ``j`` need only be covered ``alpha[j]``."""

    alpha: dict = field(default_factory=dict)

    def coverage(self, j: int) -> Fraction:
        return self.alpha.get(j, Fraction(1))


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str
    machine: Optional[int] = None
    job: Optional[int] = None
    configuration: Optional[Configuration] = None

    def __str__(self):
        return f"{self.kind}: {self.detail}"


# ---------------------------------------------------------------------------
# pricing


def _knapsack_dp(weights, values, capacity: int):
    """Lexicographically smallest value-maximal item set under ``capacity``.

    ``weights`` and ``values`` are non-negative ints with positive values.
    """
    n = len(weights)
    # best[k][c]: max value using items k.. with capacity c
    best = [[0] * (capacity + 1) for _ in range(n + 1)]
    for k in range(n - 1, -1, -1):
        w, v = weights[k], values[k]
        nxt, cur = best[k + 1], best[k]
        for c in range(capacity + 1):
            take = nxt[c - w] + v if w <= c else -1
            cur[c] = take if take > nxt[c] else nxt[c]
    chosen = []
    c = capacity
    for k in range(n):
        w, v = weights[k], values[k]
        if w <= c and best[k + 1][c - w] + v == best[k][c]:
            chosen.append(k)
            c -= w
    return best[0][capacity], chosen


def _enumerate_best(times, values, capacity: Fraction):
    n = len(times)
    if n > MAX_ENUMERATION_ITEMS:
        raise BudgetExceeded(f"pricing by enumeration over {n} items")
    best_val, best_set = Fraction(0), ()
    for r in range(1, n + 1):
        for combo in itertools.combinations(range(n), r):
            if sum(times[k] for k in combo) <= capacity:
                val = sum(values[k] for k in combo)
                if val > best_val or (val == best_val and combo < best_set):
                    best_val, best_set = val, combo
    return best_val, list(best_set)


def best_configuration(instance: Instance, i: int, duals: Mapping[int, Fraction], T, epsilon=None):
    """Configuration of machine ``i`` maximizing the summed job duals.

    With ``epsilon`` given, processing times are rounded down onto a grid
    of ``epsilon * T / k`` (``k`` candidate jobs). Every set fitting ``T``
    still fits the rounded capacity, and every rounded-feasible set has
    true load at most ``(1 + epsilon) T``.

    Returns ``(value, Configuration)``; the empty configuration when no job
    has positive dual. Ties resolve to the lexicographically smallest set.
    """
    T = Fraction(T)
    items = [
        j for j in range(instance.n)
        if i in instance.times[j] and duals.get(j, 0) > 0 and instance.times[j][i] <= T
    ]
    if not items:
        return Fraction(0), Configuration(i, ())
    values = [Fraction(duals[j]) for j in items]
    vscale = math.lcm(*(v.denominator for v in values))
    ivalues = [int(v * vscale) for v in values]
    if epsilon is None:
        times = [instance.times[j][i] for j in items]
        scale = math.lcm(T.denominator, *(p.denominator for p in times))
        capacity = T * scale
        if capacity <= MAX_DP_CAPACITY:
            value, chosen = _knapsack_dp([int(p * scale) for p in times], ivalues, int(capacity))
            return Fraction(value, vscale), Configuration(i, tuple(items[k] for k in chosen))
        value, chosen = _enumerate_best(times, values, T)
        return value, Configuration(i, tuple(items[k] for k in chosen))
    delta = Fraction(epsilon) * T / len(items)
    capacity = math.floor(T / delta)
    if capacity > MAX_DP_CAPACITY:
        raise BudgetExceeded(f"relaxed pricing capacity {capacity} too large")
    weights = [math.floor(instance.times[j][i] / delta) for j in items]
    value, chosen = _knapsack_dp(weights, ivalues, capacity)
    return Fraction(value, vscale), Configuration(i, tuple(items[k] for k in chosen))


def price_column(instance: Instance, i: int, job_duals: Mapping[int, Fraction], machine_dual, T, epsilon=None):
    """Configuration with positive reduced cost for machine ``i``, or ``None``.

    The master minimizes total artificial slack, so a configuration ``C``
    improves it when ``machine_dual + sum_{j in C} job_duals[j] > 0``.
    """
    value, config = best_configuration(instance, i, job_duals, T, epsilon)
    if value + Fraction(machine_dual) > 0:
        return config
    return None


# ---------------------------------------------------------------------------
# master problem


def config_lp_feasible(instance: Instance, T, mode: str = EXACT, epsilon=DEFAULT_EPSILON) -> Optional[ConfigSolution]:
    """Decide the configuration LP at target ``T`` by column generation.

    Exact mode prices over configurations of load at most ``T``. Relaxed
    mode prices on a rounded knapsack: ``None`` still proves infeasibility
    at ``T``, while a returned solution may use configurations of load up
    to ``(1 + epsilon) T``.
    """
    T = Fraction(T)
    if T <= 0:
        raise PreconditionViolated("target must be positive")
    if mode not in (EXACT, RELAXED):
        raise ValueError(f"unknown mode {mode!r}")
    eps = None if mode == EXACT else Fraction(epsilon)
    m, n = instance.m, instance.n
    # rows 0..m-1 machines, m..m+n-1 jobs
    columns = [{i: 1} for i in range(m)] + [{m + j: 1} for j in range(n)]
    costs = [0] * m + [1] * n
    configs = {i: Configuration(i, ()) for i in range(m)}
    engine = RevisedSimplex([1] * (m + n), columns, costs, list(range(m + n)))
    seen = set(configs.values())
    while True:
        if engine.solve() == 0:
            break
        y = engine.duals()
        job_duals = {j: y[m + j] for j in range(n)}
        added = False
        for i in range(m):
            config = price_column(instance, i, job_duals, y[i], T, eps)
            if config is None or config in seen:
                continue
            col = {i: 1}
            col.update({m + j: 1 for j in config.jobs})
            configs[engine.add_column(col, 0)] = config
            seen.add(config)
            added = True
        if not added:
            return None
    solution = ConfigSolution(T)
    for k, value in engine.values().items():
        if k in configs:
            solution.add(configs[k], value)
    return solution


def enumerate_configurations(instance: Instance, i: int, T, limit: int = 10**5) -> list:
    """Every configuration of machine ``i`` with load at most ``T``."""
    T = Fraction(T)
    jobs = [j for j in range(instance.n) if i in instance.times[j] and instance.times[j][i] <= T]
    out = []

    def extend(start, chosen, total):
        out.append(Configuration(i, tuple(chosen)))
        if len(out) > limit:
            raise BudgetExceeded(f"more than {limit} configurations on machine {i}")
        for k in range(start, len(jobs)):
            p = instance.times[jobs[k]][i]
            if total + p <= T:
                chosen.append(jobs[k])
                extend(k + 1, chosen, total + p)
                chosen.pop()

    extend(0, [], Fraction(0))
    return out


def config_lp_full(instance: Instance, T, limit: int = 10**5) -> Optional[ConfigSolution]:
    """The configuration LP with every column written out explicitly."""
    T = Fraction(T)
    lp = LinearProgram()
    by_machine = []
    for i in range(instance.m):
        configs = enumerate_configurations(instance, i, T, limit)
        for c in configs:
            lp.add_variable(c)
        by_machine.append(configs)
    for configs in by_machine:
        lp.add_constraint({c: 1 for c in configs}, "==", 1)
    for j in range(instance.n):
        lp.add_constraint({c: 1 for configs in by_machine for c in configs if j in c.jobs}, "==", 1)
    point = solve_feasibility(lp)
    if point is None:
        return None
    solution = ConfigSolution(T)
    for c, w in point.items():
        solution.add(c, w)
    return solution


# ---------------------------------------------------------------------------
# projection and verification


def project_to_assignment(instance: Instance, y: ConfigSolution) -> FractionalAssignment:
    """``x[i,j]`` = total weight of machine-``i`` configurations containing ``j``."""
    rows = [dict() for _ in range(instance.n)]
    for config, w in y.weights.items():
        for j in config.jobs:
            rows[j][config.machine] = rows[j].get(config.machine, Fraction(0)) + w
    return FractionalAssignment(instance.m, instance.n, tuple(rows))


def verify_config_solution(instance: Instance, y: ConfigSolution, T=None) -> Optional[Violation]:
    """First violated configuration-LP constraint, or ``None`` if ``y`` is feasible.

    Checks, in order: configuration validity (machine range, finite
    entries, load at most ``T``), nonnegativity, machine weight sums of 1,
    and per-job coverage (1, or ``alpha[j]`` for partial solutions).
    """
    T = Fraction(y.target if T is None else T)
    machine_sum = [Fraction(0)] * instance.m
    cover = [Fraction(0)] * instance.n
    for config, w in sorted(y.weights.items()):
        i = config.machine
        if not 0 <= i < instance.m:
            return Violation("machine", f"configuration on unknown machine {i}", configuration=config)
        for j in config.jobs:
            if not 0 <= j < instance.n:
                return Violation("job", f"unknown job {j}", machine=i, configuration=config)
            if i not in instance.times[j]:
                return Violation("eligibility", f"job {j} infinite on machine {i}", i, j, config)
        load = config.load(instance)
        if load > T:
            return Violation("configuration load", f"load {load} exceeds {T}", i, configuration=config)
        if w < 0:
            return Violation("nonnegativity", f"weight {w} < 0", i, configuration=config)
        machine_sum[i] += w
        for j in config.jobs:
            cover[j] += w
    for i, s in enumerate(machine_sum):
        if s != 1:
            return Violation("machine sum", f"weights on machine {i} sum to {s}", machine=i)
    for j, c in enumerate(cover):
        want = y.coverage(j)
        if c != want:
            return Violation("job coverage", f"job {j} covered {c}, expected {want}", job=j)
    return None


# ---------------------------------------------------------------------------
# certificate text format


def format_config_solution(y: ConfigSolution) -> str:
    lines = ["config-solution 1", f"target {format_rational(y.target)}"]
    for config, w in sorted(y.weights.items()):
        jobs = ",".join(str(j) for j in config.jobs) or "-"
        lines.append(f"y {config.machine} {format_rational(w)} {jobs}")
    return "\n".join(lines) + "\n"


def parse_config_solution(text: str) -> ConfigSolution:
    lines = list(_content_lines(text))
    if not lines or lines[0][1].split() != ["config-solution", "1"]:
        raise InstanceFormatError(lines[0][0] if lines else 1, "expected header 'config-solution 1'")
    if len(lines) < 2 or lines[1][1].split()[0] != "target":
        raise InstanceFormatError(lines[-1][0], "expected 'target <T>'")
    try:
        solution = ConfigSolution(parse_rational(lines[1][1].split()[1]))
    except (ValueError, IndexError):
        raise InstanceFormatError(lines[1][0], "malformed target") from None
    for lineno, line in lines[2:]:
        parts = line.split()
        if len(parts) != 4 or parts[0] != "y" or not parts[1].isdigit():
            raise InstanceFormatError(lineno, f"expected 'y <machine> <weight> <jobs>', got {line!r}")
        try:
            w = parse_rational(parts[2])
            jobs = () if parts[3] == "-" else tuple(int(t) for t in parts[3].split(","))
        except ValueError as exc:
            raise InstanceFormatError(lineno, str(exc)) from None
        solution.add(Configuration(int(parts[1]), jobs), w)
    return solution
