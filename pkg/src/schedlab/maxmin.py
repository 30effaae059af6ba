"""Max-min allocation: the combinatorial balancing algorithm and half-integral rounding.

For instances where every job fits on at most two machines,
:func:`decide_T` either returns an assignment with minimum load at least
``T/2`` or proves that no assignment reaches ``T``. :func:`maxmin_balance`
wraps it in a binary search.

For general instances, :func:`half_integral_maxmin` rounds the LP to a
solution where each job is whole or split in halves, and
:func:`half_integral_sparse` resolves all but at most ``m/2`` of the splits.
"""

from __future__ import annotations

import bisect
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import networkx as nx

from .core import (
    FractionalAssignment,
    HalfIntegralAssignment,
    Instance,
    IntegralAssignment,
    rational_gcd,
)
from .lp import _slot_graph
from .simplex import LinearProgram, solve_feasibility


class NotBalancingInstance(ValueError):
    """Some job is eligible on three or more machines."""


def check_balancing(instance: Instance) -> None:
    for j, row in enumerate(instance.times):
        if len(row) > 2:
            raise NotBalancingInstance(f"job {j} is eligible on {len(row)} machines")


@dataclass
class BalancingState:
    """Per-machine split of eligible jobs into private ``B_i`` and shared ``A_i``.

    ``a[i]`` holds sort keys ``(-p, job)`` so position 0 is the largest job
    (lowest index on ties).
    """

    instance: Instance
    a: list = field(default_factory=list)
    b: list = field(default_factory=list)
    p_a: list = field(default_factory=list)
    p_b: list = field(default_factory=list)

    @classmethod
    def initial(cls, instance: Instance) -> "BalancingState":
        check_balancing(instance)
        m = instance.m
        state = cls(instance, [[] for _ in range(m)], [set() for _ in range(m)], [Fraction(0)] * m, [Fraction(0)] * m)
        for j, row in enumerate(instance.times):
            if len(row) == 1:
                (i, p), = row.items()
                state.b[i].add(j)
                state.p_b[i] += p
            else:
                for i, p in row.items():
                    state.a[i].append((-p, j))
                    state.p_a[i] += p
        for keys in state.a:
            keys.sort()
        return state

    def p_a_prime(self, i: int) -> Fraction:
        return self.p_a[i] + self.a[i][0][0] if self.a[i] else Fraction(0)

    def a_jobs(self, i: int) -> list:
        return [j for _, j in self.a[i]]

    def twin(self, i: int, j: int) -> int:
        (other,) = (k for k in self.instance.times[j] if k != i)
        return other

    def move_to_b(self, i: int) -> int:
        """Pin machine ``i``'s largest shared job to ``i``; return its twin machine."""
        neg_p, j = self.a[i].pop(0)
        self.p_a[i] += neg_p
        self.b[i].add(j)
        self.p_b[i] -= neg_p
        other = self.twin(i, j)
        key = (-self.instance.times[j][other], j)
        pos = bisect.bisect_left(self.a[other], key)
        del self.a[other][pos]
        self.p_a[other] -= self.instance.times[j][other]
        return other


def preassign(state: BalancingState, T) -> bool:
    """Run the forced-move phase in place.

    Returns ``False`` as soon as some machine cannot reach ``T`` even with
    all its remaining jobs (then no assignment reaches ``T``); otherwise
    ``True`` with ``p(A'_i) + p(B_i) >= T`` on every machine.
    """
    T = Fraction(T)
    m = state.instance.m
    queue = deque(range(m))
    queued = [True] * m
    while queue:
        i = queue.popleft()
        queued[i] = False
        if state.p_a[i] + state.p_b[i] < T:
            return False
        if state.p_a_prime(i) + state.p_b[i] < T:
            other = state.move_to_b(i)
            for k in (i, other):
                if not queued[k]:
                    queue.append(k)
                    queued[k] = True
    return True


def build_pairing_graph(state: BalancingState) -> nx.Graph:
    """Vertices ``(i, j)`` for shared job ``j`` on machine ``i``.

    Edges join the two copies of each job and consecutive pairs
    (1st, 2nd), (3rd, 4th), ... of every machine's sorted shared list.
    """
    graph = nx.Graph()
    for i in range(state.instance.m):
        for _, j in state.a[i]:
            graph.add_node((i, j))
    for i in range(state.instance.m):
        jobs = state.a_jobs(i)
        for j in jobs:
            other = state.twin(i, j)
            graph.add_edge((i, j), (other, j), kind="job")
        for pos in range(0, len(jobs) - 1, 2):
            graph.add_edge((i, jobs[pos]), (i, jobs[pos + 1]), kind="pair")
    return graph


def color_and_assign(state: BalancingState, graph: nx.Graph) -> IntegralAssignment:
    """Two-colour the pairing graph; each shared job goes to its colour-1 copy."""
    coloring = nx.bipartite.color(graph)
    machine_of = [None] * state.instance.n
    for i in range(state.instance.m):
        for j in state.b[i]:
            machine_of[j] = i
    for (i, j), c in coloring.items():
        if c == 1:
            machine_of[j] = i
    if any(i is None for i in machine_of):
        raise AssertionError("colouring left a job unassigned")
    return IntegralAssignment(tuple(machine_of))


@dataclass(frozen=True)
class DecideOutcome:
    assignment: Optional[IntegralAssignment]
    state: BalancingState
    graph: Optional[nx.Graph] = None

    @property
    def solved(self) -> bool:
        return self.assignment is not None


def decide_T(instance: Instance, T) -> DecideOutcome:
    """Assignment with minimum load ``>= T/2``, or a proof that ``T`` is unreachable.

    ``outcome.assignment`` is ``None`` in the second case.
    """
    state = BalancingState.initial(instance)
    if not preassign(state, T):
        return DecideOutcome(None, state)
    graph = build_pairing_graph(state)
    return DecideOutcome(color_and_assign(state, graph), state, graph)


def maxmin_balance(instance: Instance) -> IntegralAssignment:
    """2-approximation for max-min allocation with at most two machines per job."""
    check_balancing(instance)
    g = rational_gcd(instance.finite_times())
    top = sum((max(row.values()) for row in instance.times), Fraction(0))
    lo, hi = 0, int(top / g) + 1  # decide_T succeeds at 0, fails above the total
    best = decide_T(instance, 0).assignment
    while hi - lo > 1:
        mid = (lo + hi) // 2
        outcome = decide_T(instance, mid * g)
        if outcome.solved:
            lo, best = mid, outcome.assignment
        else:
            hi = mid
    return best


# ---------------------------------------------------------------------------
# half-integral solutions


def maxmin_lp(instance: Instance, T) -> Optional[FractionalAssignment]:
    """Fractional assignment giving each machine truncated load ``>= T``.

    Processing times are capped at ``T`` so one oversized job cannot carry
    a machine on its own.
    """
    T = Fraction(T)
    lp = LinearProgram()
    per_machine = [[] for _ in range(instance.m)]
    for j, row in enumerate(instance.times):
        for i, p in row.items():
            lp.add_variable((i, j))
            per_machine[i].append(((i, j), min(p, T)))
        lp.add_constraint({(i, j): 1 for i in row}, "==", 1)
    for i in range(instance.m):
        lp.add_constraint({v: c for v, c in per_machine[i]}, ">=", T)
    point = solve_feasibility(lp)
    if point is None:
        return None
    rows = [dict() for _ in range(instance.n)]
    for (i, j), w in point.items():
        rows[j][i] = w
    return FractionalAssignment(instance.m, instance.n, tuple(rows))


def _largest_feasible_target(instance: Instance):
    g = rational_gcd(instance.finite_times())
    top = min(
        sum((row[i] for row in instance.times if i in row), Fraction(0)) for i in range(instance.m)
    )
    lo, hi = 0, int(top / g) + 1
    best = maxmin_lp(instance, 0)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        x = maxmin_lp(instance, mid * g)
        if x is not None:
            lo, best = mid, x
        else:
            hi = mid
    return lo * g, best


def round_half_integral(instance: Instance, x: FractionalAssignment, T) -> HalfIntegralAssignment:
    """Round a max-min LP point so each weight is 0, 1/2 or 1.

    Each machine's truncated weight is cut into half-unit slots, jobs in
    non-increasing truncated time. Every job takes two half slots and every
    full slot is filled; the minimum-cost maximum flow finds such an
    integral choice. A machine then loses at most half its largest
    truncated job.
    """
    T = Fraction(T)
    if x.is_integral():
        return HalfIntegralAssignment(x.m, x.n, x.x)
    graph, job_nodes, full_slots = _slot_graph(
        instance, x, unit=Fraction(1, 2), weights=lambda i, j: min(instance.times[j][i], T)
    )
    flow = nx.DiGraph()
    for job in job_nodes:
        flow.add_edge("source", job, capacity=2, weight=0)
    full = set(full_slots)
    for u, v in graph.edges():
        job, slot = (u, v) if u[0] == "job" else (v, u)
        flow.add_edge(job, slot, capacity=1, weight=0)
        flow.add_edge(slot, "sink", capacity=1, weight=-1 if slot in full else 0)
    result = nx.max_flow_min_cost(flow, "source", "sink")
    rows = [dict() for _ in range(instance.n)]
    for job in job_nodes:
        j = job[1]
        for slot, units in result[job].items():
            if units:
                i = slot[1]
                rows[j][i] = rows[j].get(i, Fraction(0)) + Fraction(units, 2)
    for slot in full_slots:
        if result[slot]["sink"] != 1:
            raise AssertionError(f"full slot {slot} left empty")
    out = HalfIntegralAssignment(instance.m, instance.n, tuple(rows))
    out.validate(instance)
    return out


def half_integral_maxmin(instance: Instance) -> HalfIntegralAssignment:
    """Half-integral assignment with minimum load at least half the integral optimum."""
    T, x = _largest_feasible_target(instance)
    return round_half_integral(instance, x, T)


def half_integral_sparse(instance: Instance, half: Optional[HalfIntegralAssignment] = None) -> HalfIntegralAssignment:
    """Half-integral assignment with at most ``m // 2`` split jobs.

    Starting from :func:`half_integral_maxmin`, every machine keeps at
    least half of its split jobs' half-weights: its largest split job at
    least half, and one job of each consecutive pair (2nd, 3rd),
    (4th, 5th), ... in full. Pair edges and same-job edges form paths and
    even cycles. A path whose two ends are both a machine's largest split
    job is the only place a split survives; one split is chosen there so
    that neighbouring pairs still get a whole job or half of their larger
    member. Minimum load ends at least a quarter of the integral optimum.
    """
    if half is None:
        half = half_integral_maxmin(instance)
    split = half.split_jobs()
    machine_of = {j: next(iter(row)) for j, row in enumerate(half.x) if len(row) == 1}
    if not split:
        return half

    # per machine: split jobs by non-increasing p, ties by index
    on = [[] for _ in range(instance.m)]
    for j in split:
        for i in half.x[j]:
            on[i].append((-instance.times[j][i], j))
    rank = {}
    for i in range(instance.m):
        on[i].sort()
        for pos, (_, j) in enumerate(on[i]):
            rank[(i, j)] = pos

    graph = nx.Graph()
    for j in split:
        a, b = tuple(half.x[j])
        graph.add_edge((a, j), (b, j), kind="job")
    for i in range(instance.m):
        jobs = [j for _, j in on[i]]
        for pos in range(1, len(jobs) - 1, 2):
            graph.add_edge((i, jobs[pos]), (i, jobs[pos + 1]), kind="pair")

    def special(v):
        return rank[v] == 0

    keep_split = set()
    black = set()
    for comp in nx.connected_components(graph):
        sub = graph.subgraph(comp)
        ends = [v for v in sub if sub.degree(v) == 1]
        if not ends:
            # even cycle
            black.update(v for v, c in nx.bipartite.color(sub).items() if c == 1)
            continue
        path = _walk(sub, ends[0])
        specials = [v for v in (path[0], path[-1]) if special(v)]
        if len(specials) < 2:
            start = specials[0] if specials else path[0]
            black.update(_alternate(_walk(sub, start)))
            continue
        cut = _split_position(path, rank)
        left, right = path[: 2 * cut], path[2 * cut + 2 :]
        keep_split.add(path[2 * cut][1])
        if left:
            black.update(_alternate(left))
        if right:
            black.update(_alternate(right[::-1]))

    rows = [dict() for _ in range(instance.n)]
    for j, i in machine_of.items():
        rows[j][i] = Fraction(1)
    for j in split:
        if j in keep_split:
            rows[j] = {i: Fraction(1, 2) for i in half.x[j]}
    for i, j in black:
        if j not in keep_split:
            rows[j] = {i: Fraction(1)}
    out = HalfIntegralAssignment(instance.m, instance.n, tuple(rows))
    out.validate(instance)
    return out


def _walk(graph, start) -> list:
    path = [start]
    prev = None
    while True:
        nxt = [v for v in graph.neighbors(path[-1]) if v != prev]
        if not nxt:
            return path
        prev = path[-1]
        path.append(nxt[0])


def _alternate(path) -> list:
    """Vertices at even positions: a proper colouring with ``path[0]`` kept."""
    return path[0::2]


def _split_position(path, rank) -> int:
    """Index ``t`` of the same-job edge ``(path[2t], path[2t+1])`` to leave split.

    The path alternates same-job and pair edges, starting and ending with
    same-job edges. Leaving edge ``t`` split strands one pair member on
    each side; that is harmless when the stranded half belongs to the
    larger member of its pair.
    """
    pairs = (len(path) - 2) // 2
    # left_larger[q]: in pair q, the member nearer path[0] ranks first
    left_larger = [rank[path[2 * q + 1]] < rank[path[2 * q + 2]] for q in range(pairs)]
    if pairs == 0 or left_larger[0]:
        return 0
    if not left_larger[-1]:
        return pairs
    for q in range(pairs - 1):
        if not left_larger[q] and left_larger[q + 1]:
            return q + 1
    raise AssertionError("no admissible split on path")
