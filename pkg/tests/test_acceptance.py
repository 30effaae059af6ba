"""Acceptance suite: nine criteria, each one test, each timed against its limit.

A summary line per criterion is printed at the end of the pytest run.
"""

import functools
import itertools
import random
import time
from fractions import Fraction

import networkx as nx

from schedlab import (
    MAKESPAN,
    MAXMIN,
    Instance,
    approximate_makespan,
    brute_force,
    config_lp_feasible,
    config_lp_full,
    decide_T,
    find_c_lp,
    gap_report,
    gcd_granularity_round,
    half_integral_maxmin,
    half_integral_sparse,
    load,
    loads,
    lst_lp,
    makespan,
    maxmin_balance,
    min_load,
    price_column,
    project_to_assignment,
    shmoys_tardos_round,
    three_cut_round,
    verify_config_solution,
)
from schedlab.configlp import EXACT
from schedlab.gaplab import build_certificate, generate_gap_instance, spine_certificate
from schedlab.generators import random_instance
from schedlab.lp import granularity, lst_lp_violations, three_cut_lp

F = Fraction


class Clock:
    def __init__(self, limit):
        self.limit = limit
        self.start = time.perf_counter()

    def check(self):
        elapsed = time.perf_counter() - self.start
        assert elapsed < self.limit, f"took {elapsed:.1f}s, limit {self.limit}s"
        return elapsed


def unit_jobs():
    return Instance.from_matrix([[1, 1, 1], [1, 1, 1]])


def sized(seed, m_range, n_range):
    rng = random.Random(seed)
    return rng.randint(*m_range), rng.randint(*n_range)


# ---------------------------------------------------------------------------
# shared computations; criterion 9 reuses the solutions of 1, 2 and 8


@functools.lru_cache(maxsize=None)
def unit_jobs_runs():
    inst = unit_jobs()
    return inst, {T: config_lp_feasible(inst, T, EXACT) for T in (F(3, 2), F(7, 4), F(19, 10), F(2))}


@functools.lru_cache(maxsize=None)
def gap_certificates():
    out = {}
    for k in (3, 4):
        g = generate_gap_instance(k, allow_small_k=True)
        out[k] = (g.instance, build_certificate(g))
    for k in (6, 9):
        g, y = spine_certificate(k)
        out[k] = (g.instance, y)
    return out


def _column_generation_targets(inst):
    lo = find_c_lp(inst, granularity(inst))
    hi = brute_force(inst, MAKESPAN).optimum
    if lo < hi:
        return [lo, (lo + hi) / 2, hi]
    half_step = granularity(inst) / 2
    return [lo - half_step, lo, lo + half_step]


@functools.lru_cache(maxsize=None)
def column_generation_runs():
    runs = []
    for s in range(50):
        m, n = sized(5000 + s, (2, 3), (3, 10))
        inst = random_instance(m, n, (1, 6), 0.8, 5000 + s)
        for T in _column_generation_targets(inst):
            runs.append((inst, T, config_lp_feasible(inst, T, EXACT), config_lp_full(inst, T)))
    return runs


# ---------------------------------------------------------------------------


def test_criterion_1_sandwich_example():
    clock = Clock(1)
    inst, runs = unit_jobs_runs()
    assert lst_lp(inst, F(3, 2)).feasible
    for T in (F(3, 2), F(7, 4), F(19, 10)):
        assert runs[T] is None, f"configuration LP feasible at {T}"
    assert runs[F(2)] is not None
    assert verify_config_solution(inst, runs[F(2)]) is None
    clock.check()


def test_criterion_2_gap_family():
    clock = Clock(30)
    certs = gap_certificates()
    for k, (inst, y) in certs.items():
        assert y.target == k + 1
        assert verify_config_solution(inst, y) is None, f"k = {k}"
    inst3, _ = certs[3]
    assert (inst3.m, inst3.n) == (4, 7)
    assert brute_force(inst3, MAKESPAN).optimum >= 5
    rows = gap_report([3, 4, 6, 9])
    for row in rows:
        assert row.ratio == F(2 * row.k - 1, row.k + 1)
    assert rows[-1].ratio == F(17, 10) and rows[-1].ratio >= F(17, 10)
    clock.check()


def test_criterion_3_rounding_bound():
    clock = Clock(60)
    violations = []
    for s in range(200):
        m, n = sized(s, (1, 5), (1, 12))
        inst = random_instance(m, n, (1, 20), 0.7, s)
        T = find_c_lp(inst, granularity(inst))
        x = lst_lp(inst, T).assignment
        a = shmoys_tardos_round(inst, x, T)
        a.validate(inst)
        for i in range(m):
            support = [inst.times[j][i] for j in range(n) if x.weight(i, j) > 0]
            if load(inst, i, a) > T + max(support, default=0):
                violations.append((s, i))
        if makespan(inst, approximate_makespan(inst)) > 2 * brute_force(inst, MAKESPAN).optimum:
            violations.append((s, "ratio"))
    assert violations == []
    clock.check()


def test_criterion_4_gcd_granularity():
    clock = Clock(60)
    violations = []
    for s in range(100):
        m, n = sized(2000 + s, (1, 4), (1, 9))
        inst = random_instance(m, n, density=0.75, seed=2000 + s, values=[3, 6, 9])
        opt = brute_force(inst, MAKESPAN).optimum
        a = gcd_granularity_round(inst)
        g = granularity(inst)
        big = max(inst.finite_times())
        T = find_c_lp(inst, g)
        if makespan(inst, a) > (2 - F(3, 9)) * opt:
            violations.append((s, "ratio"))
        if any(l > T + big - g for l in loads(inst, a)):
            violations.append((s, "load"))
    assert violations == []
    clock.check()


def test_criterion_5_three_cut():
    clock = Clock(60)
    gamma = 6
    violations = []
    for s in range(100):
        m, n = sized(1000 + s, (1, 4), (1, 9))
        inst = random_instance(m, n, density=0.75, seed=1000 + s, gamma_band=gamma)
        opt = brute_force(inst, MAKESPAN).optimum
        T = three_cut_lp(inst, gamma).target
        a = three_cut_round(inst, gamma)
        if makespan(inst, a) > F(11, 6) * opt:
            violations.append((s, "ratio"))
        for i in range(m):
            ps = [inst.times[j][i] for j in a.jobs_on(i)]
            if sum(p > T / 2 for p in ps) > 1 or sum(p > T / 3 for p in ps) > 2:
                violations.append((s, i, "size cuts"))
            # four jobs of size >= gamma force T >= 4 gamma
            if T < 4 * gamma and len(ps) > 3:
                violations.append((s, i, "count cut"))
    assert violations == []
    clock.check()


def _machine_bound_holds(outcome, inst, T):
    state, a = outcome.state, outcome.assignment
    for i in range(inst.m):
        shared = sum((-neg for neg, _ in state.a[i][1:]), F(0))
        if load(inst, i, a) < shared / 2 + state.p_b[i]:
            return False
    return True


def _pairing_graph_ok(graph):
    if not nx.is_bipartite(graph):
        return False
    for comp in nx.connected_components(graph):
        sub = graph.subgraph(comp)
        if max((d for _, d in sub.degree()), default=0) > 2:
            return False
        if all(d == 2 for _, d in sub.degree()) and len(comp) % 2:
            return False
    return True


def test_criterion_6_maxmin_balancing():
    clock = Clock(120)
    violations = []
    for s in range(300):
        m, n = sized(3000 + s, (1, 5), (1, 10))
        inst = random_instance(m, n, (1, 15), 0.6, 3000 + s, balancing=True)
        opt = brute_force(inst, MAXMIN).optimum
        value = min_load(inst, maxmin_balance(inst))
        if 2 * value < opt:
            violations.append((s, "ratio"))
        g = granularity(inst)
        for T in (opt, opt + g, 2 * opt + g):
            if T <= 0:
                continue
            outcome = decide_T(inst, T)
            if not outcome.solved:
                if opt >= T:
                    violations.append((s, T, "unsound rejection"))
                continue
            if 2 * min_load(inst, outcome.assignment) < T:
                violations.append((s, T, "value"))
            if not _pairing_graph_ok(outcome.graph):
                violations.append((s, T, "graph"))
            if not _machine_bound_holds(outcome, inst, T):
                violations.append((s, T, "machine bound"))
    assert violations == []
    elapsed = clock.check()

    # soft: growth of wall time when the input doubles (reported only)
    timings = []
    for n in (200, 400):
        inst = random_instance(n // 4, n, (1, 50), 0.5, 77, balancing=True)
        start = time.perf_counter()
        maxmin_balance(inst)
        timings.append(time.perf_counter() - start)
    print(f"\nbalancing suite {elapsed:.1f}s; doubling n 200 -> 400 scaled time by {timings[1] / timings[0]:.2f}x")


def test_criterion_7_half_integral():
    clock = Clock(90)
    violations = []
    for s in range(150):
        m, n = sized(4000 + s, (1, 5), (1, 10))
        inst = random_instance(m, n, (1, 20), 0.7, 4000 + s)
        opt = brute_force(inst, MAXMIN).optimum
        half = half_integral_maxmin(inst)
        half.validate(inst)
        if 2 * min_load(inst, half) < opt:
            violations.append((s, "half"))
        sparse = half_integral_sparse(inst, half)
        sparse.validate(inst)
        if 4 * min_load(inst, sparse) < opt:
            violations.append((s, "sparse value"))
        if len(sparse.split_jobs()) > m // 2:
            violations.append((s, "split count"))
    assert violations == []
    clock.check()


def _best_by_enumeration(inst, i, duals, T):
    jobs = [j for j in range(inst.n) if i in inst.times[j]]
    best = F(0)
    for r in range(1, len(jobs) + 1):
        for combo in itertools.combinations(jobs, r):
            if sum(inst.times[j][i] for j in combo) <= T:
                best = max(best, sum(duals[j] for j in combo))
    return best


def test_criterion_8_column_generation():
    clock = Clock(120)
    runs = column_generation_runs()
    assert len(runs) == 150, len(runs)
    for inst, T, generated, full in runs:
        assert (generated is None) == (full is None), f"verdicts differ at T = {T}"
        if generated is not None:
            assert verify_config_solution(inst, generated) is None

    rng = random.Random(8)
    for call in range(1000):
        m, n = rng.randint(1, 3), rng.randint(1, 10)
        inst = random_instance(m, n, (1, 12), 0.8, 90_000 + call)
        i = rng.randrange(m)
        T = F(rng.randint(1, 30), rng.choice([1, 2, 3]))
        duals = {j: F(rng.randint(-5, 10), rng.randint(1, 4)) for j in range(n)}
        machine_dual = F(-rng.randint(0, 20), rng.randint(1, 3))
        best = _best_by_enumeration(inst, i, duals, T)
        config = price_column(inst, i, duals, machine_dual, T)
        if best + machine_dual > 0:
            assert config is not None
            assert config.load(inst) <= T
            assert sum((duals[j] for j in config.jobs), F(0)) == best
        else:
            assert config is None
    clock.check()


def test_criterion_9_projection_round_trip():
    solutions = []
    inst, runs = unit_jobs_runs()
    solutions += [(inst, y) for y in runs.values() if y is not None]
    solutions += list(gap_certificates().values())
    solutions += [(inst, y) for inst, _, y, _ in column_generation_runs() if y is not None]
    solutions += [(inst, y) for inst, _, _, y in column_generation_runs() if y is not None]
    assert len(solutions) > 50
    for inst, y in solutions:
        x = project_to_assignment(inst, y)
        assert lst_lp_violations(inst, x, y.target, coverage=y.coverage) == []
