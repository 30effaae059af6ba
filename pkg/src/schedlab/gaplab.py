"""The tree family of unrelated graph-balancing instances with configuration-LP gap 2.

Two k-ary trees; every vertex is a machine, every edge a job that is short
on the endpoint nearer the root and long on the other. Each leaf ``v`` of
the k-ary part is joined to an extra machine ``v'`` by ``k`` parallel
edges, and one extra job is long on both roots.

Processing times are scaled by ``k``: short jobs take 1, long jobs take
``k``. The configuration LP is then feasible at ``T = k + 1`` while every
integral schedule has makespan at least ``2k - 1``.

Heights count from the ``v'`` machines (height 0) up to the roots
(height ``N``). ``alpha[h]`` is how much of its parent job a machine of
height ``h`` covers in the certificate; ``alpha[0] = 1/k`` and each level
multiplies by ``k/(k-1)``. ``N`` is the first height with
``alpha[N] >= 1/2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .configlp import ConfigSolution, Configuration, PartialConfigSolution, verify_config_solution
from .core import Instance, IntegralAssignment, format_rational, loads, makespan
from .oracle import MAKESPAN, brute_force

DEFAULT_MAX_MACHINES = 300_000


class CertificateInvalid(ArithmeticError):
    pass


@dataclass(frozen=True)
class AlphaSchedule:
    k: int
    values: tuple  # values[h] for h = 0..N

    @property
    def depth(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, h: int) -> Fraction:
        return self.values[h]


def alpha_schedule(k: int) -> AlphaSchedule:
    if k < 2:
        raise ValueError("k must be at least 2")
    values = [Fraction(1, k)]
    while True:
        values.append(values[-1] * Fraction(k, k - 1))
        if values[-1] >= Fraction(1, 2):
            return AlphaSchedule(k, tuple(values))


def gap_counts(k: int) -> tuple:
    """Closed-form ``(machines, jobs)`` of the gap instance for ``k``."""
    N = alpha_schedule(k).depth
    tree_vertices = (k**N - 1) // (k - 1)
    per_tree_machines = tree_vertices + k ** (N - 1)
    per_tree_jobs = (tree_vertices - 1) + k**N
    return 2 * per_tree_machines, 2 * per_tree_jobs + 1


@dataclass(frozen=True)
class MachineRole:
    role: str  # "root", "internal", "pre-leaf" or "leaf"
    height: int
    tree: int
    parent_job: int
    child_jobs: tuple


@dataclass(frozen=True)
class GapInstance:
    k: int
    N: int
    alpha: AlphaSchedule
    instance: Instance
    topology: tuple  # MachineRole per machine
    big_job: int

    @property
    def roots(self) -> tuple:
        return tuple(i for i, r in enumerate(self.topology) if r.role == "root")

    @property
    def target(self) -> int:
        return self.k + 1

    @property
    def integral_lower_bound(self) -> int:
        return 2 * self.k - 1


def generate_gap_instance(k: int, allow_small_k: bool = False, max_machines: int = DEFAULT_MAX_MACHINES) -> GapInstance:
    """Materialize the gap instance for ``k``.

    ``k`` in {2, 3} needs ``allow_small_k``; those members have depth 1 and
    are the ones small enough for exhaustive verification. Raises
    ``ValueError`` when the instance would exceed ``max_machines``.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if k < 4 and not allow_small_k:
        raise ValueError(f"k = {k} is below 4; pass allow_small_k to build it anyway")
    n_machines, n_jobs = gap_counts(k)
    if n_machines > max_machines:
        raise ValueError(f"k = {k} needs {n_machines} machines (limit {max_machines})")
    g = _construct(k, spine=False)
    if (g.instance.m, g.instance.n) != (n_machines, n_jobs):
        raise AssertionError("construction disagrees with closed-form counts")
    return g


def generate_spine(k: int) -> GapInstance:
    """One root-to-leaf path per tree, with every edge job kept.

    Above the pre-leaf level only the first child of each machine is
    expanded; the other ``k - 1`` child jobs stay as stubs eligible only on
    their parent. Because the construction is symmetric, the certificate
    restricted to the spine, with stub jobs owed only the share their
    missing subtree would not supply, is feasible exactly when the full
    certificate is. The spine has ``2(N + 1)`` machines for any ``k``.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    return _construct(k, spine=True)


def _construct(k: int, spine: bool) -> GapInstance:
    alpha = alpha_schedule(k)
    N = alpha.depth
    times = []  # per job: {machine: p}
    roles = []  # mutable [role, height, tree, parent_job, child_jobs]

    big = len(times)
    times.append({})

    def new_machine(role, height, tree, parent_job):
        roles.append([role, height, tree, parent_job, []])
        return len(roles) - 1

    for tree in range(2):
        root = new_machine("root", N, tree, big)
        times[big][root] = Fraction(k)
        frontier = [root]
        for height in range(N, 1, -1):
            nxt = []
            for parent in frontier:
                for ell in range(k):
                    job = len(times)
                    times.append({parent: Fraction(1)})
                    roles[parent][4].append(job)
                    if spine and ell > 0:
                        continue
                    child = new_machine("internal" if height - 1 > 1 else "pre-leaf", height - 1, tree, job)
                    times[job][child] = Fraction(k)
                    nxt.append(child)
            frontier = nxt
        for v in frontier:
            if roles[v][0] != "root":
                roles[v][0] = "pre-leaf"
            leaf = new_machine("leaf", 0, tree, None)
            for _ in range(k):
                job = len(times)
                times.append({v: Fraction(1), leaf: Fraction(k)})
                roles[v][4].append(job)
                roles[leaf][4].append(job)
    topology = []
    for role, height, tree, parent, children in roles:
        # a leaf's k parallel edges are its parent jobs
        topology.append(MachineRole(role, height, tree, -1 if role == "leaf" else parent, tuple(children)))
    instance = Instance(len(roles), len(times), tuple(times))
    return GapInstance(k, N, alpha, instance, tuple(topology), big)


def _level_weights(alpha: AlphaSchedule, h: int, is_root: bool) -> dict:
    """Certificate weights of one machine at height ``h >= 1``.

    Keys: ``"big"`` (each of the k sets {parent, child_l}), ``"small"``
    (all k children), ``"single"`` (each {child_l}, only at clamped roots).
    """
    k = alpha.k
    w_big = alpha[h - 1] / (k - 1)
    weights = {"big": w_big, "small": 1 - k * w_big, "single": Fraction(0)}
    if is_root and k * w_big > Fraction(1, 2):
        # cover the shared job exactly 1/2 per root; surplus goes to
        # singletons so child coverage is unchanged
        weights["big"] = Fraction(1, 2 * k)
        weights["single"] = w_big - Fraction(1, 2 * k)
    if any(w < 0 for w in weights.values()):
        raise CertificateInvalid(f"negative weight at height {h}: {weights}")
    return weights


def build_certificate(g: GapInstance) -> ConfigSolution:
    """Configuration-LP solution for the gap instance at ``T = k + 1``."""
    k = g.k
    y = ConfigSolution(Fraction(g.target))
    for i, role in enumerate(g.topology):
        if role.role == "leaf":
            for j in role.child_jobs:
                y.add(Configuration(i, (j,)), Fraction(1, k))
            continue
        w = _level_weights(g.alpha, role.height, role.role == "root")
        for j in role.child_jobs:
            y.add(Configuration(i, (role.parent_job, j)), w["big"])
            y.add(Configuration(i, (j,)), w["single"])
        y.add(Configuration(i, role.child_jobs), w["small"])
    return y


def spine_certificate(k: int):
    """Spine instance and its partial certificate at ``T = k + 1``.

    A stub job below a machine of height ``h`` is owed ``1 - alpha[h-1]``:
    the rest would come from the omitted subtree.
    """
    g = generate_spine(k)
    full = build_certificate(g)
    y = PartialConfigSolution(full.target, full.weights)
    for role in g.topology:
        if role.role in ("root", "internal", "pre-leaf"):
            for j in role.child_jobs:
                if len(g.instance.times[j]) == 1:
                    y.alpha[j] = 1 - g.alpha[role.height - 1]
    return g, y


def verify_certificate_by_spine(k: int):
    """Exact certificate check for any ``k`` through the spine instance."""
    g, y = spine_certificate(k)
    return verify_config_solution(g.instance, y)


@dataclass(frozen=True)
class CounterexampleClaim:
    makespan: Fraction
    loads: tuple


def integral_lower_bound_check(g: GapInstance, a: IntegralAssignment) -> Optional[CounterexampleClaim]:
    """``None`` if ``a`` has makespan at least ``2k - 1``; otherwise the loads."""
    a.validate(g.instance)
    value = makespan(g.instance, a)
    if value >= g.integral_lower_bound:
        return None
    return CounterexampleClaim(value, tuple(loads(g.instance, a)))


@dataclass(frozen=True)
class GapRow:
    k: int
    fractional_target: int
    integral_lower_bound: int
    ratio: Fraction
    fractional_check: str  # "explicit" or "spine"
    lower_bound_check: str  # "oracle" or "argument"


def gap_report(k_values, oracle_max_k: int = 3, explicit_max_machines: int = 5_000) -> list:
    """Fractional target, integral bound and their ratio for each ``k``.

    The fractional side is verified on the explicit certificate when the
    instance has at most ``explicit_max_machines`` machines, through the spine
    subinstance otherwise. For ``k <= oracle_max_k`` the integral bound is
    confirmed by exhaustive search. A failed check raises
    :class:`CertificateInvalid`.
    """
    rows = []
    for k in k_values:
        if k < 2:
            raise ValueError("k must be at least 2")
        machines, _ = gap_counts(k)
        if machines <= explicit_max_machines:
            g = generate_gap_instance(k, allow_small_k=True)
            problem = verify_config_solution(g.instance, build_certificate(g))
            how = "explicit"
        else:
            g = None
            problem = verify_certificate_by_spine(k)
            how = "spine"
        if problem is not None:
            raise CertificateInvalid(f"k = {k}: {problem}")
        lb_how = "argument"
        if k <= oracle_max_k:
            best = brute_force(g.instance, MAKESPAN).optimum
            if best < 2 * k - 1:
                raise CertificateInvalid(f"k = {k}: integral optimum {best} below {2 * k - 1}")
            lb_how = "oracle"
        rows.append(GapRow(k, k + 1, 2 * k - 1, Fraction(2 * k - 1, k + 1), how, lb_how))
    return rows


def format_gap_report(rows) -> str:
    lines = ["k\tT_frac\tLB_int\tratio"]
    for r in rows:
        lines.append(f"{r.k}\t{r.fractional_target}\t{r.integral_lower_bound}\t{format_rational(r.ratio)}")
    return "\n".join(lines) + "\n"
