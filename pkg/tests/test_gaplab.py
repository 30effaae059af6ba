import itertools
from fractions import Fraction as F

import pytest

from schedlab.configlp import project_to_assignment, verify_config_solution
from schedlab.core import IntegralAssignment
from schedlab.gaplab import (
    alpha_schedule,
    build_certificate,
    format_gap_report,
    gap_counts,
    gap_report,
    generate_gap_instance,
    generate_spine,
    integral_lower_bound_check,
    spine_certificate,
    verify_certificate_by_spine,
)
from schedlab.oracle import MAKESPAN, brute_force


def test_alpha_values():
    assert alpha_schedule(3).depth == 1
    four = alpha_schedule(4)
    assert four.depth == 3
    assert [four[h] for h in (1, 2, 3)] == [F(1, 3), F(4, 9), F(16, 27)]


def test_small_k_needs_flag():
    with pytest.raises(ValueError):
        generate_gap_instance(3)
    with pytest.raises(ValueError):
        generate_gap_instance(1, allow_small_k=True)


def test_k3_shape():
    g = generate_gap_instance(3, allow_small_k=True)
    assert (g.N, g.instance.m, g.instance.n) == (1, 4, 7)
    assert sorted(r.role for r in g.topology) == ["leaf", "leaf", "root", "root"]


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_structure(k):
    g = generate_gap_instance(k, allow_small_k=True)
    assert (g.instance.m, g.instance.n) == gap_counts(k)
    assert all(len(row) <= 2 for row in g.instance.times)
    assert set(g.instance.times[g.big_job]) == set(g.roots)
    assert set(g.instance.finite_times()) <= {1, k}


def test_counts_guard():
    assert gap_counts(6)[0] > 200_000
    with pytest.raises(ValueError):
        generate_gap_instance(6, max_machines=10_000)


def test_k3_leaf_and_root_weights():
    g = generate_gap_instance(3, allow_small_k=True)
    y = build_certificate(g)
    leaf = next(i for i, r in enumerate(g.topology) if r.role == "leaf")
    leaf_weights = {c.jobs: w for c, w in y.weights.items() if c.machine == leaf}
    assert list(leaf_weights.values()) == [F(1, 3)] * 3
    assert all(len(jobs) == 1 for jobs in leaf_weights)
    x = project_to_assignment(g.instance, y)
    for root in g.roots:
        assert x.weight(root, g.big_job) == F(1, 2)


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_explicit_certificate(k):
    g = generate_gap_instance(k, allow_small_k=True)
    y = build_certificate(g)
    assert verify_config_solution(g.instance, y) is None
    assert all(c.load(g.instance) <= k + 1 for c in y.weights)


def test_coverage_telescopes():
    g = generate_gap_instance(4)
    x = project_to_assignment(g.instance, build_certificate(g))
    for i, role in enumerate(g.topology):
        if role.role in ("internal", "pre-leaf"):
            assert x.weight(i, role.parent_job) == g.alpha[role.height]


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6, 9, 20])
def test_spine_certificate(k):
    g, _ = spine_certificate(k)
    assert g.instance.m == 2 * (g.N + 1)
    assert verify_certificate_by_spine(k) is None


def test_spine_detects_a_tampered_weight():
    g, y = spine_certificate(6)
    config = next(c for c in y.weights if len(c.jobs) == 2)
    y.weights[config] += F(1, 1000)
    assert verify_config_solution(g.instance, y) is not None


def test_spine_matches_explicit_for_small_k():
    for k in (4, 5):
        assert verify_certificate_by_spine(k) is None
        full = generate_gap_instance(k)
        assert verify_config_solution(full.instance, build_certificate(full)) is None
        spine = generate_spine(k)
        assert spine.N == full.N


def test_lower_bound_by_oracle():
    g = generate_gap_instance(3, allow_small_k=True)
    assert brute_force(g.instance, MAKESPAN).optimum >= 5
    for choice in itertools.product(*(sorted(row) for row in g.instance.times)):
        assert integral_lower_bound_check(g, IntegralAssignment(choice)) is None


def test_lower_bound_root_overload():
    g = generate_gap_instance(4)
    root = g.roots[0]
    machine_of = []
    for j, row in enumerate(g.instance.times):
        machine_of.append(root if root in row else min(row))
    claim = integral_lower_bound_check(g, IntegralAssignment(tuple(machine_of)))
    assert claim is None


def test_report():
    rows = gap_report([3, 4, 6, 9])
    assert [r.ratio for r in rows] == [F(5, 4), F(7, 5), F(11, 7), F(17, 10)]
    assert rows[0].lower_bound_check == "oracle"
    assert [r.fractional_check for r in rows] == ["explicit", "explicit", "spine", "spine"]
    text = format_gap_report(rows)
    assert text.splitlines()[0] == "k\tT_frac\tLB_int\tratio"
    assert text.splitlines()[-1] == "9\t10\t17\t17/10"


def test_ratio_tends_to_two():
    rows = gap_report([12, 20], oracle_max_k=0)
    assert [r.ratio for r in rows] == [F(23, 13), F(13, 7)]
    assert all(r.fractional_check == "spine" for r in rows)
