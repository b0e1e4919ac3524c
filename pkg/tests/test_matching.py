import numpy as np
import pytest

from monolearn.boolfn import Evaluator
from monolearn.generators import majority
from monolearn.lca import Seed
from monolearn.matching import (check_valid, filter_edges, hypercube_matching, is_maximal_above,
                                layer_thresholds, match_violations, materialize_layers, matching_weight)
from monolearn.oracle_exact import exact_l1_dist, exact_max_weight_violation_matching
from monolearn.poset import explicit_dag, full_cube, random_dag, truncated_cube

NONE = lambda v: None  # noqa: E731


def test_filter_edges_examples():
    chain = explicit_dag([(0, 1)])
    f = Evaluator.from_table(np.array([1.0, 0.0]))
    assert filter_edges(chain, f, 0.5, NONE, 0) == [1]
    assert filter_edges(chain, f, 1.5, NONE, 0) == []
    mono = Evaluator.from_table(np.array([0.0, 1.0]))
    assert filter_edges(chain, mono, 0.1, NONE, 0) == [] == filter_edges(chain, mono, 0.1, NONE, 1)


def test_filter_edges_skips_matched_and_rejects_bad_t():
    chain = explicit_dag([(0, 1)])
    f = Evaluator.from_table(np.array([1.0, 0.0]))
    assert filter_edges(chain, f, 0.5, lambda v: 0 if v == 1 else None, 0) == []
    with pytest.raises(ValueError):
        filter_edges(chain, f, 0.0, NONE, 0)


def test_layers_halve_down_to_eps():
    assert layer_thresholds(0.1) == [2, 1, 0.5, 0.25, 0.125, 0.0625]


def test_monotone_function_gives_empty_matching():
    P = full_cube(3)
    f = np.array([bin(i).count("1") for i in range(8)], dtype=float) / 3
    M = match_violations(P, f, 0.1, Seed(0))
    assert matching_weight(M, f) == 0 and all(M(v) is None for v in range(8))


def test_two_chain():
    chain = explicit_dag([(0, 1)])
    f = np.array([1.0, -1.0])
    M = match_violations(chain, f, 0.1, Seed(0))
    assert M(0) == 1 and matching_weight(M, f) == 2
    assert matching_weight(M, f) == pytest.approx(2 * exact_l1_dist(chain, f).distance)


def test_antidictator_square():
    P = full_cube(2)
    f = np.array([1.0, -1.0, 1.0, -1.0])  # f(x) = -x_1
    assert exact_max_weight_violation_matching(P, f) == pytest.approx(4)
    for branch in ("auto", "layered"):
        M = match_violations(P, f, 0.01, Seed(1), branch=branch)
        assert check_valid(M, f) and matching_weight(M, f) >= 0.96


def test_hypercube_matching_validity_and_band():
    f = Evaluator.from_table(np.array([1.0, -1.0, 1.0, -1.0]))
    M = hypercube_matching(f, 2, 0.1, Seed(0))
    assert check_valid(M.inner, f)
    n = 6
    cube = truncated_cube(n, 0.3)
    g = Evaluator.from_table(np.random.default_rng(0).uniform(-1, 1, 1 << n))
    M = hypercube_matching(g, n, 0.3, Seed(0))
    for v in range(1 << n):
        if not cube.contains(v):
            assert M(v) is None


def test_hypercube_matching_monotone_all_none():
    n = 4
    f = Evaluator.from_table(majority(n))
    M = hypercube_matching(f, n, 0.2, Seed(0))
    assert all(M(v) is None for v in range(1 << n))


def test_noisy_majority_weight_bound():
    n, eps = 8, 0.02
    rng = np.random.default_rng(0)
    f = majority(n)
    # flip 10% of the +1 labels down
    plus = np.nonzero(f > 0)[0]
    f[rng.choice(plus, len(f) // 10, replace=False)] = -1
    cube = truncated_cube(n, eps)
    dist = exact_l1_dist(full_cube(n), f).distance
    hits = 0
    for s in range(100):
        M = hypercube_matching(Evaluator.from_table(f), n, eps, Seed(s))
        assert check_valid(M.inner, f[cube.elements()])
        hits += matching_weight(M.inner, f[cube.elements()]) >= 2 ** n * (dist / 4 - 4 * eps)
    assert hits >= 95


def test_weight_examples():
    P = explicit_dag([(0, 1), (2, 3), (4, 5)])
    f = np.array([0.25, -0.25] * 3)
    M = match_violations(P, f, 0.1, Seed(0))
    assert matching_weight(M, f) == pytest.approx(1.5)
    assert matching_weight(match_violations(P, np.zeros(6), 0.1, Seed(0)), np.zeros(6)) == 0
    assert matching_weight(match_violations(explicit_dag([(0, 1)]), np.array([1.0, -1]), 0.1, Seed(0)),
                           np.array([1.0, -1])) == 2


def test_layers_are_maximal_above_threshold():
    rng = np.random.default_rng(4)
    P = random_dag(40, 0.15, rng)
    f = rng.uniform(-1, 1, 40)
    record = []
    materialize_layers(P, f, 0.1, Seed(0), record=record)
    for t, mate in record:
        assert is_maximal_above(P, f, mate, t)


def test_local_equals_materialized():
    rng = np.random.default_rng(6)
    for s in range(10):
        P = random_dag(25, 0.2, rng) if s % 2 else full_cube(4)
        f = rng.uniform(-1, 1, P.n_elements)
        a = match_violations(P, f, 0.2, Seed(s), branch="layered")
        b = match_violations(P, f, 0.2, Seed(s), branch="layered", mode="local")
        assert np.array_equal(a.mate_indices(), b.mate_indices())
        assert b.probe_stats()["layers"] == len(layer_thresholds(0.2))


def test_greedy_branch_when_eps_small():
    P = explicit_dag([(0, 1), (1, 2)])
    f = np.array([1.0, 0.0, -1.0])
    M = match_violations(P, f, 0.1, Seed(0))
    assert M.info["branch"] == "greedy"
    assert M(0) == 2 and matching_weight(M, f) == 2


def test_bad_eps():
    with pytest.raises(ValueError):
        match_violations(full_cube(2), np.zeros(4), 0.0, Seed(0))
