import math

import numpy as np
import pytest

from monolearn.poset import (CycleError, MembershipError, Relation, explicit_dag, full_cube, is_monotone_table,
                             load_edge_list, random_dag, truncated_cube)


def test_truncated_cube_examples():
    P = truncated_cube(4, 0.5)
    assert P.threshold == pytest.approx(math.sqrt(8 * math.log(4)))
    assert P.n_elements == 14
    assert truncated_cube(2, 0.5).n_elements == 4
    top2 = 0b0111
    assert P.all_succs(top2) == []
    assert not P.contains(0b1111) and not P.contains(0)


def test_truncated_cube_bad_eps():
    with pytest.raises(ValueError):
        truncated_cube(4, 1.5)


def test_full_cube_predecessors():
    P = full_cube(3)
    assert len(P.all_preds(0b111)) == 7
    assert P.max_degree == 7


@pytest.mark.parametrize("n", [8, 10, 12])
@pytest.mark.parametrize("eps", [0.1, 0.25, 0.5])
def test_excluded_mass_at_most_eps(n, eps):
    assert truncated_cube(n, eps).excluded_fraction() <= eps


def test_measured_degree_within_bound():
    P = truncated_cube(8, 0.3)
    for v in P.elements():
        assert len(P.all_preds(v)) <= P.max_degree
        assert len(P.all_succs(v)) <= P.max_degree


def test_cube_comparability_is_coordinatewise():
    n = 5
    P = full_cube(n)
    for u in range(1 << n):
        for v in range(1 << n):
            rel = P.comparable(u, v)
            if u == v:
                assert rel is Relation.EQUAL
            elif u & ~v == 0:
                assert rel is Relation.LESS
            elif v & ~u == 0:
                assert rel is Relation.GREATER
            else:
                assert rel is Relation.INCOMPARABLE


def test_comparable_examples():
    P = full_cube(2)
    assert P.comparable(0b00, 0b01) is Relation.LESS
    assert P.comparable(0b01, 0b10) is Relation.INCOMPARABLE


def test_chain_and_dag_parameters():
    chain = explicit_dag([(0, 1), (1, 2)])
    assert chain.all_preds(1) == [0] and chain.all_succs(1) == [2]
    assert chain.height == 2 and chain.max_degree == 2
    anti = explicit_dag([], 5)
    assert anti.height == 0 and anti.max_degree == 0
    diamond = explicit_dag([(0, 1), (0, 2), (1, 3), (2, 3)])
    assert diamond.max_degree == 3


def test_covering_relation_is_transitive_reduction():
    P = explicit_dag([(0, 1), (1, 2), (0, 2)])
    assert P.immediate_succs(0) == [1]


def test_cycle_and_membership_errors():
    with pytest.raises(CycleError):
        explicit_dag([(0, 1), (1, 0)])
    with pytest.raises(MembershipError):
        explicit_dag([(0, 1)]).all_preds(7)


def test_load_edge_list(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("# vertices=4\n0 1\n1 2\n")
    P = load_edge_list(path)
    assert P.n_elements == 4 and P.all_succs(0) == [1, 2]


def test_is_monotone_table_modes_agree():
    rng = np.random.default_rng(0)
    for _ in range(20):
        table = np.sort(rng.uniform(size=8))[np.argsort(np.argsort([bin(i).count("1") for i in range(8)]))]
        assert is_monotone_table(table, 3, exhaustive=True) == is_monotone_table(table, 3, exhaustive=False)
    assert not is_monotone_table(np.array([1.0, -1.0]), 1)


def test_random_dag_is_acyclic():
    P = random_dag(50, 0.2, np.random.default_rng(3))
    lo, hi = P.comparable_pairs()
    assert not np.any(lo == hi)
