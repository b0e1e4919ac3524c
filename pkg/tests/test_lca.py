import numpy as np
import pytest

from monolearn.lca import (DepthExceeded, FirstComeMatching, MatchingLCA, Seed, bench_lca, check_maximal,
                           consistency_fuzz, edge_ranks, ghaffari_matching, greedy_matching_global, random_graph,
                           vertex_rand)


def test_vertex_rand_deterministic_and_tag_separated():
    s = Seed("abcd")
    assert vertex_rand(s, "t", 5) == vertex_rand(Seed("abcd"), "t", 5)
    assert vertex_rand(s, "t", 5) != vertex_rand(s, "u", 5)


def test_vertex_rand_no_collisions():
    vals = Seed(1).hash64_many("ids", np.arange(10 ** 6, dtype=np.int64))
    assert len(np.unique(vals)) == 10 ** 6


def test_hash64_many_matches_scalar():
    s = Seed(9)
    ids = np.arange(50, dtype=np.int64)
    assert [int(v) for v in s.hash64_many("t", ids, ids + 1)] == [s.hash64("t", int(i), int(i) + 1) for i in ids]


def test_seed_charges_bytes():
    s = Seed(0)
    s.hash64("a", 1)
    assert s.bytes_consumed == 8


def test_small_graphs():
    assert ghaffari_matching(lambda v: [], Seed(0), 0.01, 3) is None
    adj = {0: [1], 1: [0]}
    assert ghaffari_matching(lambda v: adj[v], Seed(0), 0.01, 0) == 1
    assert ghaffari_matching(lambda v: adj[v], Seed(0), 0.01, 1) == 0


def _edges(adj):
    return [(u, v) for u in adj for v in adj[u] if u < v]


def test_lca_equals_global_greedy_and_is_maximal():
    rng = np.random.default_rng(0)
    for trial in range(10 ** 4):
        n = int(rng.integers(1, 51))
        adj = random_graph(n, float(rng.uniform(0, 0.3)), rng)
        seed = Seed(trial)
        lca = MatchingLCA(lambda v: adj[v], seed)
        mate = np.array([-1 if (p := lca(v)) is None else p for v in range(n)])
        for v in range(n):
            if mate[v] >= 0:
                assert mate[mate[v]] == v
        e = np.array(_edges(adj), dtype=np.int64).reshape(-1, 2)
        assert check_maximal(mate, e[:, 0], e[:, 1])
        if len(e):
            ranks = edge_ranks(seed, "edge", e[:, 0], e[:, 1])
            assert np.array_equal(greedy_matching_global(n, e[:, 0], e[:, 1], ranks), mate)


def test_fuzz_passes_for_lca_and_constant():
    rng = np.random.default_rng(1)
    assert consistency_fuzz(lambda: (lambda v: 0), range(10), 5, rng).passed
    for t in range(200):
        adj = random_graph(20, 0.2, rng)
        rep = consistency_fuzz(lambda: MatchingLCA(lambda v: adj[v], Seed(t)), range(20), 3, rng)
        assert rep.passed


def test_fuzz_catches_stateful_negative_control():
    adj = {0: [1], 1: [0, 2], 2: [1, 3], 3: [2]}
    rep = consistency_fuzz(lambda: FirstComeMatching(lambda v: adj[v]), range(4), 30, 0)
    assert not rep.passed


def test_depth_cap():
    n = 400
    adj = {v: [u for u in (v - 1, v + 1) if 0 <= u < n] for v in range(n)}

    class Rigged(MatchingLCA):
        def rank(self, u, v):
            a, b = min(u, v), max(u, v)
            return (-a, a, b)  # descending chain of priorities along the path

    with pytest.raises(DepthExceeded):
        Rigged(lambda v: adj[v], Seed(0), depth_cap=10).partner(0)


def test_query_memo_gives_same_answers():
    rng = np.random.default_rng(5)
    adj = random_graph(40, 0.1, rng)
    a = MatchingLCA(lambda v: adj[v], Seed(3))
    b = MatchingLCA(lambda v: adj[v], Seed(3), memo="query")
    assert [a(v) for v in range(40)] == [b(v) for v in range(40)]
    assert b.probe_stats()["queries"] == 40


def test_bench_reports_probes():
    rng = np.random.default_rng(2)
    adj = random_graph(100, 0.04, rng)
    stats = bench_lca(adj, Seed(0), 30, rng=rng)
    assert stats["queries"] == 30 and stats["over_ceiling"] == 0 and stats["max_probes"] >= 1
