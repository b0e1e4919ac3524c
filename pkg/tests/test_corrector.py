import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from monolearn.corrector import (BooleanCorrector, KCorrector, boolean_corrector, discretize, hypercube_corrector,
                                 k_corrector, sort_bits)
from monolearn.boolfn import MultilinearPoly, monomial_masks
from monolearn.lca import Seed
from monolearn.oracle_exact import exact_hamming_dist, exact_l1_dist
from monolearn.poset import explicit_dag, full_cube, is_monotone_table, random_dag, truncated_cube


def test_monotone_input_is_left_alone():
    P = full_cube(3)
    f = np.where(np.arange(8) & 1, 1.0, -1.0)
    bc = BooleanCorrector(P, f, Seed(0))
    assert all(bc.source(x) == x for x in range(8))


def test_one_dimensional_swap():
    P = full_cube(1)
    f = np.array([1.0, -1.0])
    assert boolean_corrector(P, f, Seed(0), 0) == 1
    bc = BooleanCorrector(P, f, Seed(0))
    assert P.is_monotone(bc.corrected)
    change = np.mean(bc.corrected != f)
    assert change == 1 == 2 * exact_hamming_dist(P, f).distance


def test_diamond_one_violation():
    P = explicit_dag([(0, 1), (0, 2), (1, 3), (2, 3)])
    f = np.array([1.0, -1.0, 1.0, 1.0])
    bc = BooleanCorrector(P, f, Seed(0))
    assert P.is_monotone(bc.corrected)
    assert np.mean(bc.corrected != f) <= 2 * exact_hamming_dist(P, f).distance


def test_swap_never_increases_distance_to_monotone():
    # swapping a violated pair cannot move the labelling away from any monotone h
    rng = np.random.default_rng(0)
    for _ in range(50):
        P = random_dag(12, 0.3, rng)
        bits = rng.integers(0, 2, 12)
        lo, hi = P.comparable_pairs()
        viol = np.nonzero((bits[lo] == 1) & (bits[hi] == 0))[0]
        if not len(viol):
            continue
        a, b = lo[viol[0]], hi[viol[0]]
        swapped = bits.copy()
        swapped[[a, b]] = swapped[[b, a]]
        for _ in range(20):
            h = np.zeros(12, dtype=int)
            for v in np.nonzero(rng.random(12) < 0.3)[0]:
                h[v] = 1
                h[P.index_of(P.all_succs(int(P.elements()[v])))] = 1
            assert np.sum(swapped != h) <= np.sum(bits != h)


def test_k_corrector_base_level_and_binary_agreement():
    rng = np.random.default_rng(1)
    for s in range(20):
        P = random_dag(15, 0.25, rng)
        labels = rng.integers(0, 2, 15)
        kc = KCorrector(P, labels, 2, Seed(s))
        bc = BooleanCorrector(P, 2.0 * labels - 1, Seed(s))
        assert np.array_equal(2 * kc.corrected - 1, bc.corrected)
        assert all(kc.query(int(x), 0) == labels[i] for i, x in enumerate(P.elements()))


def test_three_chain():
    P = explicit_dag([(0, 1), (1, 2)])
    f = np.array([2, 1, 0])
    kc = KCorrector(P, f, 4, Seed(0))
    assert P.is_monotone(kc.corrected)
    dist = exact_l1_dist(P, f.astype(float)).distance
    assert dist == pytest.approx(2 / 3)
    assert np.mean(np.abs(kc.corrected - f)) <= 2 * dist + 1e-12
    assert k_corrector(0, P, f, 2, Seed(0), 4) == kc.query(0)


def test_level_prefixes_are_monotone():
    # after sorting i bits, the top-i-bit prefix is monotone
    rng = np.random.default_rng(2)
    P = random_dag(30, 0.2, rng)
    labels = rng.integers(0, 16, 30)
    kc = KCorrector(P, labels, 16, Seed(0))
    for i in range(1, kc.B + 1):
        assert P.is_monotone(kc.levels[i] >> (kc.B - i))


def test_k_corrector_rejects_bad_labels():
    P = explicit_dag([(0, 1)])
    with pytest.raises(ValueError):
        KCorrector(P, np.array([0, 5]), 4, Seed(0))
    with pytest.raises(ValueError):
        KCorrector(P, np.array([0.5, 1]), 4, Seed(0))


def test_sort_bits_schedule_cap():
    P = explicit_dag([(0, 1), (1, 2)])
    from monolearn.corrector import ScheduleOverflow
    with pytest.raises(ScheduleOverflow):
        sort_bits(P, np.array([1, 1, 0]), Seed(0), "t", max_rounds=0)


def test_hypercube_corrector_identity_on_aligned_monotone():
    n, eps = 6, 0.25
    w = np.array([bin(i).count("1") for i in range(1 << n)])
    f = np.clip(np.round((w - 3) / 3 / eps) * eps, -1, 1)
    cf = hypercube_corrector(f, n, eps, Seed(0))
    band = truncated_cube(n, eps).elements()
    assert np.allclose(cf.table[band], f[band])


def test_hypercube_corrector_one_dimension():
    f = np.array([1.0, -1.0])
    cf = hypercube_corrector(f, 1, 0.25, Seed(0))
    assert is_monotone_table(cf.table, 1, exhaustive=True)
    assert np.mean(np.abs(cf.table - f)) <= 2 * 1 + 4 * 0.25


def test_hypercube_corrector_degree_two_polys():
    n, eps = 8, 0.1
    rng = np.random.default_rng(3)
    masks = monomial_masks(n, 2)
    for s in range(20):
        c = rng.normal(size=len(masks))
        f = np.clip(MultilinearPoly(n, 2, dict(zip(masks, c / np.linalg.norm(c) * 1.5))).table(), -1, 1)
        cf = hypercube_corrector(f, n, eps, Seed(s))
        assert is_monotone_table(cf.table, n, exhaustive=True)
        dist = exact_l1_dist(full_cube(n), f).distance
        assert np.mean(np.abs(cf.table - f)) <= 2 * dist + 4 * eps + 1e-9


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2 ** 31), st.sampled_from([0.1, 0.2, 0.3, 0.45]))
def test_hypercube_corrector_property(n, seed, eps):
    f = np.random.default_rng(seed).uniform(-1, 1, 1 << n)
    cf = hypercube_corrector(f, n, eps, Seed(seed))
    assert is_monotone_table(cf.table, n, exhaustive=True)
    assert np.mean(np.abs(cf.table - f)) <= 2 * exact_l1_dist(full_cube(n), f).distance + 4 * eps + 1e-9


def test_discretize_levels():
    levels, shift, k = discretize(np.array([-1.0, -0.05, 0.0, 0.3, 1.0]), 0.1)
    assert shift == 10 and k == 21
    assert list(levels) == [0, 9, 10, 13, 20]


def test_hypercube_corrector_is_deterministic():
    f = np.random.default_rng(9).uniform(-1, 1, 64)
    a = hypercube_corrector(f, 6, 0.2, Seed("ff"))
    b = hypercube_corrector(f, 6, 0.2, Seed("ff"))
    assert np.array_equal(a.table, b.table)


def test_hypercube_corrector_rejects_bad_input():
    with pytest.raises(ValueError):
        hypercube_corrector(np.zeros(4), 2, 0.6, Seed(0))
    with pytest.raises(ValueError):
        hypercube_corrector(np.full(4, 2.0), 2, 0.2, Seed(0))
