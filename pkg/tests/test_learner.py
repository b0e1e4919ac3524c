import math

import numpy as np
import pytest

from monolearn.boolfn import Evaluator, FunctionLabels, MultilinearPoly, RandomizedLabels, SampleSet, sample_uniform
from monolearn.generators import dictator, majority, make_target
from monolearn.lca import Seed
from monolearn.learner import (SeparationOracle, alpha_grid, choose_threshold, empirical_sign_error,
                               estimate_distance, hypothesis_error, monotone_learner, oracle_alpha,
                               trivial_learner_from_source)
from monolearn.oracle_exact import closest_monotone_boolean, min_monotone_error
from monolearn.poset import is_monotone_table

TIGHT = dict(degree=2, monotone_gate=0.5, l1_gate=1.0)


def dict_poly(n, sign=1.0):
    return MultilinearPoly(n, 1, {1: sign})


def test_oracle_accepts_matching_dictator():
    n = 3
    src = FunctionLabels(n, dictator(n))
    v = oracle_alpha(dict_poly(n), 0.1, n, 0.1, src, Seed(0))
    assert v.feasible


def test_oracle_rejects_antimonotone_poly_by_matching_gate():
    n = 2
    src = FunctionLabels(n, dictator(n))
    v = oracle_alpha(dict_poly(n, -1.0), 0.1, n, 0.01, src, Seed(0))
    assert not v.feasible and v.reason == "matching"


def test_oracle_rejects_far_poly_by_l1_gate():
    n = 2
    src = FunctionLabels(n, -dictator(n))
    v = oracle_alpha(dict_poly(n), 0.1, n, 0.01, src, Seed(0))
    assert not v.feasible and v.reason == "l1"


def test_matching_direction_sign_convention():
    # M is +1 at the lower end of each matched pair, so E[M * P] is the matching weight over 2^n
    n = 2
    src = FunctionLabels(n, dictator(n))
    o = SeparationOracle(n, 0.01, 0.1, src, Seed(0), degree=1)
    P = dict_poly(n, -1.0)
    trimmed = Evaluator(lambda x: float(np.clip(P(x), -1, 1)), vectorized=lambda xs: P.evaluate(xs))
    M = o.matching_direction(trimmed)
    vals = P.evaluate(o.T.points)
    assert np.all((M == 0) | (M * vals > 0))


def test_separator_cuts_off_query():
    n = 2
    src = FunctionLabels(n, dictator(n))
    o = SeparationOracle(n, 0.01, 0.1, src, Seed(0), degree=2)
    for P in (dict_poly(n, -1.0), MultilinearPoly(n, 2, {3: 0.9})):
        res = o.separate(o.basis.to_vector(P))
        assert not res.feasible
        good = o.basis.to_vector(dict_poly(n))
        assert res.separator @ good < res.separator @ o.basis.to_vector(P)


def test_oracle_rejects_large_norm():
    n = 2
    o = SeparationOracle(n, 0.1, 0.1, FunctionLabels(n, dictator(n)), Seed(0), degree=1)
    with pytest.raises(ValueError):
        o(MultilinearPoly(n, 1, {0: 1.0, 1: 1.0}))
    assert not o.separate(np.array([2.0, 0, 0])).feasible


def test_alpha_grid():
    g = alpha_grid(0.25)
    assert g[:3] == [0.25, 0.5, 0.75] and g[-1] > 1


def test_threshold_examples():
    n = 2
    f = dictator(n)
    T = sample_uniform(n, 400, FunctionLabels(n, f), 0)
    cands = np.linspace(-0.9, 0.9, 19)
    t = choose_threshold(Evaluator.from_table(f), T, cands)
    assert empirical_sign_error(Evaluator.from_table(f), t, T) == 0
    plus = sample_uniform(n, 400, FunctionLabels(n, np.ones(4)), 0)
    t = choose_threshold(Evaluator.constant(0.0), plus, cands)
    assert t < 0 and empirical_sign_error(Evaluator.constant(0.0), t, plus) == 0
    t = choose_threshold(Evaluator.from_table(0.5 * f), T, cands)
    assert -0.5 < t < 0.5


def test_threshold_sign_of_zero_is_plus():
    T = SampleSet.from_pairs(1, [(0, 1.0)])
    assert empirical_sign_error(Evaluator.constant(0.0), 0.0, T) == 0


def test_learner_dictator():
    n, eps = 6, 0.1
    src = FunctionLabels(n, dictator(n))
    h = monotone_learner(n, eps, src, Seed(0))
    assert is_monotone_table(h.table(), n, exhaustive=True)
    assert hypothesis_error(h, src) <= 10 * eps
    tight = monotone_learner(n, eps, src, Seed(0), **TIGHT)
    assert is_monotone_table(tight.table(), n, exhaustive=True)
    assert hypothesis_error(tight, src) <= eps


def test_learner_antidictator():
    n, eps = 4, 0.1
    tg = make_target("anti-dictator", n)
    _, opt = closest_monotone_boolean(tg.table, n)
    assert opt == 0.5
    for kw in ({}, TIGHT):
        h = monotone_learner(n, eps, tg.source, Seed(1), **kw)
        assert is_monotone_table(h.table(), n, exhaustive=True)
        assert hypothesis_error(h, tg.source) <= opt + 10 * eps


def test_learner_is_deterministic():
    src = FunctionLabels(4, majority(4))
    a = monotone_learner(4, 0.1, src, Seed("aa"), **TIGHT)
    b = monotone_learner(4, 0.1, src, Seed("aa"), **TIGHT)
    assert np.array_equal(a.table(), b.table()) and a.threshold == b.threshold


def test_estimate_examples():
    eps, delta = 0.1, 0.05
    res = estimate_distance(FunctionLabels(4, majority(4)), 4, eps, Seed(0), **TIGHT)
    assert res.estimate <= eps
    eps_stat = math.sqrt(math.log(2 / delta) / (2 * res.samples))
    res = estimate_distance(FunctionLabels(4, -dictator(4)), 4, eps, Seed(0))
    assert 0.5 - eps_stat <= res.estimate <= 0.5 + 10 * eps
    tg = make_target("random", 8, seed=4)
    _, opt = closest_monotone_boolean(tg.table, 8)
    res = estimate_distance(tg.source, 8, eps, Seed(0))
    assert opt - eps_stat <= res.estimate <= opt + 10 * eps


@pytest.mark.parametrize("name", ["monotone", "symmetric", "flipped"])
def test_trivial_learner(name):
    n, eps = 4, 0.1
    if name == "monotone":
        src = FunctionLabels(n, majority(n))
        p = (majority(n) + 1) / 2
    elif name == "symmetric":
        p = np.full(1 << n, 0.5)
        src = RandomizedLabels(n, p)
    else:
        src = RandomizedLabels.flipped(n, dictator(n), 0.1)
        p = src.p_plus
    h = trivial_learner_from_source(src, n, eps, Seed(2))
    best, _ = min_monotone_error(p, n)
    assert is_monotone_table(h.table(), n)
    assert hypothesis_error(h, src) <= best + 3 * eps
