import numpy as np
import pytest

from monolearn.generators import GeneratorSpec, build_table, make_target, parse_spec
from monolearn.poset import is_monotone_table


def test_dictator_and_majority():
    assert list(build_table(GeneratorSpec("dictator", 3))) == [-1, 1, -1, 1, -1, 1, -1, 1]
    maj = build_table(GeneratorSpec("majority", 3))
    assert all((maj[x] == 1) == (bin(x).count("1") >= 2) for x in range(8))


def test_noisy_is_deterministic():
    a = make_target("noisy(majority,0.1)", 8, seed=5).table
    b = make_target("noisy(majority,0.1)", 8, seed=5).table
    assert np.array_equal(a, b)


@pytest.mark.parametrize("kind", ["dictator", "majority", "random-monotone-dnf", "threshold"])
def test_monotone_kinds(kind):
    for seed in range(5):
        assert is_monotone_table(make_target(kind, 7, seed=seed).table, 7)


def test_randomized_labels_spec():
    tg = make_target("randomized-labels(dictator,0.1)", 3)
    assert tg.table is None and np.allclose(tg.source.p_plus, np.where(np.arange(8) & 1, 0.9, 0.1))


def test_bad_specs():
    with pytest.raises(ValueError):
        parse_spec("noisy(majority,0.7)", 3)
    with pytest.raises(ValueError):
        parse_spec("parity", 3)
