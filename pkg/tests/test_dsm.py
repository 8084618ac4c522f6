import numpy as np
import pytest

from dsm_eda.dsm import (
    DoublyStochasticMatrix,
    LearningConfig,
    learn_exact,
    learn_smoothed,
    uniform_dsm,
    validate_dsm,
)
from dsm_eda.perm import Permutation, to_matrix


def random_sample(rng, n, m):
    return [Permutation.from_zero_based(rng.permutation(n)) for _ in range(m)]


def test_uniform():
    assert np.array_equal(uniform_dsm(2).values, [[0.5, 0.5], [0.5, 0.5]])
    assert np.all(uniform_dsm(3).values == 1 / 3)
    for n in range(1, 101):
        assert validate_dsm(uniform_dsm(n).values, 1e-12)


def test_validate():
    assert validate_dsm(np.full((3, 3), 1 / 3), 1e-12)
    assert not validate_dsm([[0.6, 0.6], [0.4, 0.4]], 1e-9)
    assert not validate_dsm([[1.5, -0.5], [-0.5, 1.5]], 1e-9)
    assert not validate_dsm(np.ones((2, 3)) / 2, 1e-9)


def test_dsm_type_rejects_invalid():
    with pytest.raises(ValueError):
        DoublyStochasticMatrix(np.array([[0.6, 0.6], [0.4, 0.4]]))
    d = uniform_dsm(3)
    with pytest.raises(ValueError):
        d.values[0, 0] = 1.0


def test_learn_exact_examples():
    e, s = Permutation((1, 2)), Permutation((2, 1))
    assert np.allclose(learn_exact([e, s]).values, 0.5)
    p = Permutation((3, 1, 2))
    assert np.array_equal(learn_exact([p]).values, to_matrix(p).dense())


def test_learn_exact_errors():
    with pytest.raises(ValueError):
        learn_exact([])
    with pytest.raises(ValueError):
        learn_exact([Permutation((1, 2)), Permutation((1, 2, 3))])
    with pytest.raises(ValueError):
        learn_exact([Permutation((1, 2))], weights=[0.0])


def test_learn_exact_is_centroid_and_keeps_zero_pattern():
    rng = np.random.default_rng(7)
    for _ in range(50):
        n = int(rng.integers(2, 12))
        sample = random_sample(rng, n, int(rng.integers(1, 8)))
        d = learn_exact(sample).values
        mats = np.array([to_matrix(p).dense() for p in sample])
        assert np.allclose(d, mats.mean(axis=0), atol=1e-15)
        assert np.array_equal(d == 0, mats.sum(axis=0) == 0)
        assert validate_dsm(d, 1e-9)


def test_weights_are_normalized():
    e, s = Permutation((1, 2)), Permutation((2, 1))
    d = learn_exact([e, s], weights=[3.0, 1.0]).values
    assert np.allclose(d, [[0.75, 0.25], [0.25, 0.75]])
    d = learn_smoothed([e, s], LearningConfig(0.5, weights=[6.0, 2.0])).values
    assert np.allclose(d, 0.5 * np.array([[0.75, 0.25], [0.25, 0.75]]) + 0.25)


def test_learn_smoothed_examples():
    e = Permutation((1, 2))
    d = learn_smoothed([e], LearningConfig(0.25)).values
    assert np.allclose(d, [[0.875, 0.125], [0.125, 0.875]], atol=1e-15)
    rng = np.random.default_rng(1)
    sample = random_sample(rng, 6, 4)
    assert np.allclose(learn_smoothed(sample, LearningConfig(1.0)).values, 1 / 6, atol=1e-15)


@pytest.mark.parametrize("n", [5, 10, 20])
def test_smoothed_lower_bound_and_linearity(n):
    rng = np.random.default_rng(n)
    alpha = 1 / n**2
    for _ in range(100):
        sample = random_sample(rng, n, int(rng.integers(1, 2 * n)))
        d = learn_smoothed(sample, LearningConfig(alpha)).values
        assert d.min() >= alpha / n - 1e-15
        assert validate_dsm(d, 1e-9)
        expected = (1 - alpha) * learn_exact(sample).values + alpha / n
        assert np.abs(d - expected).max() <= 1e-12


def test_learning_config_validation():
    for bad in (0.0, -0.1, 1.5):
        with pytest.raises(ValueError):
            LearningConfig(bad)
    with pytest.raises(ValueError):
        LearningConfig(0.5, weights=[-1.0, 2.0])
    with pytest.raises(ValueError):
        LearningConfig(0.5, weights=[0.0, 0.0])


def test_text_round_trip():
    rng = np.random.default_rng(3)
    d = learn_smoothed(random_sample(rng, 5, 3), LearningConfig(0.1))
    back = DoublyStochasticMatrix.from_text(d.to_text())
    assert np.array_equal(back.values, d.values)


@pytest.mark.parametrize(
    "text",
    ["", "x\n1\n", "2\n0.5 0.5\n", "2\n0.5 0.5\n0.5 abc\n", "2\n0.5 0.5\n0.5\n", "2\n0.9 0.1\n0.9 0.1\n"],
)
def test_text_rejects_malformed(text):
    with pytest.raises(ValueError):
        DoublyStochasticMatrix.from_text(text)
