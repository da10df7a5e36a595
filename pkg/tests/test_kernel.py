import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from bsvm.kernel import KernelSpec, b_matrix, cross_kernel, gram_matrix, kernel_eval

SPECS = [KernelSpec.linear(), KernelSpec.rbf(1.0), KernelSpec.rbf(0.3)]


def test_rbf_same_point_is_one():
    assert kernel_eval(KernelSpec.rbf(1.0), [0.3, -2.0], [0.3, -2.0]) == 1.0


def test_rbf_unit_distance():
    assert kernel_eval(KernelSpec.rbf(1.0), [0, 0], [1, 0]) == pytest.approx(math.exp(-1.0), rel=1e-15)


def test_linear_is_dot_product():
    assert kernel_eval(KernelSpec.linear(), [1, 2], [3, -1]) == 1.0


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        kernel_eval(KernelSpec.rbf(), [1, 2], [1, 2, 3])
    with pytest.raises(ValueError):
        cross_kernel(KernelSpec.rbf(), np.zeros((2, 2)), np.zeros((3, 3)))


def test_rbf_needs_positive_gamma():
    with pytest.raises(ValueError):
        KernelSpec.rbf(0.0)
    with pytest.raises(ValueError):
        KernelSpec("rbf", -1.0)
    KernelSpec("linear", 0.0)  # gamma unused


def test_single_point_gram():
    np.testing.assert_array_equal(gram_matrix(KernelSpec.rbf(), [[4.0, -1.0]]), [[1.0]])


def test_two_point_gram():
    e = math.exp(-1.0)
    K = gram_matrix(KernelSpec.rbf(1.0), [[0, 0], [1, 0]])
    np.testing.assert_allclose(K, [[1, e], [e, 1]], rtol=1e-15)


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: f"{s.kind.value}-{s.gamma}")
def test_gram_matches_pairwise_eval(spec):
    X = np.random.default_rng(3).normal(size=(7, 3))
    K = gram_matrix(spec, X)
    expected = [[kernel_eval(spec, a, b) for b in X] for a in X]
    np.testing.assert_allclose(K, expected, rtol=1e-13, atol=1e-15)
    np.testing.assert_allclose(cross_kernel(spec, X, X), K, rtol=1e-13, atol=1e-15)


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: f"{s.kind.value}-{s.gamma}")
def test_gram_exactly_symmetric(spec):
    X = np.random.default_rng(4).normal(size=(40, 2))
    K = gram_matrix(spec, X)
    assert np.array_equal(K, K.T)


def test_rbf_bounds_and_diagonal():
    X = np.random.default_rng(5).normal(size=(30, 2))
    X[7] = X[3]  # duplicates are allowed
    K = gram_matrix(KernelSpec.rbf(1.0), X)
    assert np.all(np.diag(K) == 1.0)
    assert np.all(K > 0) and np.all(K <= 1.0)
    assert K[3, 7] == 1.0
    off = ~np.eye(30, dtype=bool)
    off[3, 7] = off[7, 3] = False
    assert np.all(K[off] < 1.0)


@pytest.mark.parametrize("spec", SPECS[:2], ids=["linear", "rbf"])
def test_psd_sampling(spec):
    rng = np.random.default_rng(6)
    for n in (5, 20, 50):
        K = gram_matrix(spec, rng.normal(size=(n, 2)))
        for _ in range(100):
            v = rng.normal(size=n)
            assert v @ K @ v >= -1e-8 * (v @ v)


def test_b_matrix_signs():
    e = math.exp(-1.0)
    K = np.array([[1, e], [e, 1]])
    np.testing.assert_array_equal(b_matrix(K, [1, -1]), [[1, -e], [-e, 1]])
    np.testing.assert_array_equal(b_matrix(K, [1, 1]), K)
    np.testing.assert_array_equal(b_matrix(K, [-1, -1]), K)


def test_b_matrix_rejects_bad_labels():
    with pytest.raises(ValueError, match="labels"):
        b_matrix(np.eye(2), [1, 0])
    with pytest.raises(ValueError):
        b_matrix(np.eye(3), [1, -1])


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 25))
def test_quadratic_form_identity(seed, n):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, 2))
    y = rng.choice([-1.0, 1.0], size=n)
    K = gram_matrix(KernelSpec.rbf(1.0), X)
    B = b_matrix(K, y)
    w = rng.normal(size=n) - rng.normal(size=n)
    lhs = w @ B @ w
    rhs = (w * y) @ K @ (w * y)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(arrays(np.float64, (6, 2), elements=st.floats(-5, 5)))
def test_b_matrix_keeps_diagonal(X):
    K = gram_matrix(KernelSpec.rbf(0.5), X)
    B = b_matrix(K, [1, -1, 1, 1, -1, -1])
    assert np.array_equal(np.diag(B), np.diag(K))
    assert np.array_equal(B, B.T)
