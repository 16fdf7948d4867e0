import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from idealreg.cumulants import (
    CumulantTensor,
    EpochData,
    apply_matrix,
    difference_polynomials,
    estimate_cumulants,
    symmetrize,
)
from idealreg.errors import InsufficientDataError, InvalidArgumentError
from idealreg.polyspace import evaluate
from oracles import brute_apply_matrix


def random_symmetric(rng, D, k):
    return symmetrize(rng.standard_normal((D,) * k))


def test_symmetry_enforced():
    with pytest.raises(InvalidArgumentError):
        CumulantTensor(np.array([[1.0, 2.0], [0.0, 1.0]]))
    T = CumulantTensor(np.array([[1.0, 2.0], [2.0, 1.0]]))
    assert T.order == 2 and T.D == 2


def test_apply_identity_and_scaling():
    rng = np.random.default_rng(0)
    T = CumulantTensor(random_symmetric(rng, 3, 3))
    np.testing.assert_allclose(apply_matrix(np.eye(3), T).entries, T.entries)
    np.testing.assert_allclose(apply_matrix([[2.0]], CumulantTensor(np.array([[0.7]]))).entries, [[2.8]])


@pytest.mark.parametrize("k", [1, 2, 3])
def test_apply_matrix_matches_brute_force(k):
    rng = np.random.default_rng(k)
    for D in (1, 2, 3):
        T = random_symmetric(rng, D, k)
        A = rng.standard_normal((2, D))
        np.testing.assert_allclose(apply_matrix(A, CumulantTensor(T)).entries, brute_apply_matrix(A, T), atol=1e-12)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_apply_matrix_composition(k):
    rng = np.random.default_rng(10 + k)
    T = CumulantTensor(random_symmetric(rng, 3, k))
    A, B = rng.standard_normal((2, 3)), rng.standard_normal((3, 3))
    np.testing.assert_allclose(apply_matrix(A, apply_matrix(B, T)).entries, apply_matrix(A @ B, T).entries, atol=1e-12)


def test_apply_matrix_shape_mismatch():
    with pytest.raises(InvalidArgumentError):
        apply_matrix(np.eye(2), CumulantTensor(np.eye(3)))


def test_estimate_constant_samples():
    c = np.array([1.5, -2.0])
    k1, k2 = estimate_cumulants(EpochData.from_samples(np.tile(c, (5, 1))))
    np.testing.assert_array_equal(k1.entries, c)
    np.testing.assert_array_equal(k2.entries, np.zeros((2, 2)))


def test_estimate_moment_passthrough():
    mu, S = np.array([1.0, 2.0]), np.array([[2.0, 0.3], [0.3, 1.0]])
    k1, k2 = estimate_cumulants(EpochData.from_moments(mu, S))
    assert np.array_equal(k1.entries, mu) and np.array_equal(k2.entries, S)


def test_estimate_standard_normal():
    X = np.random.default_rng(42).standard_normal((100_000, 3))
    _, k2 = estimate_cumulants(EpochData.from_samples(X))
    assert np.linalg.norm(k2.entries - np.eye(3)) < 0.05


def test_epoch_validation():
    with pytest.raises(InsufficientDataError):
        EpochData.from_samples(np.ones((1, 3)))
    with pytest.raises(InvalidArgumentError):
        EpochData.from_moments(np.zeros(2), np.array([[1.0, 0.5], [0.0, 1.0]]))
    with pytest.raises(InvalidArgumentError):
        EpochData.from_moments(np.zeros(3), np.eye(2))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.integers(3, 30), st.integers(0, 2**32 - 1))
def test_covariance_transformation_law(D, d, n, seed):
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((n, D))
    A = rng.standard_normal((d, D))
    _, kz = estimate_cumulants(EpochData.from_samples(Z))
    _, kaz = estimate_cumulants(EpochData.from_samples(Z @ A.T))
    assert np.abs(kaz.entries - apply_matrix(A, kz).entries).max() < 1e-10 * max(1.0, np.abs(kaz.entries).max())


def test_difference_polynomial_examples():
    e1 = EpochData.from_moments(np.zeros(2), np.diag([2.0, 1.0]))
    e2 = EpochData.from_moments(np.zeros(2), np.diag([1.0, 2.0]))
    (p,) = difference_polynomials([e1, e2])
    assert dict(p.terms()) == {(2, 0): 1.0, (0, 2): -1.0}

    e3 = EpochData.from_moments(np.array([1.0, 0.0, -2.0]), np.eye(3))
    e4 = EpochData.from_moments(np.zeros(3), np.eye(3))
    (q,) = difference_polynomials([e3, e4], orders=(1,))
    assert dict(q.terms()) == {(1, 0, 0): 1.0, (0, 0, 1): -2.0}


def test_twenty_six_epoch_count():
    rng = np.random.default_rng(2)
    epochs = [EpochData.from_moments(np.zeros(10), random_symmetric(rng, 10, 2)) for _ in range(26)]
    polys = difference_polynomials(epochs, orders=(2,))
    assert len(polys) == 25 and all(p.degree == 2 for p in polys)
    assert len(difference_polynomials(epochs[:4], pairing="all")) == 6


def test_difference_cross_term_coefficient():
    Delta = np.array([[0.0, 0.5], [0.5, 0.0]])
    e1 = EpochData.from_moments(np.zeros(2), np.eye(2) + Delta)
    e2 = EpochData.from_moments(np.zeros(2), np.eye(2))
    (p,) = difference_polynomials([e1, e2])
    assert dict(p.terms()) == {(1, 1): 1.0}


def test_difference_evaluation_identity():
    rng = np.random.default_rng(3)
    covs = [random_symmetric(rng, 4, 2) for _ in range(3)]
    epochs = [EpochData.from_moments(np.zeros(4), S) for S in covs]
    polys = difference_polynomials(epochs)
    for _ in range(100):
        v = rng.standard_normal(4)
        for i, p in enumerate(polys):
            expected = v @ (covs[i] - covs[-1]) @ v
            assert evaluate(p, v) == pytest.approx(expected, rel=1e-12, abs=1e-12)


def test_identical_epochs_give_zero_polynomials():
    e = EpochData.from_moments(np.ones(3), np.eye(3))
    assert all(p.is_zero for p in difference_polynomials([e, e, e], orders=(1, 2)))


def test_difference_errors():
    e2 = EpochData.from_moments(np.zeros(2), np.eye(2))
    e3 = EpochData.from_moments(np.zeros(3), np.eye(3))
    with pytest.raises(InvalidArgumentError):
        difference_polynomials([e2, e3])
    with pytest.raises(InsufficientDataError):
        difference_polynomials([e2])
    with pytest.raises(InvalidArgumentError):
        difference_polynomials([e2, e2], orders=(3,))
    with pytest.raises(InvalidArgumentError):
        difference_polynomials([e2, e2], pairing="bad")
