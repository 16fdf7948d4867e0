import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from idealreg.cumulants import EpochData
from idealreg.errors import IdentifiabilityError, InvalidArgumentError
from idealreg.ssa import (
    SimulationConfig,
    estimate_projection,
    generate_synthetic,
    rows_to_csv,
    run_sweep,
    run_trial,
    subspace_angle,
    summarize,
)
from oracles import principal_angle


def test_angle_examples():
    e = np.eye(3)
    assert subspace_angle(e[:2], e[:2]) == 0
    assert subspace_angle(e[:1], e[1:2]) == pytest.approx(np.pi / 2)
    for t in (1e-9, 0.3, 1.2, np.pi / 2 - 1e-6):
        assert subspace_angle([[1, 0]], [[np.cos(t), np.sin(t)]]) == pytest.approx(t, rel=1e-9, abs=1e-15)


def test_angle_errors():
    with pytest.raises(InvalidArgumentError):
        subspace_angle(np.eye(3)[:2], np.eye(3)[:1])
    with pytest.raises(InvalidArgumentError):
        subspace_angle([[1, 0, 0], [2, 0, 0]], np.eye(3)[:2])


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2**32 - 1), st.data())
def test_angle_symmetric_and_matches_scipy(D, seed, data):
    k = data.draw(st.integers(1, D - 1))
    rng = np.random.default_rng(seed)
    U, V = rng.standard_normal((k, D)), rng.standard_normal((k, D))
    a = subspace_angle(U, V)
    assert a == pytest.approx(subspace_angle(V, U), abs=1e-12)
    assert a == pytest.approx(principal_angle(U, V), abs=1e-10)
    assert 0 <= a <= np.pi / 2
    assert subspace_angle(U, rng.standard_normal((k, k)) @ U) < 1e-7


def test_config_validation():
    with pytest.raises(InvalidArgumentError):
        SimulationConfig(D=10, d=10)
    with pytest.raises(InvalidArgumentError):
        SimulationConfig(D=10, epochs=11)
    with pytest.raises(InvalidArgumentError):
        SimulationConfig(sigma=-1)


def test_synthetic_epochs_agree_on_subspace():
    cfg = SimulationConfig(D=10, d=4, epochs=26, sigma=0.0)
    epochs, truth = generate_synthetic(cfg, 0)
    assert truth.shape == (4, 10) and len(epochs) == 26
    np.testing.assert_allclose(truth @ truth.T, np.eye(4), atol=1e-12)
    ref = truth @ epochs[-1].covariance @ truth.T
    for e in epochs:
        assert np.abs(truth @ e.covariance @ truth.T - ref).max() < 1e-12
        w = np.linalg.eigvalsh(e.covariance)
        assert 0.5 - 1e-12 <= w.min() and w.max() <= 2.0 + 1e-12
        assert np.array_equal(e.mean, np.zeros(10))


def test_synthetic_dimension_uniform_over_one_to_nine():
    ds = [generate_synthetic(SimulationConfig(), t)[1].shape[0] for t in range(300)]
    counts = np.bincount(ds, minlength=10)
    assert counts[0] == 0 and np.all(counts[1:] > 15)


def test_common_random_numbers_across_sigma():
    a, ta = generate_synthetic(SimulationConfig(sigma=0.0), 3)
    b, tb = generate_synthetic(SimulationConfig(sigma=1e-3), 3)
    assert np.array_equal(ta, tb)
    diff = max(np.abs(x.covariance - y.covariance).max() for x, y in zip(a, b))
    assert 0 < diff < 1e-2


def test_noisy_covariances_stay_positive_definite():
    epochs, _ = generate_synthetic(SimulationConfig(sigma=2.0), 0)
    # floored at 1e-6 up to roundoff relative to the matrix norm
    assert min(np.linalg.eigvalsh(e.covariance).min() for e in epochs) >= 1e-6 - 1e-12


def test_estimate_exact_recovery_and_invariants():
    epochs, truth = generate_synthetic(SimulationConfig(d=3), 1)
    est = estimate_projection(epochs, 3)
    C, S = est.complement_basis, est.subspace_basis
    assert C.shape == (7, 10) and S.shape == (3, 10)
    assert np.abs(C @ S.T).max() < 1e-10
    np.testing.assert_allclose(C @ C.T, np.eye(7), atol=1e-12)
    np.testing.assert_allclose(S @ S.T, np.eye(3), atol=1e-12)
    assert subspace_angle(S, truth) < 1e-6
    P = est.projection
    for e in epochs[:-1]:
        lhs = np.linalg.norm(P @ (e.covariance - epochs[-1].covariance) @ P.T)
        assert lhs < 1e-8 * np.linalg.norm(e.covariance)


def test_two_epochs_not_identifiable():
    epochs, _ = generate_synthetic(SimulationConfig(d=3), 0)
    with pytest.raises(IdentifiabilityError):
        estimate_projection(epochs[:2], 3)


def test_zero_mean_differences_are_dropped():
    epochs, _ = generate_synthetic(SimulationConfig(d=3), 0)
    with pytest.raises(IdentifiabilityError):
        estimate_projection(epochs, 3, orders=(1,))
    est = estimate_projection(epochs, 3, orders=(1, 2))
    assert est.complement_basis.shape == (7, 10)


def test_rotation_equivariance():
    epochs, _ = generate_synthetic(SimulationConfig(d=5), 2)
    R, _ = np.linalg.qr(np.random.default_rng(0).standard_normal((10, 10)))
    rotated = [EpochData.from_moments(R @ e.mean, R @ e.covariance @ R.T) for e in epochs]
    a = estimate_projection(epochs, 5).subspace_basis
    b = estimate_projection(rotated, 5).subspace_basis
    assert subspace_angle(a @ R.T, b) < 1e-8


def test_estimate_from_samples():
    # the coordinates along S are literally the same samples in every epoch
    rng = np.random.default_rng(4)
    D, d, n = 5, 2, 200
    B, _ = np.linalg.qr(rng.standard_normal((D, D)))
    shared = rng.standard_normal((n, d))
    epochs = []
    for _ in range(D + 2):
        mix = rng.standard_normal((D - d, D - d))
        other = rng.standard_normal((n, D - d)) @ mix + shared @ rng.standard_normal((d, D - d))
        epochs.append(EpochData.from_samples(np.hstack([shared, other]) @ B.T))
    est = estimate_projection(epochs, d)
    assert subspace_angle(est.subspace_basis, B[:, :d].T) < 1e-6


def test_sweep_empty_and_single():
    assert run_sweep([], 3) == []
    assert run_sweep([0.0], 0) == []
    (row,) = run_sweep([0.0], 1)
    assert row["angle_rad"] < 1e-6 and row["runtime_ms"] is None


def test_sweep_order_and_parallel_determinism():
    a = run_sweep([0.0, 1e-3], 3, jobs=1)
    b = run_sweep([0.0, 1e-3], 3, jobs=2)
    assert a == b
    assert [(r["sigma"], r["trial"]) for r in a] == [(s, t) for s in (0.0, 1e-3) for t in range(3)]


def test_csv_and_summary_format():
    rows = run_sweep([0.0], 2, timing=True)
    text = rows_to_csv(rows)
    lines = text.splitlines()
    assert lines[0] == "trial,d,sigma,angle_rad,runtime_ms"
    fields = lines[1].split(",")
    assert float(fields[3]) == rows[0]["angle_rad"] and float(fields[4]) > 0
    summary = summarize(rows)
    assert summary["per_sigma"][0]["n"] == 2


def test_medians_non_decreasing_three_levels():
    sigmas = [1e-6, 1e-4, 1e-2]
    rows = run_sweep(sigmas, 50)
    medians = [s["median"] for s in summarize(rows)["per_sigma"]]
    assert medians == sorted(medians)


def test_error_scales_linearly_with_small_noise():
    sigmas = [1e-7, 1e-6, 1e-5, 1e-4]
    rows = run_sweep(sigmas, 10, d=5)
    medians = [s["median"] for s in summarize(rows)["per_sigma"]]
    slope = np.polyfit(np.log10(sigmas), np.log10(medians), 1)[0]
    assert slope >= 0.9


def test_run_trial_fixed_d():
    r = run_trial(SimulationConfig(d=9), 0)
    assert r["d"] == 9 and r["angle_rad"] < 1e-6
