"""Common-marginal subspaces from epoch moments, and the synthetic benchmark.

Given epochs ``X_1 .. X_m`` we look for the ``d``-dimensional subspace ``S``
of directions ``v`` along which all epochs have the same marginal
distribution.  Cumulant differences between epochs give polynomials
vanishing on ``S``; :func:`~idealreg.saturation.munchhausen` turns them into
linear forms cutting out ``S``.

Random streams
--------------
Every trial draws from numpy's counter-based ``Philox`` generator seeded by
``SeedSequence([seed, trial])``.  The problem instance (subspace,
covariances, ``d``) and the noise matrices use two separate child streams,
so the same trial index sees the same instance at every noise level, and
results do not depend on how trials are scheduled.
"""
from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import null_space

from .approxla import orthonormal_rows, _fix_signs
from .cumulants import EpochData, difference_polynomials
from .errors import IdentifiabilityError, InvalidArgumentError
from .saturation import munchhausen

DEFAULT_SEED = 0xC0FFEE
EIG_FLOOR = 1e-6
CSV_HEADER = ("trial", "d", "sigma", "angle_rad", "runtime_ms")


@dataclass
class SubspaceEstimate:
    """Estimated common-marginal subspace.

    ``complement_basis`` holds the coefficient vectors of the linear forms
    vanishing on the estimate, ``subspace_basis`` an orthonormal basis of
    the estimate itself.
    """

    complement_basis: np.ndarray
    subspace_basis: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    @property
    def projection(self) -> np.ndarray:
        """The ``d x D`` projection onto the estimated subspace."""
        return self.subspace_basis

    def to_json(self) -> dict:
        from .saturation import _jsonable

        return {
            "d": int(self.subspace_basis.shape[0]),
            "D": int(self.subspace_basis.shape[1]),
            "complement_basis": self.complement_basis.tolist(),
            "subspace_basis": self.subspace_basis.tolist(),
            "projection": self.projection.tolist(),
            "diagnostics": _jsonable(self.diagnostics),
        }


def estimate_projection(
    epochs: Sequence[EpochData],
    d: int,
    orders: Sequence[int] = (2,),
    pairing: str = "reference",
    **kwargs,
) -> SubspaceEstimate:
    """Find the ``d``-dimensional subspace on which all epochs share their marginals.

    Extra keyword arguments go to :func:`~idealreg.saturation.munchhausen`.
    Difference polynomials that are exactly zero (e.g. order one when all
    means coincide) are dropped before counting.

    Raises
    ------
    IdentifiabilityError
        If fewer than ``D + 1`` nonzero difference polynomials remain.
    """
    polys = [p for p in difference_polynomials(epochs, orders, pairing) if not p.is_zero]
    D = epochs[0].D
    if len(polys) <= D:
        raise IdentifiabilityError(
            f"{len(polys)} nonzero difference polynomials, need at least D + 1 = {D + 1}"
        )
    result = munchhausen(polys, d, **kwargs)
    comp = result.linear_forms
    sub = _fix_signs(null_space(comp).T)
    return SubspaceEstimate(comp, sub, result.diagnostics)


def subspace_angle(U, V) -> float:
    """Largest principal angle (radians) between the row spans of ``U`` and ``V``.

    Small angles are computed from sines, so values down to about 1e-16 are
    resolved.

    Raises
    ------
    InvalidArgumentError
        If the spans have different dimensions or a basis is rank deficient.
    """
    U = np.atleast_2d(np.asarray(U, dtype=float))
    V = np.atleast_2d(np.asarray(V, dtype=float))
    if U.shape != V.shape:
        raise InvalidArgumentError(f"bases have different shapes {U.shape} and {V.shape}")
    qu = orthonormal_rows(U)
    qv = orthonormal_rows(V)
    residual = qu - (qu @ qv.T) @ qv
    sin_max = min(1.0, np.linalg.norm(residual, 2))
    if sin_max < np.sqrt(0.5):
        return float(np.arcsin(sin_max))
    cos_min = np.linalg.svd(qu @ qv.T, compute_uv=False).min()
    return float(np.arccos(np.clip(cos_min, -1.0, 1.0)))


# -- synthetic benchmark ---------------------------------------------------------

@dataclass(frozen=True)
class SimulationConfig:
    """One benchmark setting; ``d=None`` draws ``d`` uniformly from ``1 .. D-1`` per trial."""

    D: int = 10
    d: int | None = None
    epochs: int = 26
    sigma: float = 0.0
    trials: int = 1
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.D < 2:
            raise InvalidArgumentError(f"need D >= 2, got {self.D}")
        if self.d is not None and not 1 <= self.d <= self.D - 1:
            raise InvalidArgumentError(f"need 1 <= d <= D - 1, got d={self.d}")
        if self.epochs < self.D + 2:
            raise InvalidArgumentError(
                f"need at least D + 2 = {self.D + 2} epochs for D + 1 quadratic differences, got {self.epochs}"
            )
        if self.sigma < 0:
            raise InvalidArgumentError(f"noise level must be non-negative, got {self.sigma}")


def trial_streams(seed: int, trial: int) -> tuple[np.random.Generator, np.random.Generator]:
    """Independent (instance, noise) generators for one trial."""
    instance, noise = np.random.SeedSequence([int(seed), int(trial)]).spawn(2)
    return np.random.Generator(np.random.Philox(instance)), np.random.Generator(np.random.Philox(noise))


def _random_orthogonal(D: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((D, D)))
    return q * np.sign(np.diag(r))


def _floor_eigenvalues(S: np.ndarray, floor: float) -> np.ndarray:
    w, V = np.linalg.eigh(S)
    if w.min() >= floor:
        return S
    S = (V * np.maximum(w, floor)) @ V.T
    return (S + S.T) / 2


def generate_synthetic(
    cfg: SimulationConfig,
    trial: int = 0,
) -> tuple[list[EpochData], np.ndarray]:
    """Epoch covariances agreeing on a random ``d``-plane, plus symmetric noise.

    In a random orthonormal basis adapted to ``S`` each covariance is a shared
    base matrix (eigenvalues in ``[0.8, 1.6]``) plus a perturbation that is
    zero on the ``S`` block and has spectral norm at most 0.3, so all
    noise-free covariances have eigenvalues in ``[0.5, 1.9]``.  Noise
    ``sigma * (E + E^T) / 2`` with Gaussian ``E`` is then added to every epoch
    and eigenvalues are floored at ``1e-6``.

    Returns
    -------
    epochs : list of EpochData
        Zero-mean epochs given by their moments.
    truth : ndarray, shape (d, D)
        Orthonormal basis of the true subspace.
    """
    rng, noise_rng = trial_streams(cfg.seed, trial)
    D = cfg.D
    d = cfg.d if cfg.d is not None else int(rng.integers(1, D))
    B = _random_orthogonal(D, rng)  # rows 0..d-1 span S
    Qb = _random_orthogonal(D, rng)
    base = (Qb * rng.uniform(0.8, 1.6, size=D)) @ Qb.T
    mask = np.ones((D, D), dtype=bool)
    mask[:d, :d] = False
    epochs = []
    for _ in range(cfg.epochs):
        P = rng.standard_normal((D, D))
        P = np.where(mask, (P + P.T) / 2, 0.0)
        P *= rng.uniform(0.1, 0.3) / np.linalg.norm(P, 2)
        cov = B.T @ (base + P) @ B
        cov = (cov + cov.T) / 2
        if cfg.sigma > 0:
            E = noise_rng.standard_normal((D, D))
            cov = _floor_eigenvalues(cov + cfg.sigma * (E + E.T) / 2, EIG_FLOOR)
        epochs.append(EpochData.from_moments(np.zeros(D), cov))
    return epochs, B[:d].copy()


def run_trial(cfg: SimulationConfig, trial: int, timing: bool = False) -> dict:
    """Generate one instance, estimate it and report the subspace angle."""
    epochs, truth = generate_synthetic(cfg, trial)
    d = truth.shape[0]
    start = time.perf_counter()
    est = estimate_projection(epochs, d)
    elapsed = (time.perf_counter() - start) * 1e3
    return {
        "trial": trial,
        "d": d,
        "sigma": cfg.sigma,
        "angle_rad": subspace_angle(est.subspace_basis, truth),
        "runtime_ms": elapsed if timing else None,
    }


def _run_job(args):
    return run_trial(*args)


def run_sweep(
    sigmas: Iterable[float],
    trials: int,
    D: int = 10,
    epochs: int = 26,
    seed: int = DEFAULT_SEED,
    d: int | None = None,
    jobs: int = 1,
    timing: bool = False,
) -> list[dict]:
    """Run ``trials`` seeded trials at each noise level.

    Rows come back ordered by noise level, then trial index, whatever the
    number of worker processes.  ``runtime_ms`` is only measured when
    ``timing`` is set, since wall-clock times are not reproducible.
    """
    tasks = [
        (SimulationConfig(D=D, d=d, epochs=epochs, sigma=float(s), trials=trials, seed=seed), t, timing)
        for s in sigmas
        for t in range(trials)
    ]
    if not tasks:
        return []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_job, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    return [_run_job(t) for t in tasks]


def format_float(x) -> str:
    return "" if x is None else format(float(x), ".17g")


def rows_to_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow([r["trial"], r["d"], format_float(r["sigma"]), format_float(r["angle_rad"]), format_float(r["runtime_ms"])])
    return buf.getvalue()


def summarize(rows: Sequence[dict]) -> dict:
    """Median and quartiles of the angle per noise level and per (noise level, d)."""

    def stats(values):
        q1, med, q3 = np.percentile(values, [25, 50, 75])
        return {"n": len(values), "median": float(med), "q25": float(q1), "q75": float(q3)}

    by_sigma: dict = {}
    by_sigma_d: dict = {}
    for r in rows:
        by_sigma.setdefault(r["sigma"], []).append(r["angle_rad"])
        by_sigma_d.setdefault((r["sigma"], r["d"]), []).append(r["angle_rad"])
    return {
        "per_sigma": [{"sigma": s, **stats(v)} for s, v in by_sigma.items()],
        "per_sigma_d": [{"sigma": s, "d": d, **stats(v)} for (s, d), v in sorted(by_sigma_d.items())],
    }
