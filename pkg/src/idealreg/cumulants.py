"""Cumulant tensors and the difference polynomials between epochs.

The k-th cumulant of ``AX`` is the k-th cumulant of ``X`` with ``A`` applied
along every tensor axis.  Directions ``v`` on which all epochs have the same
marginal therefore satisfy ``v o (kappa_k(X_i) - kappa_k(X_m)) = 0`` for
every order ``k``; each such difference is a homogeneous polynomial of
degree ``k`` in ``v``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from math import factorial
from typing import Sequence

import numpy as np

from .errors import InsufficientDataError, InvalidArgumentError
from .monomials import enumerate_basis
from .polyspace import HomoPoly

SYMMETRY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class CumulantTensor:
    """Symmetric order-``k`` tensor over ``D`` variables, stored densely."""

    entries: np.ndarray

    def __post_init__(self):
        T = np.array(self.entries, dtype=float)
        if T.ndim < 1 or len(set(T.shape)) != 1:
            raise InvalidArgumentError(f"cumulant tensor must be a cube of order >= 1, got shape {T.shape}")
        sym = symmetrize(T)
        scale = max(np.abs(T).max(), 1.0)
        if np.abs(T - sym).max() > SYMMETRY_TOL * scale:
            raise InvalidArgumentError("cumulant tensor is not symmetric")
        sym.setflags(write=False)
        object.__setattr__(self, "entries", sym)

    @property
    def order(self) -> int:
        return self.entries.ndim

    @property
    def D(self) -> int:
        return self.entries.shape[0]

    def to_polynomial(self) -> HomoPoly:
        """The form ``v -> v o T``, i.e. ``sum T[i1..ik] v_i1 ... v_ik``."""
        basis = enumerate_basis(self.D, self.order)
        coeffs = np.empty(len(basis))
        for pos, exps in enumerate(basis.exponents):
            index = tuple(np.repeat(np.arange(self.D), exps))
            multiplicity = factorial(self.order)
            for e in exps:
                multiplicity //= factorial(int(e))
            coeffs[pos] = multiplicity * self.entries[index]
        return HomoPoly(self.D, self.order, coeffs)


def symmetrize(T: np.ndarray) -> np.ndarray:
    perms = list(permutations(range(T.ndim)))
    return sum(np.transpose(T, p) for p in perms) / len(perms)


def apply_matrix(A, T: CumulantTensor) -> CumulantTensor:
    """Multilinear transform: ``A`` applied along every axis of ``T``."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.shape[1] != T.D:
        raise InvalidArgumentError(f"matrix has {A.shape[1]} columns, tensor has dimension {T.D}")
    out = T.entries
    for _ in range(T.order):
        # contract the leading axis and append the new one at the end
        out = np.tensordot(out, A, axes=([0], [1]))
    return CumulantTensor(out)


@dataclass(frozen=True, eq=False)
class EpochData:
    """One epoch: either raw samples (rows are observations) or its first two moments."""

    samples: np.ndarray | None = None
    mean: np.ndarray | None = None
    covariance: np.ndarray | None = None

    def __post_init__(self):
        if self.samples is not None:
            X = np.atleast_2d(np.array(self.samples, dtype=float))
            if X.shape[0] < 2:
                raise InsufficientDataError(f"need at least 2 samples, got {X.shape[0]}")
            X.setflags(write=False)
            object.__setattr__(self, "samples", X)
            return
        if self.mean is None or self.covariance is None:
            raise InvalidArgumentError("epoch needs samples or both mean and covariance")
        mu = np.array(self.mean, dtype=float).ravel()
        S = np.atleast_2d(np.array(self.covariance, dtype=float))
        if S.shape != (mu.size, mu.size):
            raise InvalidArgumentError(f"covariance shape {S.shape} does not match mean length {mu.size}")
        if np.abs(S - S.T).max() > SYMMETRY_TOL * max(np.abs(S).max(), 1.0):
            raise InvalidArgumentError("covariance is not symmetric")
        mu.setflags(write=False)
        S.setflags(write=False)
        object.__setattr__(self, "mean", mu)
        object.__setattr__(self, "covariance", S)

    @classmethod
    def from_samples(cls, X) -> "EpochData":
        return cls(samples=X)

    @classmethod
    def from_moments(cls, mean, covariance) -> "EpochData":
        return cls(mean=mean, covariance=covariance)

    @property
    def D(self) -> int:
        return self.samples.shape[1] if self.samples is not None else self.mean.size


def estimate_cumulants(e: EpochData) -> tuple[CumulantTensor, CumulantTensor]:
    """Sample mean and unbiased covariance, or the stored moments."""
    if e.samples is not None:
        X = e.samples
        mu = X.mean(axis=0)
        Xc = X - mu
        cov = Xc.T @ Xc / (X.shape[0] - 1)
        cov = (cov + cov.T) / 2
    else:
        mu, cov = e.mean, e.covariance
    return CumulantTensor(mu), CumulantTensor(cov)


def difference_polynomials(
    epochs: Sequence[EpochData],
    orders: Sequence[int] = (2,),
    pairing: str = "reference",
) -> list[HomoPoly]:
    """Polynomials ``v o (kappa_k(X_i) - kappa_k(X_j))`` for the requested orders.

    With ``pairing="reference"`` every epoch but the last is paired with the
    last one; ``pairing="all"`` uses every pair ``i < j``.  Output is ordered
    by pair first and cumulant order second.
    """
    epochs = list(epochs)
    if len(epochs) < 2:
        raise InsufficientDataError(f"need at least 2 epochs, got {len(epochs)}")
    D = epochs[0].D
    if any(e.D != D for e in epochs):
        raise InvalidArgumentError("all epochs must have the same dimension")
    orders = [int(k) for k in orders]
    if not orders or any(k not in (1, 2) for k in orders):
        raise InvalidArgumentError(f"cumulant orders must be a non-empty subset of {{1, 2}}, got {orders}")
    kappas = [estimate_cumulants(e) for e in epochs]
    m = len(epochs)
    if pairing == "reference":
        pairs = [(i, m - 1) for i in range(m - 1)]
    elif pairing == "all":
        pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    else:
        raise InvalidArgumentError(f"unknown pairing {pairing!r}")
    out = []
    for i, j in pairs:
        for k in orders:
            diff = kappas[i][k - 1].entries - kappas[j][k - 1].entries
            out.append(CumulantTensor(diff).to_polynomial())
    return out
