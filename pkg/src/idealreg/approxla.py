"""Approximate row spans, left null spaces and numerical ranks via the SVD.

Rows of every returned basis are orthonormal (unless ``scaled=True``) and
carry a fixed sign: the entry of largest magnitude in each row is positive.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, InvalidArgumentError

TIE_TOL = 1e-14


@dataclass(frozen=True)
class RankSpec:
    """How to pick the rank of an approximate space.

    Use :meth:`fixed` for a known rank and :meth:`threshold` to keep the
    singular values above ``tau * sigma_1``.  ``tau=None`` means the default
    ``1e-8 * max(A.shape)``, meant for exact inputs.
    """

    mode: str
    value: float | int | None = None

    def __post_init__(self):
        if self.mode == "fixed":
            if self.value is None or int(self.value) != self.value or self.value < 0:
                raise InvalidArgumentError(f"fixed rank must be a non-negative integer, got {self.value!r}")
        elif self.mode == "threshold":
            if self.value is not None and not 0 < self.value < 1:
                raise InvalidArgumentError(f"threshold must lie in (0, 1), got {self.value!r}")
        else:
            raise InvalidArgumentError(f"unknown rank mode {self.mode!r}")

    @classmethod
    def fixed(cls, r: int) -> "RankSpec":
        return cls("fixed", int(r))

    @classmethod
    def threshold(cls, tau: float | None = None) -> "RankSpec":
        return cls("threshold", tau)

    def tau_for(self, shape) -> float:
        return self.value if self.value is not None else 1e-8 * max(shape)


def _as_spec(spec) -> RankSpec:
    if isinstance(spec, RankSpec):
        return spec
    if spec is None:
        return RankSpec.threshold()
    return RankSpec.fixed(spec)


def _fix_signs(rows: np.ndarray) -> np.ndarray:
    if rows.size == 0:
        return rows
    idx = np.argmax(np.abs(rows), axis=1)
    signs = np.sign(rows[np.arange(rows.shape[0]), idx])
    signs[signs == 0] = 1.0
    return rows * signs[:, None]


def singular_values(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.size == 0:
        return np.zeros(0)
    return np.linalg.svd(A, compute_uv=False)


def numerical_rank(A, tau: float = 1e-8) -> int:
    """Number of singular values above ``tau * sigma_1``; zero for a zero matrix."""
    if not 0 < tau < 1:
        raise InvalidArgumentError(f"tau must lie in (0, 1), got {tau}")
    s = singular_values(A)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tau * s[0]))


def _rank_from_spec(s: np.ndarray, spec: RankSpec, shape, limit: int) -> int:
    if spec.mode == "fixed":
        r = int(spec.value)
        if r > limit:
            raise InvalidArgumentError(f"rank {r} exceeds the admissible maximum {limit} for shape {shape}")
        return r
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > spec.tau_for(shape) * s[0]))


def cut_info(s: np.ndarray, r: int) -> dict:
    """Singular values on both sides of a rank cut, and whether they tie."""
    above = float(s[r - 1]) if 0 < r <= s.size else None
    below = float(s[r]) if r < s.size else 0.0
    top = float(s[0]) if s.size else 0.0
    tie = above is not None and (above - below) <= TIE_TOL * max(top, 1e-300)
    return {"rank": int(r), "sigma_above": above, "sigma_below": below, "sigma_max": top, "tie": bool(tie)}


def approx_row_span(A, spec=None, *, scaled: bool = False, full_output: bool = False):
    """Leading right singular vectors of ``A`` as rows.

    Parameters
    ----------
    A : array_like, shape (m, n)
    spec : RankSpec or int, optional
        Rank to keep; an int means a fixed rank.  Defaults to threshold mode.
    scaled : bool
        Multiply each row by its singular value.  The span is unchanged, but
        directions carried only by noise shrink to near zero.
    full_output : bool
        Also return a dict with the singular values and the rank decision.

    Raises
    ------
    InvalidArgumentError
        If a fixed rank exceeds ``min(A.shape)``.
    DegenerateInputError
        If ``A`` is all zero (or empty) and a positive rank is requested.
    """
    A = np.asarray(A, dtype=float)
    spec = _as_spec(spec)
    if A.ndim != 2:
        raise InvalidArgumentError(f"expected a matrix, got shape {A.shape}")
    limit = min(A.shape)
    if A.size == 0 or not np.any(A):
        if spec.mode == "fixed" and spec.value == 0:
            rows = np.zeros((0, A.shape[1]))
            return (rows, {"singular_values": np.zeros(0), **cut_info(np.zeros(0), 0)}) if full_output else rows
        raise DegenerateInputError("cannot take the row span of a zero matrix")
    _, s, vt = np.linalg.svd(A, full_matrices=False)
    r = _rank_from_spec(s, spec, A.shape, limit)
    rows = vt[:r]
    if scaled:
        rows = rows * s[:r, None]
    rows = _fix_signs(rows)
    if full_output:
        return rows, {"singular_values": s, **cut_info(s, r)}
    return rows


def approx_left_null(A, spec=None, *, full_output: bool = False):
    """Trailing left singular vectors of ``A`` as rows, i.e. rows ``L`` with ``L @ A`` small.

    In threshold mode the rank is ``m - numerical_rank(A)``.  A zero matrix,
    or one without columns, has the whole of ``R^m`` as its left null space.
    """
    A = np.asarray(A, dtype=float)
    spec = _as_spec(spec)
    if A.ndim != 2:
        raise InvalidArgumentError(f"expected a matrix, got shape {A.shape}")
    m = A.shape[0]
    if A.shape[1] == 0 or not np.any(A):
        u, s = np.eye(m), np.zeros(0)
    else:
        u, s, _ = np.linalg.svd(A, full_matrices=True)
    if spec.mode == "fixed":
        r = int(spec.value)
        if r > m:
            raise InvalidArgumentError(f"left null rank {r} exceeds row count {m}")
    else:
        r = m - _rank_from_spec(s, spec, A.shape, min(A.shape))
    rows = _fix_signs(u[:, m - r:].T.copy()) if r else np.zeros((0, m))
    if full_output:
        # pad with zeros: for m > n the extra directions have singular value 0
        full_s = np.concatenate([s, np.zeros(max(m - s.size, 0))])
        return rows, {"singular_values": s, **cut_info(full_s, m - r)}
    return rows


def orthonormal_rows(A, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis for the row space of a full-row-rank ``A``.

    Raises
    ------
    InvalidArgumentError
        If the rows are numerically dependent.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.shape[0] == 0:
        return A.reshape(0, A.shape[1])
    s = singular_values(A)
    if A.shape[0] > A.shape[1] or s[0] == 0 or s[-1] <= tol * s[0]:
        raise InvalidArgumentError("basis rows are linearly dependent")
    q, _ = np.linalg.qr(A.T)
    return q.T
