"""Approximate saturation of polynomial ideals.

Two estimators live here:

* :func:`munchhausen` recovers the linear generators of the ideal of a
  ``d``-dimensional subspace from noisy polynomials vanishing on it.  The
  inputs are multiplied up to a degree ``N`` where they span the whole
  degree-``N`` part of the ideal, and variables are then divided back out one
  degree at a time (:func:`reduce_degree`) until degree one is reached.
* :func:`approx_saturation` computes a generating set of ``(I : x)`` for a
  general homogeneous ideal, choosing all ranks by a singular value
  threshold (:func:`reduce_degree_hom`).
"""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .approxla import RankSpec, approx_left_null, approx_row_span, cut_info, singular_values
from .errors import (
    DegenerateInputError,
    IdentifiabilityError,
    InsufficientRowsError,
    InvalidArgumentError,
)
from .monomials import enumerate_basis, shift_positions, simplex_number
from .polyspace import CoeffMatrix, HomoPoly, build_macaulay, poly_to_json
from .series import degree_bound_report, linear_ideal_dim

log = logging.getLogger(__name__)

# relative singular value below which a required direction counts as missing
DEGENERACY_TOL = 1e-12
# spectral gap demanded at degree N when the degree bound is only conjectural
GAP_FACTOR = 1e3


@dataclass
class SaturationResult:
    """Generators found by an estimator plus an audit trail of rank decisions."""

    generators: list[HomoPoly]
    diagnostics: dict = field(default_factory=dict)

    def of_degree(self, k: int) -> np.ndarray:
        """Coefficient rows of the generators of degree ``k``."""
        rows = [g.coeffs for g in self.generators if g.degree == k]
        if not rows:
            D = self.generators[0].D if self.generators else 1
            return np.zeros((0, simplex_number(k, D)))
        return np.array(rows)

    @property
    def linear_forms(self) -> np.ndarray:
        return self.of_degree(1)

    def to_json(self) -> dict:
        return {
            "generators": [poly_to_json(g) for g in self.generators],
            "diagnostics": _jsonable(self.diagnostics),
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def _count_above(s: np.ndarray, cutoff: float) -> int:
    return int(np.sum(s > cutoff))


def reduce_degree(Q: CoeffMatrix, d: int, *, surplus: bool = True, diagnostics: list | None = None) -> CoeffMatrix:
    """Map an approximate basis of ``s_k`` to one of ``s_{k-1}``.

    ``s`` is the ideal of a ``d``-dimensional subspace.  For every variable
    ``T_i`` the rows of ``Q`` are combined so that the coefficients of
    monomials free of ``T_i`` become as small as possible; the resulting
    polynomials are approximately ``T_i * s_{k-1}``, and ``T_i`` is divided
    out.  The ``D`` partial results are merged by a final SVD.

    Parameters
    ----------
    Q : CoeffMatrix
        Rows approximately spanning ``s_k``, ``k >= 2``.
    d : int
        Dimension of the subspace.
    surplus : bool
        Keep ``min(m, D * dim s_{k-1})`` rows (capped at the column count),
        each weighted by its singular value, instead of truncating to
        ``dim s_{k-1}`` orthonormal rows.
    diagnostics : list, optional
        Receives one dict describing the rank decisions of this step.

    Raises
    ------
    InvalidArgumentError
        If ``k < 2``.
    InsufficientRowsError
        If ``Q`` has fewer rows than ``dim s_k``.
    """
    D, k, m = Q.D, Q.degree, len(Q)
    if k < 2:
        raise InvalidArgumentError(f"reduce_degree needs degree >= 2, got {k}")
    if not 0 <= d < D:
        raise InvalidArgumentError(f"need 0 <= d < D, got d={d}, D={D}")
    dim_k = linear_ideal_dim(k, D, d)
    dim_low = linear_ideal_dim(k - 1, D, d)
    if m < dim_k:
        raise InsufficientRowsError(f"{m} rows cannot span s_{k} of dimension {dim_k}")
    null_rank = m - dim_k + dim_low
    basis = enumerate_basis(D, k)
    tau = 1e-8 * max(Q.shape)

    pieces = []
    per_var = []
    for i in range(D):
        Qi = Q.rows[:, ~basis.divisible_mask(i)]
        L, null_info = approx_left_null(Qi, RankSpec.fixed(null_rank), full_output=True)
        Lq, span_info = approx_row_span(L @ Q.rows, RankSpec.fixed(dim_low), full_output=True)
        pieces.append(Lq[:, shift_positions(D, k, i)])
        s_qi = null_info["singular_values"]
        per_var.append({
            "variable": i,
            "left_null_rank": null_rank,
            "qi_rank_formula": m - null_rank,
            "qi_rank_numeric": _count_above(s_qi, tau * s_qi[0]) if s_qi.size and s_qi[0] > 0 else 0,
            "qi_cut": {key: null_info[key] for key in ("sigma_above", "sigma_below", "tie")},
            "span_cut": {key: span_info[key] for key in ("sigma_above", "sigma_below", "tie")},
        })

    short = [v["variable"] for v in per_var if v["qi_rank_numeric"] < v["qi_rank_formula"]]
    if short:
        # noise only raises ranks, so a deficit means the subspace is special
        # with respect to these coordinates (e.g. contained in T_i = 0)
        warnings.warn(
            f"degree {k}: column block ranks fall short of the generic value for variables {short}; "
            "the subspace is not in general position (rotate the coordinates randomly)",
            RuntimeWarning,
            stacklevel=2,
        )

    L = np.vstack(pieces)
    if surplus:
        n_out = min(m, D * dim_low, L.shape[1])
    else:
        n_out = dim_low
    A, info = approx_row_span(L, RankSpec.fixed(n_out), scaled=surplus, full_output=True)
    if diagnostics is not None:
        diagnostics.append({
            "degree": k,
            "rows_in": m,
            "dim_s_k": dim_k,
            "dim_s_k_minus_1": dim_low,
            "rows_out": n_out,
            "merge_gap": cut_info(info["singular_values"], dim_low),
            "variables": per_var,
        })
    return CoeffMatrix(D, k - 1, A)


def _check_rank(s: np.ndarray, r: int, what: str, diag: dict) -> None:
    if r > s.size or (r > 0 and s[r - 1] <= DEGENERACY_TOL * s[0]):
        raise DegenerateInputError(f"{what}: numerical rank below the required {r}", diag)


def munchhausen(
    polys: Sequence[HomoPoly],
    d: int,
    N: int | None = None,
    *,
    surplus: bool = True,
    normalize: bool = True,
) -> SaturationResult:
    """Estimate ``D - d`` linear forms cutting out the subspace the inputs vanish on.

    Parameters
    ----------
    polys : sequence of HomoPoly
        At least ``D + 1`` homogeneous polynomials, approximately vanishing on
        an unknown ``d``-dimensional subspace ``S``.
    d : int
        Dimension of ``S``, ``0 < d < D``.
    N : int, optional
        Degree to multiply up to; by default the Hilbert-series bound.
    surplus, normalize : bool
        See :func:`reduce_degree` and :func:`~idealreg.polyspace.build_macaulay`.

    Returns
    -------
    SaturationResult
        ``D - d`` orthonormal linear forms spanning the estimate of ``S``'s
        annihilator, with per-step diagnostics.
    """
    polys = list(polys)
    if not polys:
        raise InvalidArgumentError("need at least one polynomial")
    D = polys[0].D
    n = len(polys)
    if not 0 < d < D:
        raise InvalidArgumentError(f"need 0 < d < D, got d={d}, D={D}")
    if n <= D:
        raise IdentifiabilityError(f"need at least D + 1 = {D + 1} polynomials, got {n}")
    degrees = [p.degree for p in polys]
    diag: dict = {"D": D, "d": d, "n": n, "degrees": degrees}
    if N is None:
        bound = degree_bound_report(degrees, D, d)
        N, conjectural = bound.N, bound.conjectural
        diag["count_crossing"] = bound.count_crossing
    else:
        conjectural = False
    diag["N"], diag["conjectural"] = int(N), conjectural

    Q = build_macaulay(polys, N, normalize=normalize)
    dim_N = linear_ideal_dim(N, D, d)
    if len(Q) < dim_N:
        raise InsufficientRowsError(f"Macaulay matrix has {len(Q)} rows, s_{N} has dimension {dim_N}")
    s = singular_values(Q.rows)
    diag["macaulay_shape"] = list(Q.shape)
    diag["macaulay_cut"] = cut_info(s, dim_N)
    _check_rank(s, dim_N, f"Macaulay matrix at degree {N}", diag)
    gap = s[dim_N - 1] / s[dim_N] if dim_N < s.size and s[dim_N] > 0 else np.inf
    diag["macaulay_gap_ratio"] = float(gap)
    if conjectural and gap < GAP_FACTOR:
        warnings.warn(
            f"degree bound N={N} is conjectural and the spectral gap at degree {N} is only {gap:.3g}",
            RuntimeWarning,
            stacklevel=2,
        )

    steps: list = []
    for _ in range(N, 1, -1):
        Q = reduce_degree(Q, d, surplus=surplus, diagnostics=steps)
        log.debug("reduced to degree %d: %d rows", Q.degree, len(Q))
    diag["steps"] = steps

    codim = D - d
    if len(Q) < codim:
        raise InsufficientRowsError(f"only {len(Q)} linear rows left, need {codim}")
    A, info = approx_row_span(Q.rows, RankSpec.fixed(codim), full_output=True)
    diag["final_cut"] = {key: info[key] for key in ("rank", "sigma_above", "sigma_below", "tie")}
    _check_rank(info["singular_values"], codim, "linear generators", diag)
    return SaturationResult([HomoPoly.linear(a) for a in A], diag)


def _threshold_basis(rows: np.ndarray, cutoff: float) -> np.ndarray:
    if rows.shape[0] == 0 or not np.any(rows):
        return np.zeros((0, rows.shape[1]))
    _, s, vt = np.linalg.svd(rows, full_matrices=False)
    r = _count_above(s, cutoff)
    return approx_row_span(rows, RankSpec.fixed(r)) if r else np.zeros((0, rows.shape[1]))


def reduce_degree_hom(Q: CoeffMatrix, pivot: int | None = None, tau: float = 1e-8) -> CoeffMatrix:
    """Approximate basis of ``(I : x)_{k-1}`` from one of ``(I : x)_k``.

    ``x`` is the variable with 0-based index ``pivot`` (default: the last
    one).  All ranks are numerical ranks at relative threshold ``tau``,
    measured against the largest singular value of ``Q``.  An empty matrix
    is returned when nothing of degree ``k - 1`` survives.
    """
    D, k = Q.D, Q.degree
    if k < 1:
        raise InvalidArgumentError(f"reduce_degree_hom needs degree >= 1, got {k}")
    if not 0 < tau < 1:
        raise InvalidArgumentError(f"tau must lie in (0, 1), got {tau}")
    pivot = D - 1 if pivot is None else int(pivot)
    if not 0 <= pivot < D:
        raise InvalidArgumentError(f"pivot {pivot} out of range for D={D}")
    empty = CoeffMatrix(D, k - 1, np.zeros((0, simplex_number(k - 1, D))))
    s_q = singular_values(Q.rows)
    if len(Q) == 0 or s_q[0] == 0:
        return empty
    cutoff = tau * s_q[0]

    basis = enumerate_basis(D, k)
    Qp = Q.rows[:, ~basis.divisible_mask(pivot)]
    r = _count_above(singular_values(Qp), cutoff)
    L = approx_left_null(Qp, RankSpec.fixed(len(Q) - r))
    if L.shape[0] == 0:
        return empty
    Lq = _threshold_basis(L @ Q.rows, cutoff)
    if Lq.shape[0] == 0:
        return empty
    lowered = Lq[:, shift_positions(D, k, pivot)]
    s_low = singular_values(lowered)
    A = _threshold_basis(lowered, tau * s_low[0]) if s_low[0] > 0 else np.zeros((0, lowered.shape[1]))
    return CoeffMatrix(D, k - 1, A)


def approx_saturation(
    polys: Sequence[HomoPoly],
    N: int,
    tau: float = 1e-8,
    pivot: int | None = None,
) -> SaturationResult:
    """Generators of the approximate saturation ``(I : x)`` of ``I = <polys>``.

    ``N`` must be a degree with ``I_N = (I : x)_N``.  Starting from the
    degree-``N`` Macaulay matrix, an orthonormal basis of each degree from
    ``N`` down to 1 is added to the generator set, reducing the degree with
    :func:`reduce_degree_hom` in between.
    """
    polys = list(polys)
    if not polys:
        raise InvalidArgumentError("need at least one polynomial")
    D = polys[0].D
    Q = build_macaulay(polys, N)
    generators: list[HomoPoly] = []
    ranks = {}
    for k in range(N, 0, -1):
        s = singular_values(Q.rows)
        if len(Q) == 0 or s[0] == 0:
            ranks[k] = 0
            break
        B = _threshold_basis(Q.rows, tau * s[0])
        ranks[k] = B.shape[0]
        generators.extend(HomoPoly(D, k, b) for b in B)
        if k > 1:
            Q = reduce_degree_hom(CoeffMatrix(D, k, B), pivot, tau)
    diag = {"D": D, "N": int(N), "tau": tau, "pivot": D - 1 if pivot is None else pivot, "ranks": ranks}
    return SaturationResult(generators, diag)
