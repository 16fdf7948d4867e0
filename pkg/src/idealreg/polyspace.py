"""Homogeneous polynomials as dense coefficient vectors, and Macaulay matrices."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidArgumentError
from .monomials import (
    MultiIndex,
    enumerate_basis,
    multiplication_table,
    rank_exponents,
    simplex_number,
)


@dataclass(frozen=True, eq=False)
class HomoPoly:
    """Homogeneous polynomial of degree ``degree`` in ``D`` variables.

    ``coeffs[i]`` multiplies the i-th monomial of ``enumerate_basis(D, degree)``.
    """

    D: int
    degree: int
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=float)
        expected = simplex_number(self.degree, self.D)
        if coeffs.shape != (expected,):
            raise InvalidArgumentError(
                f"degree-{self.degree} polynomial in {self.D} variables needs {expected} "
                f"coefficients, got shape {coeffs.shape}"
            )
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_terms(cls, D: int, degree: int, terms: Iterable[tuple[Sequence[int], float]]) -> "HomoPoly":
        """Build from ``(exponents, coefficient)`` pairs; repeated monomials add up."""
        basis = enumerate_basis(D, degree)
        coeffs = np.zeros(len(basis))
        for exp, coef in terms:
            coeffs[basis.position_of(exp)] += coef
        return cls(D, degree, coeffs)

    @classmethod
    def linear(cls, coefficients: Sequence[float]) -> "HomoPoly":
        """The linear form ``sum_i c_i T_i``."""
        c = np.asarray(coefficients, dtype=float)
        # degree-1 basis order is T1, ..., TD
        return cls(len(c), 1, c)

    @property
    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def terms(self) -> list[tuple[tuple[int, ...], float]]:
        """Nonzero terms as ``(exponents, coefficient)`` in basis order."""
        exps = enumerate_basis(self.D, self.degree).exponents
        return [(tuple(int(e) for e in exps[i]), float(c)) for i, c in enumerate(self.coeffs) if c != 0]

    def __call__(self, x) -> float:
        return evaluate(self, x)

    def __repr__(self):
        shown = " + ".join(f"{c:g}*{MultiIndex(e)}" for e, c in self.terms()) or "0"
        return f"HomoPoly(D={self.D}, degree={self.degree}: {shown})"


@dataclass(frozen=True, eq=False)
class CoeffMatrix:
    """Stack of degree-``degree`` coefficient rows over ``D`` variables."""

    D: int
    degree: int
    rows: np.ndarray

    def __post_init__(self):
        rows = np.array(self.rows, dtype=float)
        ncols = simplex_number(self.degree, self.D)
        if rows.ndim != 2 or rows.shape[1] != ncols:
            if rows.size == 0:
                rows = rows.reshape(0, ncols)
            else:
                raise InvalidArgumentError(
                    f"degree-{self.degree} rows in {self.D} variables need {ncols} columns, got {rows.shape}"
                )
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows.shape

    def __len__(self) -> int:
        return self.rows.shape[0]

    def polys(self) -> list[HomoPoly]:
        return [HomoPoly(self.D, self.degree, r) for r in self.rows]

    @classmethod
    def from_polys(cls, polys: Sequence[HomoPoly]) -> "CoeffMatrix":
        D, k = _common_shape(polys)
        if not all(p.degree == k for p in polys):
            raise InvalidArgumentError("CoeffMatrix rows must share one degree")
        return cls(D, k, np.array([p.coeffs for p in polys]))


def _common_shape(polys: Sequence[HomoPoly]) -> tuple[int, int]:
    if not polys:
        raise InvalidArgumentError("need at least one polynomial")
    D = polys[0].D
    if any(p.D != D for p in polys):
        raise InvalidArgumentError("all polynomials must have the same number of variables")
    return D, polys[0].degree


def multiply_by_monomial(p: HomoPoly, M: MultiIndex) -> HomoPoly:
    """The product ``p * M``; coefficients move, none are combined."""
    if M.D != p.D:
        raise InvalidArgumentError(f"monomial has {M.D} variables, polynomial has {p.D}")
    exps = enumerate_basis(p.D, p.degree).exponents + np.array(M.exponents)
    out = np.zeros(simplex_number(p.degree + M.degree, p.D))
    out[rank_exponents(exps)] = p.coeffs
    return HomoPoly(p.D, p.degree + M.degree, out)


def multiply_by_linear(p: HomoPoly, ell: HomoPoly) -> HomoPoly:
    """The product of ``p`` with the linear form ``ell``."""
    if ell.degree != 1 or ell.D != p.D:
        raise InvalidArgumentError("second factor must be a linear form in the same variables")
    table = multiplication_table(p.D, p.degree, 1)
    out = np.zeros(simplex_number(p.degree + 1, p.D))
    for i, c in enumerate(ell.coeffs):
        if c != 0:
            np.add.at(out, table[i], c * p.coeffs)
    return HomoPoly(p.D, p.degree + 1, out)


def macaulay_rows(coeffs: np.ndarray, D: int, degree: int, N: int) -> np.ndarray:
    """All multiples ``f * M`` with ``deg M = N - degree`` for one coefficient vector.

    Works for any numeric dtype (floats, or Python ints in an object array).
    """
    table = multiplication_table(D, degree, N - degree)
    block = np.zeros((table.shape[0], simplex_number(N, D)), dtype=np.asarray(coeffs).dtype)
    block[np.arange(table.shape[0])[:, None], table] = coeffs
    return block


def build_macaulay(polys: Sequence[HomoPoly], N: int, normalize: bool = True) -> CoeffMatrix:
    """Multiply every polynomial by every monomial up to total degree ``N``.

    Rows are ordered polynomial-major, monomial-minor.  With ``normalize``
    every nonzero row is scaled to unit Euclidean norm.

    Raises
    ------
    InvalidArgumentError
        If ``N`` is below the degree of some input.
    """
    D, _ = _common_shape(polys)
    N = int(N)
    if any(p.degree > N for p in polys):
        raise InvalidArgumentError(f"N={N} is below the largest input degree {max(p.degree for p in polys)}")
    rows = np.vstack([macaulay_rows(p.coeffs, D, p.degree, N) for p in polys])
    if normalize:
        norms = np.linalg.norm(rows, axis=1)
        nz = norms > 0
        rows[nz] /= norms[nz, None]
    return CoeffMatrix(D, N, rows)


def macaulay_row_count(degrees: Sequence[int], D: int, N: int) -> int:
    return sum(simplex_number(N - d, D) for d in degrees)


def monomial_values(D: int, k: int, x: np.ndarray) -> np.ndarray:
    """Values of all degree-``k`` monomials at the points ``x`` (shape ``(..., D)``)."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != D:
        raise InvalidArgumentError(f"point has {x.shape[-1]} coordinates, expected {D}")
    exps = enumerate_basis(D, k).exponents
    return np.prod(x[..., None, :] ** exps, axis=-1)


def evaluate(p: HomoPoly, x) -> float | np.ndarray:
    """Evaluate ``p`` at a point, or at each row of a 2-D array of points."""
    vals = monomial_values(p.D, p.degree, x)
    out = vals @ p.coeffs
    return float(out) if np.ndim(out) == 0 else out


# -- JSON exchange format ------------------------------------------------------

def poly_to_json(p: HomoPoly) -> dict:
    return {
        "vars": p.D,
        "degree": p.degree,
        "terms": [{"exp": list(e), "coef": c} for e, c in p.terms()],
    }


def poly_from_json(obj: dict) -> HomoPoly:
    try:
        D, k, terms = int(obj["vars"]), int(obj["degree"]), obj["terms"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidArgumentError(f"malformed polynomial object: {exc}") from None
    pairs = []
    for t in terms:
        exp = [int(e) for e in t["exp"]]
        if len(exp) != D or sum(exp) != k:
            raise InvalidArgumentError(f"term exponent {exp} does not match vars={D}, degree={k}")
        pairs.append((exp, float(t["coef"])))
    return HomoPoly.from_terms(D, k, pairs)
