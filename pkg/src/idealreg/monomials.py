"""Graded monomial bases in D variables.

Within a fixed degree, monomials are listed in descending graded reverse
lexicographic order, e.g. for D=3, k=2::

    T1^2, T1*T2, T2^2, T1*T3, T2*T3, T3^2

Positions are computed by combinatorial ranking, so the position of a
monomial costs O(D) and never needs a lookup table.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterator, Sequence

import numpy as np

from .errors import InvalidArgumentError

INT64_MAX = np.iinfo(np.int64).max


def simplex_number(a: int, b: int) -> int:
    """The b-th a-simplex number ``binomial(a + b - 1, a)``.

    This counts the monomials of degree ``a`` in ``b`` variables and is zero
    for negative ``a``.

    Raises
    ------
    InvalidArgumentError
        If ``b < 1`` or the value does not fit into a signed 64-bit integer.
    """
    a, b = int(a), int(b)
    if b < 1:
        raise InvalidArgumentError(f"simplex_number needs b >= 1, got b={b}")
    if a < 0:
        return 0
    value = comb(a + b - 1, a)
    if value > INT64_MAX:
        raise InvalidArgumentError(f"simplex_number({a}, {b}) overflows 64-bit integers")
    return value


@dataclass(frozen=True)
class MultiIndex:
    """Exponent vector of a monomial ``T^alpha``."""

    exponents: tuple[int, ...]

    def __post_init__(self):
        exps = tuple(int(e) for e in self.exponents)
        if not exps:
            raise InvalidArgumentError("a MultiIndex needs at least one variable")
        if any(e < 0 for e in exps):
            raise InvalidArgumentError(f"negative exponent in {exps}")
        object.__setattr__(self, "exponents", exps)

    @classmethod
    def variable(cls, i: int, D: int) -> "MultiIndex":
        """The monomial ``T_{i+1}`` (0-based variable index ``i``)."""
        if not 0 <= i < D:
            raise InvalidArgumentError(f"variable index {i} out of range for D={D}")
        return cls(tuple(1 if j == i else 0 for j in range(D)))

    @classmethod
    def one(cls, D: int) -> "MultiIndex":
        return cls((0,) * D)

    @property
    def D(self) -> int:
        return len(self.exponents)

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        if other.D != self.D:
            raise InvalidArgumentError(f"cannot multiply monomials in {self.D} and {other.D} variables")
        return MultiIndex(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def divides(self, other: "MultiIndex") -> bool:
        return self.D == other.D and all(a <= b for a, b in zip(self.exponents, other.exponents))

    def __str__(self):
        parts = []
        for i, e in enumerate(self.exponents, start=1):
            if e == 1:
                parts.append(f"T{i}")
            elif e > 1:
                parts.append(f"T{i}^{e}")
        return "*".join(parts) or "1"


@lru_cache(maxsize=None)
def _simplex_table(kmax: int, D: int) -> np.ndarray:
    # table[a, b] = simplex number Delta(a, b), with the empty-ring convention in column 0
    table = np.zeros((kmax + 1, D + 1), dtype=np.int64)
    table[0, 0] = 1
    for b in range(1, D + 1):
        for a in range(kmax + 1):
            table[a, b] = simplex_number(a, b)
    table.setflags(write=False)
    return table


def rank_exponents(exps: np.ndarray) -> np.ndarray:
    """Positions of exponent vectors in their degree's canonical basis.

    ``exps`` has shape ``(..., D)``; every vector is ranked within the basis
    of its own degree.
    """
    exps = np.asarray(exps, dtype=np.int64)
    D = exps.shape[-1]
    prefix = np.cumsum(exps, axis=-1)
    kmax = int(prefix[..., -1].max()) if prefix.size else 0
    table = _simplex_table(kmax, D)
    cols = np.arange(1, D + 1)
    before = prefix - exps
    return (table[prefix, cols] - table[before, cols]).sum(axis=-1)


@lru_cache(maxsize=None)
def _enumerate_exponents(D: int, k: int) -> np.ndarray:
    if D == 1:
        out = np.array([[k]], dtype=np.int64)
    else:
        blocks = []
        # the last variable's exponent is the most significant key, ascending
        for last in range(k + 1):
            head = _enumerate_exponents(D - 1, k - last)
            tail = np.full((head.shape[0], 1), last, dtype=np.int64)
            blocks.append(np.hstack([head, tail]))
        out = np.vstack(blocks)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class MonomialBasis:
    """All monomials of degree ``k`` in ``D`` variables, in canonical order."""

    D: int
    k: int

    def __post_init__(self):
        if self.D < 1:
            raise InvalidArgumentError(f"need D >= 1, got {self.D}")
        if self.k < 0:
            raise InvalidArgumentError(f"need k >= 0, got {self.k}")
        simplex_number(self.k, self.D)  # overflow guard

    @property
    def exponents(self) -> np.ndarray:
        """Read-only ``(len(self), D)`` integer array of exponent vectors."""
        return _enumerate_exponents(self.D, self.k)

    def __len__(self) -> int:
        return simplex_number(self.k, self.D)

    def __iter__(self) -> Iterator[MultiIndex]:
        for row in self.exponents:
            yield MultiIndex(tuple(row))

    def index_at(self, i: int) -> MultiIndex:
        n = len(self)
        if not 0 <= i < n:
            raise InvalidArgumentError(f"position {i} out of range for basis of size {n}")
        return MultiIndex(tuple(self.exponents[i]))

    def position_of(self, m: MultiIndex | Sequence[int]) -> int:
        exps = m.exponents if isinstance(m, MultiIndex) else tuple(m)
        if len(exps) != self.D or sum(exps) != self.k or min(exps) < 0:
            raise InvalidArgumentError(f"{exps} is not a degree-{self.k} monomial in {self.D} variables")
        return int(rank_exponents(np.array(exps)))

    def divisible_mask(self, i: int) -> np.ndarray:
        """Boolean mask of the monomials divisible by variable ``i`` (0-based)."""
        return self.exponents[:, i] > 0


def enumerate_basis(D: int, k: int) -> MonomialBasis:
    """The canonical basis of degree-``k`` monomials in ``D`` variables."""
    return MonomialBasis(int(D), int(k))


def product_index(basis_a: MonomialBasis, basis_b: MonomialBasis, i: int, j: int) -> int:
    """Position of ``basis_a[i] * basis_b[j]`` in the degree ``k_a + k_b`` basis."""
    if basis_a.D != basis_b.D:
        raise InvalidArgumentError(f"bases have different D ({basis_a.D} vs {basis_b.D})")
    m = basis_a.index_at(i) + basis_b.index_at(j)
    return int(rank_exponents(np.array(m.exponents)))


@lru_cache(maxsize=256)
def multiplication_table(D: int, k_poly: int, k_mono: int) -> np.ndarray:
    """Product positions for all (monomial, term) pairs.

    Entry ``[a, b]`` is the position of ``mono_a * term_b`` in the degree
    ``k_poly + k_mono`` basis, where ``mono_a`` runs over degree ``k_mono``
    and ``term_b`` over degree ``k_poly``.
    """
    monos = _enumerate_exponents(D, k_mono)
    terms = _enumerate_exponents(D, k_poly)
    table = rank_exponents(monos[:, None, :] + terms[None, :, :])
    table.setflags(write=False)
    return table


@lru_cache(maxsize=256)
def shift_positions(D: int, k: int, i: int) -> np.ndarray:
    """Positions of ``M * T_i`` in degree ``k`` for each degree ``k-1`` monomial ``M``.

    Selecting these columns from a degree-``k`` coefficient matrix and
    reading them as degree ``k-1`` coefficients divides by ``T_i``.
    """
    lower = _enumerate_exponents(D, k - 1).copy()
    lower[:, i] += 1
    pos = rank_exponents(lower)
    pos.setflags(write=False)
    return pos
