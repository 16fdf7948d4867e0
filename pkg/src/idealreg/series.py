"""Truncated integer power series and the Hilbert-series degree bound.

For generic forms ``f_1, ..., f_n`` of degrees ``d_i`` vanishing on a
``d``-dimensional linear subspace of ``C^D``, the series

    prod_i (1 - t^{d_i}) / (1 - t)^D  -  1 / (1 - t)^d

predicts ``dim s_k - dim I_k`` in each degree ``k`` until its first
non-positive coefficient, which is the degree ``N`` where ``I_N = s_N``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import InvalidArgumentError, NoConvergenceError, PreconditionViolation
from .monomials import simplex_number

MAX_ORDER = 512


@dataclass(frozen=True)
class TruncatedSeries:
    """Power series ``sum_k a_k t^k`` known exactly for ``k <= order``."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise InvalidArgumentError("a truncated series needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def _align(self, other: "TruncatedSeries") -> int:
        return min(len(self), len(other))

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = self._align(other)
        return TruncatedSeries(tuple(a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])))

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(tuple(-a for a in self.coeffs))

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = self._align(other)
        a, b = self.coeffs, other.coeffs
        return TruncatedSeries(tuple(sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(n)))

    def divide(self, unit: "TruncatedSeries") -> "TruncatedSeries":
        """Quotient by a series with constant term +-1, exact on the common prefix."""
        if unit.coeffs[0] not in (1, -1):
            raise InvalidArgumentError("divisor must have constant term +1 or -1")
        n = self._align(unit)
        b0 = unit.coeffs[0]
        q: list[int] = []
        for k in range(n):
            rest = self.coeffs[k] - sum(q[i] * unit.coeffs[k - i] for i in range(k))
            q.append(rest * b0)
        return TruncatedSeries(tuple(q))


def inverse_power_series(D: int, T: int) -> TruncatedSeries:
    """Coefficients of ``1/(1-t)^D`` up to order ``T`` (``D = 0`` gives ``1``)."""
    if D == 0:
        return TruncatedSeries((1,) + (0,) * T)
    return TruncatedSeries(tuple(simplex_number(k, D) for k in range(T + 1)))


def numerator_series(degrees: Sequence[int], T: int) -> TruncatedSeries:
    """``prod_i (1 - t^{d_i})`` truncated at order ``T``."""
    coeffs = [1] + [0] * T
    for d in degrees:
        for k in range(T, d - 1, -1):
            coeffs[k] -= coeffs[k - d]
    return TruncatedSeries(tuple(coeffs))


def linear_ideal_dim(k: int, D: int, d: int) -> int:
    """Dimension of the degree-``k`` part of the ideal of a ``d``-plane in ``C^D``."""
    if not 0 <= d <= D:
        raise InvalidArgumentError(f"need 0 <= d <= D, got d={d}, D={D}")
    if k < 0:
        return 0
    # polynomials in zero variables are the constants
    quotient = simplex_number(k, d) if d > 0 else int(k == 0)
    return simplex_number(k, D) - quotient


def expected_difference_series(degrees: Sequence[int], D: int, d: int, T: int) -> TruncatedSeries:
    """``prod(1 - t^{d_i}) / (1 - t)^D - 1/(1 - t)^d`` up to order ``T``."""
    degrees = [int(x) for x in degrees]
    if not 0 <= d < D:
        raise InvalidArgumentError(f"need 0 <= d < D, got d={d}, D={D}")
    if any(x < 1 for x in degrees):
        raise InvalidArgumentError(f"input degrees must be >= 1, got {degrees}")
    if T < 1:
        raise InvalidArgumentError(f"truncation order must be >= 1, got {T}")
    return numerator_series(degrees, T) * inverse_power_series(D, T) - inverse_power_series(d, T)


def froberg_truncate(s: TruncatedSeries) -> TruncatedSeries:
    """Zero every coefficient from the first non-positive one after the leading positive run.

    Coefficients before the first positive one are left as they are; a
    series with no positive coefficient truncates to zero.
    """
    coeffs = list(s.coeffs)
    start = next((k for k, a in enumerate(coeffs) if a > 0), None)
    if start is None:
        return TruncatedSeries((0,) * len(coeffs))
    cut = next((k for k in range(start, len(coeffs)) if coeffs[k] <= 0), len(coeffs))
    return TruncatedSeries(tuple(coeffs[:cut]) + (0,) * (len(coeffs) - cut))


def is_proven_regime(degrees: Sequence[int], D: int) -> bool:
    """Whether the bound is known to be exact: quadrics or lower, at most 11 variables."""
    return max(degrees, default=0) <= 2 and D <= 11


def first_nonpositive_index(degrees: Sequence[int], D: int, d: int, T: int | None = None) -> tuple[int, TruncatedSeries]:
    """Scan the difference series from the first degree where ``s_k`` is nonzero.

    Returns the index and the series prefix that was computed.  The
    truncation order starts at ``4 * max(d_i) * D`` and doubles until a
    non-positive coefficient shows up, up to ``MAX_ORDER``.
    """
    degrees = [int(x) for x in degrees]
    if not 0 <= d < D:
        raise InvalidArgumentError(f"need 0 <= d < D, got d={d}, D={D}")
    k_min = next(k for k in range(1, D + 2) if linear_ideal_dim(k, D, d) > 0)
    if T is None:
        T = 4 * max(degrees, default=1) * D
    T = max(int(T), k_min)
    while True:
        T = min(T, MAX_ORDER)
        series = expected_difference_series(degrees, D, d, T)
        for k in range(k_min, T + 1):
            if series[k] <= 0:
                return k, series
        if T >= MAX_ORDER:
            raise NoConvergenceError(f"no non-positive coefficient up to order {MAX_ORDER}")
        T *= 2


@dataclass(frozen=True)
class DegreeBound:
    """Result of :func:`degree_bound_report`."""

    N: int
    conjectural: bool
    series: TruncatedSeries = field(repr=False)
    count_crossing: int
    identifiable: bool = True

    def as_dict(self) -> dict:
        return {
            "N": self.N,
            "conjectural": self.conjectural,
            "count_crossing": self.count_crossing,
            "identifiable": self.identifiable,
            "series": list(self.series.coeffs[: self.N + 1]),
        }


def count_crossing_degree(degrees: Sequence[int], D: int, d: int) -> int:
    """Smallest degree where the raw Macaulay row count reaches ``dim s_k``.

    Koszul syzygies are ignored, so this is a naive lower estimate of the
    degree needed, kept only as a diagnostic.
    """
    k = max(degrees)
    while sum(simplex_number(k - x, D) for x in degrees) < linear_ideal_dim(k, D, d):
        k += 1
        if k > MAX_ORDER:
            raise NoConvergenceError("row count never reaches dim s_k")
    return k


def degree_bound_report(degrees: Sequence[int], D: int, d: int, T: int | None = None) -> DegreeBound:
    """Degree ``N`` with ``I_N = s_N`` for generic inputs, plus diagnostics.

    ``N`` is exact for quadrics (or linear forms) in at most 11 variables and
    a lower bound flagged ``conjectural`` otherwise.  ``identifiable`` tells
    whether there are more inputs than variables, which guarantees that the
    saturation recovers the subspace.

    Raises
    ------
    PreconditionViolation
        If there are fewer inputs than the codimension ``D - d``; then the
        inputs cut out a set larger than the subspace and no such ``N`` exists.
    """
    degrees = [int(x) for x in degrees]
    if len(degrees) < D - d:
        raise PreconditionViolation(
            f"{len(degrees)} polynomials cannot cut out a {d}-dimensional subspace of C^{D}"
        )
    N, series = first_nonpositive_index(degrees, D, d, T)
    return DegreeBound(
        N=N,
        conjectural=not is_proven_regime(degrees, D),
        series=series,
        count_crossing=count_crossing_degree(degrees, D, d),
        identifiable=len(degrees) > D,
    )


def degree_bound(degrees: Sequence[int], D: int, d: int) -> int:
    return degree_bound_report(degrees, D, d).N
