"""Generic polynomials in the ideal of a linear subspace, and rank experiments on them.

Exact ranks are computed over the integers with FLINT, using integer
coefficients drawn uniformly from ``[-10**6, 10**6]``.  Floating point ranks
use a conservative threshold of ``1e-6 * sigma_1`` and are heuristic: they
can support, but not prove, a rank statement.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Sequence

import flint
import numpy as np
from scipy.linalg import null_space

from .approxla import numerical_rank
from .errors import InvalidArgumentError, NoConvergenceError, PreconditionViolation
from .monomials import multiplication_table, simplex_number
from .polyspace import HomoPoly, macaulay_rows, multiply_by_linear
from .series import expected_difference_series, first_nonpositive_index, froberg_truncate, linear_ideal_dim

INT_RANGE = 10**6
FLOAT_RANK_TAU = 1e-6
RETRY_CAP = 5
MAX_DEGREE = 64
# 2**61 - 1 and the largest prime below 2**62
PRIMES = (2**61 - 1, 2**62 - 57)


@dataclass(frozen=True, eq=False)
class GenericSampler:
    """Draws generic polynomials vanishing on the row span of ``basis``."""

    basis: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        B = np.atleast_2d(np.array(self.basis, dtype=float))
        if B.shape[0] > B.shape[1]:
            raise InvalidArgumentError(f"subspace basis of shape {B.shape} has more rows than columns")
        if not np.allclose(B @ B.T, np.eye(B.shape[0]), atol=1e-10):
            raise InvalidArgumentError("subspace basis must be orthonormal")
        object.__setattr__(self, "basis", B)
        object.__setattr__(self, "_rng", np.random.default_rng(self.seed))

    @classmethod
    def random(cls, D: int, d: int, seed: int | None = None) -> "GenericSampler":
        """Sampler for a uniformly random ``d``-dimensional subspace of ``R^D``."""
        rng = np.random.default_rng(seed)
        q, _ = np.linalg.qr(rng.standard_normal((D, d)))
        return cls(q.T, seed=None if seed is None else rng.integers(2**63))

    @property
    def D(self) -> int:
        return self.basis.shape[1]

    @property
    def d(self) -> int:
        return self.basis.shape[0]

    def complement(self) -> np.ndarray:
        """Orthonormal rows spanning the linear forms that vanish on the subspace."""
        if self.d == 0:
            return np.eye(self.D)
        return null_space(self.basis).T


def sample_in_ideal(s: GenericSampler, degree: int, count: int) -> list[HomoPoly]:
    """``count`` polynomials ``sum_j ell_j g_j`` with Gaussian ``g_j`` of degree ``degree - 1``.

    The ``ell_j`` run over an orthonormal basis of the linear forms vanishing
    on the subspace, so every output vanishes there.
    """
    if degree < 1:
        raise InvalidArgumentError(f"degree must be >= 1, got {degree}")
    if s.d >= s.D:
        raise InvalidArgumentError("no linear form vanishes on the whole space")
    forms = [HomoPoly.linear(c) for c in s.complement()]
    n_low = simplex_number(degree - 1, s.D)
    out = []
    for _ in range(count):
        acc = np.zeros(simplex_number(degree, s.D))
        for ell in forms:
            g = HomoPoly(s.D, degree - 1, s._rng.standard_normal(n_low))
            acc += multiply_by_linear(g, ell).coeffs
        out.append(HomoPoly(s.D, degree, acc))
    return out


def sample_integer_in_ideal(D: int, d: int, degrees: Sequence[int], rng: np.random.Generator):
    """Integer coefficient vectors of generic forms in the ideal of a random rational ``d``-plane.

    The plane is the common zero set of ``D - d`` random integer linear
    forms.  Returns one object-dtype array (Python ints) per degree.
    """
    codim = D - d
    if codim < 1:
        raise InvalidArgumentError("no linear form vanishes on the whole space")
    forms = rng.integers(-INT_RANGE, INT_RANGE + 1, size=(codim, D)).astype(object)
    out = []
    for deg in degrees:
        if deg < 1:
            raise InvalidArgumentError(f"degree must be >= 1, got {deg}")
        table = multiplication_table(D, deg - 1, 1)
        acc = np.zeros(simplex_number(deg, D), dtype=object)
        for ell in forms:
            g = rng.integers(-INT_RANGE, INT_RANGE + 1, size=simplex_number(deg - 1, D)).astype(object)
            for var in range(D):
                acc[table[var]] += ell[var] * g
        out.append(acc)
    return out


def exact_rank(M) -> int:
    """Rank over the rationals of an integer matrix, via ranks modulo large primes.

    The rank modulo a prime never exceeds the rational rank and agrees with
    it unless the prime divides every nonzero maximal minor, so the maximum
    over two 61-bit primes is a certified lower bound that is exact with
    overwhelming probability.  Callers comparing against a proven upper bound
    (such as the Froberg-type bound) therefore get a rigorous equality.
    """
    M = np.asarray(M, dtype=object)
    if M.size == 0:
        return 0
    rows, cols = M.shape
    flat = [int(x) for x in M.ravel()]
    best = 0
    for p in PRIMES:
        best = max(best, flint.nmod_mat(rows, cols, [x % p for x in flat], p).rank())
        if best == min(rows, cols):
            break
    return best


def _macaulay(coeff_list, degrees, D: int, k: int, dtype=float) -> np.ndarray:
    blocks = [macaulay_rows(c, D, deg, k) for c, deg in zip(coeff_list, degrees) if deg <= k]
    if not blocks:
        return np.zeros((0, simplex_number(k, D)), dtype=dtype)
    return np.vstack(blocks)


def macaulay_rank(degrees: Sequence[int], D: int, d: int, k: int, rng: np.random.Generator, exact: bool = True) -> int:
    """Rank of the degree-``k`` Macaulay matrix of freshly sampled generic inputs."""
    degrees = [int(x) for x in degrees]
    if exact:
        coeffs = sample_integer_in_ideal(D, d, degrees, rng)
        return exact_rank(_macaulay(coeffs, degrees, D, k, dtype=object))
    sampler = GenericSampler.random(D, d, seed=int(rng.integers(2**63)))
    coeffs = [sample_in_ideal(sampler, deg, 1)[0].coeffs for deg in degrees]
    M = _macaulay(coeffs, degrees, D, k)
    return numerical_rank(M, FLOAT_RANK_TAU) if M.size else 0


def expected_rank(degrees: Sequence[int], D: int, d: int, k: int) -> int:
    """Predicted ``dim I_k``: ``dim s_k`` minus the truncated series coefficient."""
    series = froberg_truncate(expected_difference_series(degrees, D, d, max(k, 1)))
    return linear_ideal_dim(k, D, d) - series[k]


@dataclass
class FrobergCheck:
    degrees: list
    D: int
    d: int
    k: int
    verified: bool
    rank: int
    expected: int
    dim_s_k: int
    attempts: int
    exact: bool

    def as_dict(self) -> dict:
        return asdict(self)


def check_froberg(
    degrees: Sequence[int],
    D: int,
    d: int,
    k: int,
    seed: int | None = None,
    exact: bool = True,
    retries: int = RETRY_CAP,
) -> FrobergCheck:
    """Check that sampled inputs reach the predicted Macaulay rank in degree ``k``.

    Resamples up to ``retries`` times; an unlucky or non-generic draw shows up
    as ``verified=False`` rather than an exception.
    """
    degrees = [int(x) for x in degrees]
    if not 0 <= d < D:
        raise InvalidArgumentError(f"need 0 <= d < D, got d={d}, D={D}")
    if k < 1:
        raise InvalidArgumentError(f"degree k must be >= 1, got {k}")
    expected = expected_rank(degrees, D, d, k)
    rng = np.random.default_rng(seed)
    rank = -1
    for attempt in range(1, retries + 1):
        rank = macaulay_rank(degrees, D, d, k, rng, exact=exact)
        if rank == expected:
            break
    return FrobergCheck(
        degrees=degrees,
        D=D,
        d=d,
        k=k,
        verified=rank == expected,
        rank=rank,
        expected=expected,
        dim_s_k=linear_ideal_dim(k, D, d),
        attempts=attempt,
        exact=exact,
    )


def froberg_table(
    degrees: Sequence[int],
    D: int,
    d: int,
    kmax: int | None = None,
    seed: int | None = None,
    exact: bool = True,
) -> list[FrobergCheck]:
    """Run :func:`check_froberg` for ``k = 1 .. kmax``.

    ``kmax`` defaults to the first degree where the truncated series vanishes,
    i.e. where the inputs are predicted to fill ``s_k``.
    """
    if kmax is None:
        kmax, _ = first_nonpositive_index(degrees, D, d)
    seeds = np.random.SeedSequence(seed).spawn(kmax)
    return [
        check_froberg(degrees, D, d, k, seed=int(ss.generate_state(1)[0]), exact=exact)
        for k, ss in zip(range(1, kmax + 1), seeds)
    ]


def compute_N_empirical(
    degrees: Sequence[int],
    D: int,
    d: int | None = None,
    seed: int | None = None,
    exact: bool = True,
    kmax: int = MAX_DEGREE,
    sampler: GenericSampler | None = None,
) -> int:
    """Smallest tested degree ``k`` where sampled inputs span all of ``s_k``.

    The search starts at the first non-positive coefficient of the difference
    series, below which equality is impossible, and draws new inputs for
    every degree.  Passing ``sampler`` fixes the subspace (floating point
    mode only); otherwise a random ``d``-plane is used.

    Raises
    ------
    PreconditionViolation
        With ``D`` or fewer inputs; such an ``N`` then need not exist.
    NoConvergenceError
        If no degree up to ``kmax`` works.
    """
    degrees = [int(x) for x in degrees]
    if sampler is not None:
        if exact:
            raise InvalidArgumentError("an explicit sampler is only supported with exact=False")
        d = sampler.d
        D = sampler.D
    if d is None:
        raise InvalidArgumentError("need the subspace dimension d or a sampler")
    if len(degrees) <= D:
        raise PreconditionViolation(
            f"need at least D + 1 = {D + 1} inputs for I_N = s_N to hold, got {len(degrees)}"
        )
    k, _ = first_nonpositive_index(degrees, D, d)
    rng = np.random.default_rng(seed)
    while k <= kmax:
        if sampler is not None:
            coeffs = [sample_in_ideal(sampler, deg, 1)[0].coeffs for deg in degrees]
            rank = numerical_rank(_macaulay(coeffs, degrees, D, k), FLOAT_RANK_TAU)
        else:
            rank = macaulay_rank(degrees, D, d, k, rng, exact=exact)
        if rank == linear_ideal_dim(k, D, d):
            return k
        k += 1
    raise NoConvergenceError(f"Macaulay matrix did not reach dim s_k for any k <= {kmax}")
