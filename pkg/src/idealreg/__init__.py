"""Ideal regression: linear generators of a subspace from polynomials vanishing on it."""
from .approxla import RankSpec, approx_left_null, approx_row_span, numerical_rank
from .cumulants import CumulantTensor, EpochData, apply_matrix, difference_polynomials, estimate_cumulants
from .errors import (
    DegenerateInputError,
    IdealRegError,
    IdentifiabilityError,
    InsufficientDataError,
    InsufficientRowsError,
    InvalidArgumentError,
    NoConvergenceError,
    PreconditionViolation,
)
from .genericity import GenericSampler, check_froberg, compute_N_empirical, froberg_table, sample_in_ideal
from .monomials import MonomialBasis, MultiIndex, enumerate_basis, simplex_number
from .polyspace import CoeffMatrix, HomoPoly, build_macaulay
from .saturation import SaturationResult, approx_saturation, munchhausen, reduce_degree, reduce_degree_hom
from .series import DegreeBound, degree_bound, degree_bound_report, linear_ideal_dim
from .ssa import (
    SimulationConfig,
    SubspaceEstimate,
    estimate_projection,
    generate_synthetic,
    run_sweep,
    subspace_angle,
    summarize,
)

__version__ = "0.1.0"
