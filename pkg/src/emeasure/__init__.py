"""Hermite-Pade systems for the exponential function and explicit,
certified transcendence-measure bounds for e."""

from .balls import BallReal, ball, workprec
from .certify import (
    LinearForm,
    check_Q_bound,
    check_R_bound,
    empirical_min_search,
    eval_linear_form,
    exp_enclosure,
    verify_measure,
)
from .errors import IndeterminateError, PreconditionError, ResourceLimitError, TheoremViolation
from .factor import extract_common_factor, kappa_limit, kappa_m
from .hermite_pade import ApproxSystem, IntPolynomial, MultiIndex, build_system, determinant_shape
from .measure import (
    MeasureParams,
    corollary_bound,
    fm_table,
    generic_lower_bound,
    omega_upper,
    params_for_e,
    power_measure,
    sparse_bound,
    z_inverse,
)
from .numtheory import primes_upto, vp, vp_factorial

__version__ = "0.1.0"

__all__ = [
    "ApproxSystem",
    "BallReal",
    "IndeterminateError",
    "IntPolynomial",
    "LinearForm",
    "MeasureParams",
    "MultiIndex",
    "PreconditionError",
    "ResourceLimitError",
    "TheoremViolation",
    "ball",
    "build_system",
    "check_Q_bound",
    "check_R_bound",
    "corollary_bound",
    "determinant_shape",
    "empirical_min_search",
    "eval_linear_form",
    "exp_enclosure",
    "extract_common_factor",
    "fm_table",
    "generic_lower_bound",
    "kappa_limit",
    "kappa_m",
    "omega_upper",
    "params_for_e",
    "power_measure",
    "primes_upto",
    "sparse_bound",
    "verify_measure",
    "vp",
    "vp_factorial",
    "workprec",
    "z_inverse",
]
