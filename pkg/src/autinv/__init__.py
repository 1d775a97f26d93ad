"""Decide whether a polynomial map over Q is an automorphism, and invert it."""

from .inverter import (
    BoundExceeded,
    Invertible,
    NotInvertibleComposition,
    NotInvertibleJacobian,
    SolveConfig,
    Verdict,
    Witness,
    candidate_inverse,
    decide_invertible,
    degree_bound,
    derivative_recursion_m2,
    solve_series,
    verify_mutual_inverse,
)
from .linalg import PolyMatrix, adjugate_inverse, constant_unit, determinant, jacobian, mat_vec_apply
from .poly import (
    NEG_INF,
    PolyMap,
    Polynomial,
    Rational,
    compose,
    evaluate,
    map_degree,
    partial_derivative,
    poly_add,
    poly_mul,
    rational,
    total_degree,
)
from .series import SeriesVec, TruncSeries, compose_poly_series, eval_at_one, series_add, series_mul

__version__ = "0.1.0"
