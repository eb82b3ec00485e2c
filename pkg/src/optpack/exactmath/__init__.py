"""Exact arithmetic: rationals, polynomials, algebraic numbers, number
fields, rational intervals, and exact linear algebra."""

from .interval import RationalInterval, interval_eval
from .matrix import (
    charpoly_coeffs,
    fe_matrix,
    identity,
    inverse,
    ldlt,
    matmul,
    psd_rank,
    rank,
    solve,
    transpose,
)
from .numberfield import FieldElement, NumberField
from .poly import Polynomial
from .qq import ceil_to_decimals, qq, qq_to_str, round_to_decimals, sign
from .roots import (
    AlgebraicNumber,
    factor_rational,
    isolate_real_roots,
    poly_eval,
    sturm_chain,
    sturm_count,
)

__all__ = [
    "AlgebraicNumber",
    "FieldElement",
    "NumberField",
    "Polynomial",
    "RationalInterval",
    "ceil_to_decimals",
    "charpoly_coeffs",
    "factor_rational",
    "fe_matrix",
    "identity",
    "interval_eval",
    "inverse",
    "isolate_real_roots",
    "ldlt",
    "matmul",
    "poly_eval",
    "psd_rank",
    "qq",
    "qq_to_str",
    "rank",
    "round_to_decimals",
    "sign",
    "solve",
    "sturm_chain",
    "sturm_count",
    "transpose",
]
