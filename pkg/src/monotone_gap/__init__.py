"""Exact and numerical tools for gap functions between matrix monotone orders.

g_n is matrix monotone of order n on a small interval [0, alpha_n) but not
of order n + 1 on any subinterval.  The package certifies this exactly
(Dobsch matrices, Sturm sequences, rational linear algebra), searches for
explicit counterexamples (Loewner matrices, random matrix pairs) and moves
the construction to other intervals and to matrix convexity.
"""

from .dobsch import alpha_dobsch, gap_certificate, trailing_block_det
from .errors import (
    ConversionFailed,
    DomainError,
    InternalError,
    InvalidArgument,
    MonotoneGapError,
    ParseError,
    SamplingExhausted,
    UnsupportedIntervalPair,
)
from .exactpoly import Poly, gn_poly, poly_nonneg_on
from .expr import Affine, BendatSherman, Compose, FunctionExpr, Mobius, Mul
from .interval import Interval, parse_interval
from .loewner import Exhausted, LoewnerWitness, alpha_loewner, find_violation, loewner_matrix, order_test
from .numfalsify import PairWitness, falsify, matrix_apply, sym_eig, validate_pair
from .psdcert import SymMatrix, det_exact, is_pd, is_psd
from .transport import bendat_sherman, convex_gap_function, gap_function, interval_bijection

__version__ = "0.1.0"

__all__ = [
    "Affine",
    "BendatSherman",
    "Compose",
    "ConversionFailed",
    "DomainError",
    "Exhausted",
    "FunctionExpr",
    "InternalError",
    "Interval",
    "InvalidArgument",
    "LoewnerWitness",
    "Mobius",
    "MonotoneGapError",
    "Mul",
    "PairWitness",
    "ParseError",
    "Poly",
    "SamplingExhausted",
    "SymMatrix",
    "UnsupportedIntervalPair",
    "alpha_dobsch",
    "alpha_loewner",
    "bendat_sherman",
    "convex_gap_function",
    "det_exact",
    "falsify",
    "find_violation",
    "gap_certificate",
    "gap_function",
    "gn_poly",
    "interval_bijection",
    "is_pd",
    "is_psd",
    "loewner_matrix",
    "matrix_apply",
    "order_test",
    "parse_interval",
    "poly_nonneg_on",
    "sym_eig",
    "trailing_block_det",
    "validate_pair",
]
