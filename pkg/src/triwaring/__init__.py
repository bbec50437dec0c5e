"""Exact Waring decompositions for polynomial images on upper triangular matrices."""

from .cpoly import CPoly, SymId, cpoly_arith, cpoly_eval
from .ncpoly import NcPoly, format_ncpoly, ncpoly_arith, parse_ncpoly
from .pointsearch import AffineForm, constrained_linear_solve, nonvanishing_point, subset_tuple_point
from .structure import OrderReport, coefficient_poly, commutative_image, compute_order
from .triangular import SymUTMatrix, UTMatrix, band_check, entry_polynomial, mat_eval, sym_eval
from .witness import (
    WitnessBundle,
    decompose_sum,
    find_single_witness,
    image_witness,
    verify_bundle,
    witness_corner_case,
)

__all__ = [
    "AffineForm",
    "CPoly",
    "NcPoly",
    "OrderReport",
    "SymId",
    "SymUTMatrix",
    "UTMatrix",
    "WitnessBundle",
    "band_check",
    "coefficient_poly",
    "commutative_image",
    "compute_order",
    "constrained_linear_solve",
    "cpoly_arith",
    "cpoly_eval",
    "decompose_sum",
    "entry_polynomial",
    "find_single_witness",
    "format_ncpoly",
    "image_witness",
    "mat_eval",
    "ncpoly_arith",
    "nonvanishing_point",
    "parse_ncpoly",
    "subset_tuple_point",
    "sym_eval",
    "verify_bundle",
    "witness_corner_case",
]
