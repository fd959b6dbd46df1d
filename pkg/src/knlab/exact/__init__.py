"""Exact arithmetic kernel: rationals, polynomials, rational functions,
Laurent expansions and residues on the Riemann sphere."""
from .laurent import (
    LaurentSeries,
    derivative,
    expand_at,
    order_at,
    residue_form,
    residue_of_products,
    residue_theorem_defect,
)
from .parsing import parse_rational_function
from .polynomial import Polynomial
from .rational import INF, ONE_FUNCTION, Z, ZERO_FUNCTION, RationalFunction, point_str, sphere_point
from .scalar import ONE, ZERO, mpq, scalar_str, to_scalar

__all__ = [
    "INF",
    "LaurentSeries",
    "ONE",
    "ONE_FUNCTION",
    "Polynomial",
    "RationalFunction",
    "Z",
    "ZERO",
    "ZERO_FUNCTION",
    "derivative",
    "expand_at",
    "mpq",
    "order_at",
    "parse_rational_function",
    "point_str",
    "residue_form",
    "residue_of_products",
    "residue_theorem_defect",
    "scalar_str",
    "sphere_point",
    "to_scalar",
]
