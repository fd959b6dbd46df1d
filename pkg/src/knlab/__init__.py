"""Exact genus-zero Krichever-Novikov algebras, their cocycles and window cohomology."""
from .algebras import OperatorAlgebra, algebra_A, algebra_D1, algebra_L, grading_analysis
from .basis import (
    MarkedSurface,
    Section,
    basis_element,
    basis_function,
    classical_surface,
    expand,
    kn_pairing,
    make_surface,
    verify_duality,
)
from .cocycles import (
    SEPARATING,
    Affine,
    Cycle,
    Mixing,
    VectorField,
    check_cocycle_identity,
    cocycle_D1,
    cocycle_lambda,
    function_cocycle,
    mixing_cocycle,
    vector_cocycle,
)
from .current import current_algebra, d1g_algebra, check_cocycle_conditions
from .lab import coboundary_feasible, family_rank, kahler_rank
from .lie import build_abelian, build_gl, build_named, build_sl, direct_sum

__version__ = "0.1.0"
