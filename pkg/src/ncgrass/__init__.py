"""Exact computations for noncommutative Grassmannians: quadratic Z-algebras,
Koszul duality, helices of exceptional objects, k-points and local rings."""

__version__ = "0.1.0"

from .exactla import QQ, BasedSpace, FieldSpec, LinMap, StructuralError, Subspace  # noqa: E402
from .ngrass import NgrSpec, build_b_algebra, build_ngr, compare_with_geometry  # noqa: E402
from .zalg import (Certificate, QuadraticZAlgebra, frobenius_check, hilbert_table,  # noqa: E402
                   koszulity_check, make_quadratic, quadratic_dual)

__all__ = [
    "QQ", "BasedSpace", "Certificate", "FieldSpec", "LinMap", "NgrSpec", "QuadraticZAlgebra",
    "StructuralError", "Subspace", "build_b_algebra", "build_ngr", "compare_with_geometry",
    "frobenius_check", "hilbert_table", "koszulity_check", "make_quadratic", "quadratic_dual",
]
