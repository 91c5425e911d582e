"""Exact lattice and polytope computations for K3 mirror pairs built from
invertible polynomials in three variables."""

from .batyrev import hodge_numbers, rank_pic_tor, rank_report, rho, toric_correction
from .invertible import (ExponentMatrix, enumerate_deformations, is_invertible,
                         parse_polynomial, transpose, weight_system)
from .lattice import (DiscriminantForm, IntegralLattice, direct_sum, find_hyperbolic_plane,
                      is_isometric_small, mirror_orthogonality_check, named)
from .picard import component_gram, picard_model, toric_gram
from .polytope import (LatticePolytope, NotReflexiveError, contains, is_isomorphic,
                       lattice_from_case, newton_polytope, normal_form, parse_palp, polar_dual)
from .runner import emit_report, find_extensions, run_case, scan_database

__version__ = "0.1.0"

__all__ = [
    "DiscriminantForm", "ExponentMatrix", "IntegralLattice", "LatticePolytope",
    "NotReflexiveError", "component_gram", "contains", "direct_sum", "emit_report",
    "enumerate_deformations", "find_extensions", "find_hyperbolic_plane", "hodge_numbers",
    "is_invertible", "is_isometric_small", "is_isomorphic", "lattice_from_case",
    "mirror_orthogonality_check", "named", "newton_polytope", "normal_form", "parse_palp",
    "parse_polynomial", "picard_model", "polar_dual", "rank_pic_tor", "rank_report", "rho",
    "run_case", "scan_database", "toric_correction", "toric_gram", "transpose",
    "weight_system",
]
