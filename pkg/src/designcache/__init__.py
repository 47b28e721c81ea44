"""Coded caching schemes built from combinatorial designs.

Construct designs over finite fields, turn them into caching matrices with
identity-submatrix covers, verify covers exactly, and run byte-level XOR
delivery.
"""

from .caching import (
    SCHEMES,
    CachingMatrix,
    Cover,
    CoverReport,
    IdentitySubmatrix,
    bibd_caching_matrix,
    bibd_cover,
    build_scheme,
    greedy_cover,
    symm_caching_matrix,
    symm_cover,
    t1_caching_matrix,
    t1_cover,
    t2_caching_matrix,
    t2_cover,
    td_caching_matrix,
    td_cover,
    verify_cover,
)
from .delivery import SimulationReport, SplitMix64, make_library, place, run_delivery, simulate
from .designs import (
    Design,
    TransversalDesign,
    VerificationReport,
    complement_design,
    construct_affine_plane_bibd,
    construct_inversive_plane,
    construct_projective_plane_bibd,
    construct_transversal_design,
    design_params,
    trivial_t_design,
    verify_t_design,
    verify_transversal_design,
)
from .errors import DesignCacheError
from .fixtures import FIXTURE_NAMES, builtin_design
from .gf import FiniteField, gf
from .metrics import SchemeMetrics, closed_form, scheme_metrics, scheme_parameters
from .table import table1_rows

__all__ = [
    "bibd_caching_matrix",
    "bibd_cover",
    "build_scheme",
    "builtin_design",
    "CachingMatrix",
    "closed_form",
    "complement_design",
    "construct_affine_plane_bibd",
    "construct_inversive_plane",
    "construct_projective_plane_bibd",
    "construct_transversal_design",
    "Cover",
    "CoverReport",
    "Design",
    "design_params",
    "DesignCacheError",
    "FiniteField",
    "FIXTURE_NAMES",
    "gf",
    "greedy_cover",
    "IdentitySubmatrix",
    "make_library",
    "place",
    "run_delivery",
    "scheme_metrics",
    "scheme_parameters",
    "SchemeMetrics",
    "SCHEMES",
    "simulate",
    "SimulationReport",
    "SplitMix64",
    "symm_caching_matrix",
    "symm_cover",
    "t1_caching_matrix",
    "t1_cover",
    "t2_caching_matrix",
    "t2_cover",
    "table1_rows",
    "td_caching_matrix",
    "td_cover",
    "TransversalDesign",
    "trivial_t_design",
    "VerificationReport",
    "verify_cover",
    "verify_t_design",
    "verify_transversal_design",
]
