"""Exact bookkeeping and certification of the stable splitting of real abelian varieties."""

from .assemble import (
    CoefficientRing,
    SplittingExpression,
    VarietyInput,
    assemble_splitting,
    check_coefficients,
    integral_top_cell,
    render,
    verify_all,
)
from .correspondence import CorrAlgebra, dm_projectors, verify_dm
from .motives import kunnemann_decompose
from .real_locus import component_count, cyclotomic_cm_data, quadratic_cm_data
from .topology import certify_splitting, real_points_splitting, torus_splitting

__version__ = "0.1.0"
