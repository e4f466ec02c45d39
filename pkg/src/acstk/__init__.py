"""Numerical toolkit for almost complex structures.

Core objects: Lie algebras by structure constants, almost complex
structures and their adapted frames, Nijenhuis tensors and pointwise
complex rank, polynomial deformation curves with rank profiles, Bernstein
approximation of sampled curves, expression-valued coordinate patches,
and the first-order invariants h1 of d + d^c and b1.
"""

from .acs import (
    Acs,
    AdaptedFrame,
    AntiCommEndo,
    adapted_frame,
    anti_commuting_part,
    c0_distance,
    j_std,
    load_acs,
    new_acs,
    new_anti_comm,
    psi_from_L,
    random_acs,
    serialize_acs,
)
from .algebra import (
    InvariantForm,
    LieAlgebra,
    catalog,
    catalog_names,
    ce_d,
    load_algebra,
    new_algebra,
    serialize_algebra,
)
from .bernstein import BernsteinReport, BernsteinResult, bernstein_curve
from .deform import (
    CurveL,
    PerturbResult,
    RankProfile,
    RefineResult,
    curve_eval,
    deform,
    eval_l,
    load_curve,
    make_curve,
    perturb_to_rank,
    rank_profile,
    recover_L,
    refine_exceptional,
    serialize_curve,
)
from .errors import AcstkError, NumericalError, ValidationError
from .expr import Expr, diff_expr, eval_expr, format_expr, parse_expr
from .invariants import InvariantReport, b1, h1_ddc
from .nijenhuis import (
    MuBarMatrix,
    NijTensor,
    complex_rank,
    mu_bar_from_nijenhuis,
    mu_bar_matrix,
    n_pair_matrix,
    nijenhuis_invariant,
    rank_of_matrix,
)
from .patch import (
    GridRankResult,
    PatchAcs,
    VectorField,
    j_at,
    load_patch,
    min_rank_on_grid,
    new_patch,
    nijenhuis_fields,
    nijenhuis_patch,
    point_rank,
    serialize_patch,
)

__version__ = "0.1.0"

__all__ = [
    "Acs", "AdaptedFrame", "AntiCommEndo", "AcstkError", "BernsteinReport",
    "BernsteinResult", "CurveL", "Expr", "GridRankResult", "InvariantForm",
    "InvariantReport", "LieAlgebra", "MuBarMatrix", "NijTensor", "NumericalError",
    "PatchAcs", "PerturbResult", "RankProfile", "RefineResult", "ValidationError",
    "VectorField", "adapted_frame", "anti_commuting_part", "b1", "bernstein_curve",
    "c0_distance", "catalog", "catalog_names", "ce_d", "complex_rank", "curve_eval",
    "deform", "diff_expr", "eval_expr", "eval_l", "format_expr", "h1_ddc", "j_at",
    "j_std", "load_acs", "load_algebra", "load_curve", "load_patch", "make_curve",
    "min_rank_on_grid", "mu_bar_from_nijenhuis", "mu_bar_matrix", "n_pair_matrix",
    "new_acs", "new_algebra", "new_anti_comm", "new_patch", "nijenhuis_fields",
    "nijenhuis_invariant", "nijenhuis_patch", "parse_expr", "perturb_to_rank",
    "point_rank", "psi_from_L", "random_acs", "rank_of_matrix", "rank_profile",
    "recover_L", "refine_exceptional", "serialize_acs", "serialize_algebra",
    "serialize_curve", "serialize_patch",
]
