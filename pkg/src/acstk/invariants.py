"""First-order invariants of an invariant almost complex structure.

All computations happen at the algebra level: forms are left-invariant,
d is dual to the bracket, and d^c = J^{-1} d J with J acting on a 1-form
by alpha -> alpha o J^{-1} and on a 2-form by the inverse action on both
arguments.  Two independent routes to the same number are computed every
time: method A doubles the complex dimension of ker d intersected with
the (1, 0) forms, method B takes the joint kernel of (d, d^c) on all
complex 1-forms.  They must agree exactly; a mismatch is reported as an
error because it can only come from a convention slip, not from data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .acs import Acs, adapted_frame
from .algebra import LieAlgebra, ce_d_matrix, strict_pairs
from .errors import NumericalError, ValidationError
from .nijenhuis import RANK_TOL_ABS, RANK_TOL_REL, mu_bar_matrix, rank_of_matrix


@dataclass(frozen=True)
class InvariantReport:
    """h^1 of the d + d^c complex, first Betti number, and complex rank.

    method_a and method_b are the two routes to h1_ddc and always agree;
    h1_ddc is even and bounded by b1.  scope marks that these numbers are
    computed on invariant forms only, not on a manifold.
    """

    dim: int
    h1_ddc: int
    b1: int
    method_a: int
    method_b: int
    rank: int
    scope: str = "invariant-level"


def b1(g: LieAlgebra, tol_rank_rel: float = RANK_TOL_REL,
       tol_rank_abs: float = RANK_TOL_ABS) -> int:
    """dim ker d on invariant 1-forms (algebra-level first Betti number)."""
    rank, _ = rank_of_matrix(ce_d_matrix(g), tol_rank_rel, tol_rank_abs)
    return g.dim - rank


def _dc_matrix(g: LieAlgebra, j: Acs) -> np.ndarray:
    """Matrix of d^c = J^{-1} d J on 1-form coefficient vectors.

    The 1-form action (J alpha)(X) = alpha(J^{-1} X) is the matrix
    (-J)^T on coefficients; the 2-form action evaluates on (J e_i, J e_j)
    pairwise.  Both are real, so the operator is assembled over R and
    applied to complex coefficients by linearity.
    """
    jm = j.mat
    pairs = strict_pairs(g.dim)
    r1 = -jm.T
    r2 = np.array(
        [[jm[a, i] * jm[b, j_] - jm[b, i] * jm[a, j_] for (a, b) in pairs]
         for (i, j_) in pairs]
    )
    return r2 @ ce_d_matrix(g) @ r1


def h1_ddc(g: LieAlgebra, j: Acs, tol_rank_rel: float = RANK_TOL_REL,
           tol_rank_abs: float = RANK_TOL_ABS) -> InvariantReport:
    """Both computations of h^1_{d+d^c}, with b1 and the complex rank.

    Parameters
    ----------
    g : LieAlgebra
    j : Acs
        Invariant structure on the same space.

    Returns
    -------
    InvariantReport

    Raises
    ------
    NumericalError
        If the two methods disagree, h1 comes out odd, or h1 exceeds b1;
        any of these signals a convention bug or a rank threshold sitting
        on top of a singular value, never valid output.
    """
    if g.dim != j.dim:
        raise ValidationError(f"algebra dimension {g.dim} does not match acs {j.dim}")
    m = j.m
    d_mat = ce_d_matrix(g)

    frame = adapted_frame(j)
    d_on_10 = d_mat @ frame.omega.T
    rank_a, _ = rank_of_matrix(d_on_10, tol_rank_rel, tol_rank_abs)
    method_a = 2 * (m - rank_a)

    joint = np.concatenate([d_mat, _dc_matrix(g, j)], axis=0)
    rank_b, _ = rank_of_matrix(joint, tol_rank_rel, tol_rank_abs)
    method_b = g.dim - rank_b

    betti = b1(g, tol_rank_rel, tol_rank_abs)
    if method_a != method_b:
        raise NumericalError(
            f"h1 methods disagree (A = {method_a}, B = {method_b}); "
            "this signals a convention bug or a borderline rank threshold"
        )
    if method_a % 2 != 0:
        raise NumericalError(f"h1 = {method_a} is odd; rank threshold is unreliable here")
    if method_a > betti:
        raise NumericalError(f"h1 = {method_a} exceeds b1 = {betti}; rank threshold unreliable")
    rank, _ = rank_of_matrix(mu_bar_matrix(g, j, frame).mat, tol_rank_rel, tol_rank_abs)
    return InvariantReport(
        dim=g.dim, h1_ddc=method_a, b1=betti, method_a=method_a,
        method_b=method_b, rank=rank,
    )
