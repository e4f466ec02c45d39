"""Nijenhuis tensor of an invariant almost complex structure, and complex rank.

On a Lie algebra the tensor is assembled from brackets of basis vectors:
N(X, Y) = [JX, JY] - J[JX, Y] - J[X, JY] - [X, Y].  The obstruction to
integrability is equivalently captured by the matrix G of the (0, 2) part
of d on the adapted coframe, G[j, (k, l)] = -omega^j([conj v_k, conj v_l])
over strict pairs k < l; its numerical rank is the pointwise complex rank.
The complexified Nijenhuis tensor on conjugate frame pairs gives the same
matrix up to an exact factor of 4, which n_pair_matrix exposes as a
cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .acs import Acs, AdaptedFrame, adapted_frame
from .algebra import LieAlgebra, strict_pairs
from .errors import ValidationError

RANK_TOL_REL = 1e-8
RANK_TOL_ABS = 1e-12


@dataclass(frozen=True)
class NijTensor:
    """Components comps[i, j, k]: the e_k coefficient of N(e_i, e_j)."""

    comps: np.ndarray

    def apply(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """N(x, y) for coefficient vectors (real or complex)."""
        return np.einsum("ijk,i,j->k", self.comps, x, y)


@dataclass(frozen=True)
class MuBarMatrix:
    """The (0, 2)-obstruction matrix G together with the frame it used.

    mat has shape (m, m(m-1)/2), columns over strict pairs (k, l) in
    lexicographic order: mat[j, p] = -omega^j([conj v_k, conj v_l]).
    """

    mat: np.ndarray
    frame: AdaptedFrame


def nijenhuis_invariant(g: LieAlgebra, j: Acs) -> NijTensor:
    """Nijenhuis tensor of an invariant structure from structure constants.

    Parameters
    ----------
    g : LieAlgebra
        Bracket data c[i, j, k].
    j : Acs
        Structure matrix on the same underlying space.

    Returns
    -------
    NijTensor
        comps[i, j, k] with N(e_i, e_j) = sum_k comps[i, j, k] e_k.
    """
    if g.dim != j.dim:
        raise ValidationError(f"algebra dimension {g.dim} does not match acs {j.dim}")
    c, jm = g.c, j.mat
    b1 = np.einsum("abk,ai,bj->ijk", c, jm, jm, optimize=True)
    t2 = np.einsum("ajl,ai->ijl", c, jm, optimize=True)
    t3 = np.einsum("ibl,bj->ijl", c, jm, optimize=True)
    comps = b1 - np.einsum("kl,ijl->ijk", jm, t2 + t3, optimize=True) - c
    return NijTensor(comps=comps)


def mu_bar_matrix(g: LieAlgebra, j: Acs, frame: AdaptedFrame | None = None) -> MuBarMatrix:
    """G matrix of the (0, 2) part of d in an adapted frame.

    Column p corresponds to the p-th strict pair (k, l); the entry is
    -omega^j([conj v_k, conj v_l]) computed directly from the algebra
    bracket, no Nijenhuis tensor involved.
    """
    if g.dim != j.dim:
        raise ValidationError(f"algebra dimension {g.dim} does not match acs {j.dim}")
    if frame is None:
        frame = adapted_frame(j)
    vb = frame.v.conj()
    w = np.einsum("abc,ka,lb->klc", g.c, vb, vb, optimize=True)
    full = -np.einsum("jc,klc->jkl", frame.omega, w, optimize=True)
    rows, cols = np.triu_indices(frame.m, 1)
    return MuBarMatrix(mat=full[:, rows, cols], frame=frame)


def n_pair_matrix(n: NijTensor, frame: AdaptedFrame) -> np.ndarray:
    """Matrix omega^j(N_C(conj v_k, conj v_l)) over strict pairs.

    Equals 4 times the mu_bar matrix of the same structure; exposed
    separately so the two computation routes can be compared.
    """
    vb = frame.v.conj()
    nc = np.einsum("abc,ka,lb->klc", n.comps, vb, vb, optimize=True)
    full = np.einsum("jc,klc->jkl", frame.omega, nc, optimize=True)
    rows, cols = np.triu_indices(frame.m, 1)
    return full[:, rows, cols]


def mu_bar_from_nijenhuis(n: NijTensor, frame: AdaptedFrame) -> np.ndarray:
    """Point-level G recovered from Nijenhuis components: n_pair_matrix / 4.

    This is the route used for coordinate patches, where no invariant
    bracket is available.
    """
    return 0.25 * n_pair_matrix(n, frame)


def rank_of_matrix(mat: np.ndarray, tol_rank_rel: float = RANK_TOL_REL,
                   tol_rank_abs: float = RANK_TOL_ABS) -> tuple[int, np.ndarray]:
    """Numerical rank and singular values under the combined threshold.

    A singular value counts when it exceeds max(tol_rank_rel * sigma_1,
    tol_rank_abs); the zero matrix has rank 0.
    """
    if mat.size == 0:
        return 0, np.zeros(0)
    sv = np.linalg.svd(mat, compute_uv=False)
    if sv[0] == 0.0:
        return 0, sv
    threshold = max(tol_rank_rel * sv[0], tol_rank_abs)
    return int(np.count_nonzero(sv > threshold)), sv


def complex_rank(g: LieAlgebra, j: Acs, tol_rank_rel: float = RANK_TOL_REL,
                 tol_rank_abs: float = RANK_TOL_ABS) -> int:
    """Pointwise complex rank of an invariant structure: rank of G.

    Always between 0 and m; 0 exactly when the structure is integrable
    to within the rank thresholds.
    """
    rank, _ = rank_of_matrix(mu_bar_matrix(g, j).mat, tol_rank_rel, tol_rank_abs)
    return rank
