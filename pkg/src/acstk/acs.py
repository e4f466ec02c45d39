"""Almost complex structures on a real vector space, and their adapted frames.

An Acs is a real matrix J with J^2 = -I (checked to 1e-10).  An adapted
frame is a real basis u_1..u_m whose complexification v_j = u_j - i J u_j
spans the +i eigenspace of J; its dual coframe omega^j picks out (1, 0)
components.  Endomorphisms anti-commuting with J parametrize nearby
structures; psi_from_L converts such an L into the associated complex
operator L P^{0,1}, which vanishes on the +i eigenspace and maps the -i
eigenspace into it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ValidationError

ACS_TOL = 1e-10
ANTICOMM_TOL = 1e-10
FRAME_INDEP_TOL = 1e-8
RANDOM_COND_MAX = 1e6
RANDOM_RETRIES = 100


@dataclass(frozen=True)
class Acs:
    """An almost complex structure: real square matrix with J^2 = -I."""

    mat: np.ndarray

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @property
    def m(self) -> int:
        return self.mat.shape[0] // 2


@dataclass(frozen=True)
class AntiCommEndo:
    """An endomorphism L with L J + J L = 0 for a fixed base structure J."""

    mat: np.ndarray
    base: Acs


@dataclass(frozen=True)
class AdaptedFrame:
    """Adapted frame data for an Acs.

    Rows of u are the real legs u_1..u_m; rows of v are v_j = u_j - i J u_j
    (+i eigenvectors of J); rows of omega are the dual (1, 0) coframe,
    normalized so omega^j(v_k) = delta_jk and omega^j(conj v_k) = 0.
    """

    u: np.ndarray
    v: np.ndarray
    omega: np.ndarray

    @property
    def m(self) -> int:
        return self.u.shape[0]


def new_acs(matrix: np.ndarray) -> Acs:
    """Validate J^2 = -I (to 1e-10, max norm) and wrap the matrix."""
    mat = np.asarray(matrix, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValidationError(f"matrix must be square, got shape {mat.shape}")
    n = mat.shape[0]
    if n < 2 or n % 2 != 0:
        raise ValidationError(f"dimension must be even and >= 2, got {n}")
    defect = np.abs(mat @ mat + np.eye(n)).max()
    if defect > ACS_TOL:
        raise ValidationError(f"J^2 = -I fails: max defect {defect:.6e} exceeds {ACS_TOL:.1e}")
    return Acs(mat=mat)


def j_std(dim: int) -> Acs:
    """Block-diagonal standard structure: J e_{2a-1} = e_{2a}."""
    if dim < 2 or dim % 2 != 0:
        raise ValidationError(f"dimension must be even and >= 2, got {dim}")
    mat = np.zeros((dim, dim))
    for a in range(0, dim, 2):
        mat[a, a + 1] = -1.0
        mat[a + 1, a] = 1.0
    return Acs(mat=mat)


def random_acs(dim: int, seed, flip_orientation: bool = False) -> Acs:
    """Conjugate of j_std by a random matrix: J = A J_std A^{-1}.

    A has independent uniform [-1, 1] entries and is redrawn (up to 100
    times) until its condition number is at most 1e6 and the conjugated
    matrix passes the J^2 = -I gate.  The orientation induced by the
    result equals the standard one exactly when det A > 0; by default A
    is arranged so, and flip_orientation asks for det A < 0 instead
    (swapping two columns when the draw lands on the wrong side).
    """
    base = j_std(dim).mat
    rng = np.random.default_rng(seed)
    for _ in range(RANDOM_RETRIES):
        a = rng.uniform(-1.0, 1.0, size=(dim, dim))
        if (np.linalg.det(a) < 0.0) != flip_orientation:
            a[:, [0, 1]] = a[:, [1, 0]]
        sv = np.linalg.svd(a, compute_uv=False)
        if sv[-1] == 0.0 or sv[0] / sv[-1] > RANDOM_COND_MAX:
            continue
        mat = a @ base @ np.linalg.inv(a)
        if np.abs(mat @ mat + np.eye(dim)).max() <= ACS_TOL:
            return Acs(mat=mat)
    raise NumericalError(
        f"no well-conditioned conjugating matrix found in {RANDOM_RETRIES} draws"
    )


def load_acs(doc: dict) -> Acs:
    """Build an Acs from {"dim": n, "matrix": [[...], ...]} (row-major)."""
    if not isinstance(doc, dict):
        raise ValidationError("acs document must be a JSON object")
    try:
        dim = int(doc["dim"])
        mat = np.asarray(doc["matrix"], dtype=float)
    except (KeyError, TypeError, ValueError):
        raise ValidationError("acs document needs 'dim' and a numeric 'matrix'") from None
    if mat.shape != (dim, dim):
        raise ValidationError(f"matrix shape {mat.shape} does not match dim {dim}")
    return new_acs(mat)


def serialize_acs(j: Acs) -> dict:
    return {"dim": j.dim, "matrix": j.mat.tolist()}


def anti_commuting_part(j: Acs, a: np.ndarray) -> np.ndarray:
    """Projection (a + J a J) / 2 onto endomorphisms anti-commuting with J.

    Exact at the algebra level: the complementary half (a - J a J) / 2
    commutes with J, and applying the projection twice is the identity on
    its image.
    """
    jm = j.mat
    return 0.5 * (a + jm @ a @ jm)


def new_anti_comm(j: Acs, matrix: np.ndarray) -> AntiCommEndo:
    """Validate L J + J L = 0 (to 1e-10, max norm) against the base J."""
    mat = np.asarray(matrix, dtype=float)
    if mat.shape != j.mat.shape:
        raise ValidationError(f"shape {mat.shape} does not match base dimension {j.dim}")
    defect = np.abs(mat @ j.mat + j.mat @ mat).max()
    if defect > ANTICOMM_TOL:
        raise ValidationError(
            f"L does not anti-commute with J: max defect {defect:.6e} exceeds {ANTICOMM_TOL:.1e}"
        )
    return AntiCommEndo(mat=mat, base=j)


def adapted_frame(j, indep_tol: float = FRAME_INDEP_TOL) -> AdaptedFrame:
    """Greedy adapted frame for an Acs (or a raw J matrix).

    Scans the standard basis of R^{2m}; a candidate e_idx is accepted when
    appending (e_idx, J e_idx) keeps the collected column set independent,
    measured by its smallest singular value staying above indep_tol.  The
    coframe comes from inverting the complex basis [v_1..v_m, conj(v)..],
    so omega^j(v_k) = delta_jk holds to machine precision.
    """
    jm = j.mat if isinstance(j, Acs) else np.asarray(j, dtype=float)
    n = jm.shape[0]
    m = n // 2
    cols: list[np.ndarray] = []
    eye = np.eye(n)
    for idx in range(n):
        if len(cols) == n:
            break
        candidate = cols + [eye[idx], jm @ eye[idx]]
        sv = np.linalg.svd(np.stack(candidate, axis=1), compute_uv=False)
        if sv[-1] > indep_tol:
            cols = candidate
    if len(cols) != n:
        raise NumericalError(
            f"adapted frame incomplete: found {len(cols) // 2} of {m} independent legs"
        )
    u = np.stack(cols[0::2])
    v = u - 1j * (u @ jm.T)
    basis = np.concatenate([v, v.conj()], axis=0).T
    try:
        inv = np.linalg.inv(basis)
    except np.linalg.LinAlgError:
        raise NumericalError("adapted frame basis is numerically singular") from None
    return AdaptedFrame(u=u, v=v, omega=inv[:m, :])


def psi_from_L(l: AntiCommEndo) -> np.ndarray:
    """Complex operator (L - i J L) / 2, i.e. L restricted to the -i eigenspace.

    Annihilates every v in the +i eigenspace of the base J and sends
    conj(v) to a +i eigenvector; sums of psi and its conjugate recover L
    on complexified vectors.
    """
    jm = l.base.mat
    return 0.5 * (l.mat - 1j * jm @ l.mat)


def c0_distance(j0: Acs, j1: Acs) -> float:
    """Spectral-norm distance ||J0 - J1||_2."""
    if j0.dim != j1.dim:
        raise ValidationError(f"dimension mismatch: {j0.dim} vs {j1.dim}")
    return float(np.linalg.norm(j0.mat - j1.mat, 2))
