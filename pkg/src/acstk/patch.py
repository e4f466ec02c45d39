"""Almost complex structures on a coordinate box, entries given by expressions.

A PatchAcs stores J^k_i(x) as expressions in x1..xn over a product-of-
intervals box.  The Nijenhuis tensor comes from the coordinate formula

    N^k_ij = J^l_i d_l J^k_j - J^l_j d_l J^k_i + J^k_l d_j J^l_i - J^k_l d_i J^l_j

with all partials taken symbolically, so the only floating-point work is
evaluation.  Pointwise complex rank reuses the frame machinery and the
exact factor-4 relation between the Nijenhuis pair matrix and G; a grid
minimizer reports the smallest rank over a per-axis uniform grid with a
deterministic lexicographic tie-break.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

from .acs import adapted_frame
from .errors import ValidationError
from .expr import Expr, add, diff_expr, eval_expr, mul, parse_expr
from .nijenhuis import (
    RANK_TOL_ABS,
    RANK_TOL_REL,
    NijTensor,
    mu_bar_from_nijenhuis,
    rank_of_matrix,
)
from .parallel import map_indexed

PATCH_ACS_TOL = 1e-8
VALIDATE_PER_AXIS = 3


@dataclass(frozen=True)
class PatchAcs:
    """Expression-valued structure matrix on a box.

    entries[k][i] is J^k_i; box[a] = (lo, hi) bounds coordinate x<a+1>.
    J(x)^2 = -I is required to 1e-8 at every point it is evaluated on.
    """

    dim: int
    entries: tuple[tuple[Expr, ...], ...]
    box: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class GridRankResult:
    """Minimum pointwise rank over a grid and where it was attained."""

    k_min: int
    argmin: tuple[float, ...]
    argmin_index: tuple[int, ...]
    per_axis: int
    points: int


def new_patch(dim: int, entries, box) -> PatchAcs:
    """Validate shapes and expressions, then J^2 = -I on a coarse grid.

    entries may hold strings (parsed with variables capped at dim) or
    ready Expr nodes.  The load-time structure check samples 3 points per
    axis; every later evaluation re-checks its own point.
    """
    if dim < 2 or dim % 2 != 0:
        raise ValidationError(f"dimension must be even and >= 2, got {dim}")
    if len(entries) != dim or any(len(row) != dim for row in entries):
        raise ValidationError(f"entries must form a {dim}x{dim} matrix of expressions")
    parsed = []
    for k, row in enumerate(entries):
        out_row = []
        for i, cell in enumerate(row):
            if isinstance(cell, Expr):
                out_row.append(cell)
                continue
            try:
                out_row.append(parse_expr(cell, max_var=dim))
            except ValidationError as exc:
                raise ValidationError(f"entry ({k + 1}, {i + 1}): {exc}") from None
        parsed.append(tuple(out_row))
    if len(box) != dim:
        raise ValidationError(f"box must have {dim} intervals, got {len(box)}")
    clean_box = []
    for a, pair in enumerate(box):
        lo, hi = float(pair[0]), float(pair[1])
        if not (np.isfinite(lo) and np.isfinite(hi)) or lo >= hi:
            raise ValidationError(f"box interval {a + 1} must satisfy lo < hi, got {pair}")
        clean_box.append((lo, hi))
    patch = PatchAcs(dim=dim, entries=tuple(parsed), box=tuple(clean_box))
    for x in _grid_points(patch.box, VALIDATE_PER_AXIS):
        j_at(patch, x)
    return patch


def load_patch(doc: dict) -> PatchAcs:
    """Build a PatchAcs from {"dim", "entries" (strings), "box"}."""
    if not isinstance(doc, dict):
        raise ValidationError("patch document must be a JSON object")
    try:
        dim = int(doc["dim"])
        entries = doc["entries"]
        box = doc["box"]
    except (KeyError, TypeError, ValueError):
        raise ValidationError("patch document needs 'dim', 'entries', and 'box'") from None
    return new_patch(dim, entries, box)


def serialize_patch(patch: PatchAcs) -> dict:
    from .expr import format_expr

    return {
        "dim": patch.dim,
        "entries": [[format_expr(e) for e in row] for row in patch.entries],
        "box": [[lo, hi] for (lo, hi) in patch.box],
    }


def _check_in_box(patch: PatchAcs, x) -> np.ndarray:
    pt = np.asarray(x, dtype=float)
    if pt.shape != (patch.dim,):
        raise ValidationError(f"point must have {patch.dim} coordinates, got shape {pt.shape}")
    for a, (lo, hi) in enumerate(patch.box):
        if not (lo <= pt[a] <= hi):
            raise ValidationError(
                f"coordinate x{a + 1} = {pt[a]} outside box [{lo}, {hi}]"
            )
    return pt


def j_at(patch: PatchAcs, x, check: bool = True) -> np.ndarray:
    """Evaluate the structure matrix at a point of the box.

    With check (the default) the J^2 = -I defect is verified to 1e-8;
    a violation means the patch data itself is bad, so it raises
    ValidationError naming the point.
    """
    pt = _check_in_box(patch, x)
    n = patch.dim
    mat = np.empty((n, n))
    for k in range(n):
        for i in range(n):
            mat[k, i] = eval_expr(patch.entries[k][i], pt)
    if check:
        defect = np.abs(mat @ mat + np.eye(n)).max()
        if defect > PATCH_ACS_TOL:
            raise ValidationError(
                f"J(x)^2 = -I fails at x = {pt.tolist()}: max defect {defect:.6e}"
            )
    return mat


@functools.lru_cache(maxsize=16)
def _derivative_table(patch: PatchAcs) -> tuple:
    """d[l][k][i] = symbolic d J^k_i / d x_{l+1}, cached per patch."""
    return tuple(
        tuple(tuple(diff_expr(patch.entries[k][i], l + 1) for i in range(patch.dim))
              for k in range(patch.dim))
        for l in range(patch.dim)
    )


def _dj_at(patch: PatchAcs, pt: np.ndarray) -> np.ndarray:
    table = _derivative_table(patch)
    n = patch.dim
    out = np.empty((n, n, n))
    for l in range(n):
        for k in range(n):
            for i in range(n):
                out[l, k, i] = eval_expr(table[l][k][i], pt)
    return out


def nijenhuis_patch(patch: PatchAcs, x) -> NijTensor:
    """Nijenhuis tensor at a point from symbolic partials of the entries.

    Parameters
    ----------
    patch : PatchAcs
    x : array-like
        A point inside the box.

    Returns
    -------
    NijTensor
        comps[i, j, k] is the e_k coefficient of N(e_i, e_j) at x, where
        e_i are the coordinate directions.
    """
    pt = _check_in_box(patch, x)
    jm = j_at(patch, pt)
    dj = _dj_at(patch, pt)
    t1 = np.einsum("li,lkj->ijk", jm, dj, optimize=True)
    t2 = np.einsum("lj,lki->ijk", jm, dj, optimize=True)
    t3 = np.einsum("kl,jli->ijk", jm, dj, optimize=True)
    t4 = np.einsum("kl,ilj->ijk", jm, dj, optimize=True)
    return NijTensor(comps=t1 - t2 + t3 - t4)


@dataclass(frozen=True)
class VectorField:
    """Expression-valued vector field on the patch coordinates."""

    comps: tuple[Expr, ...]

    def value(self, pt: np.ndarray) -> np.ndarray:
        return np.array([eval_expr(c, pt) for c in self.comps])

    def jacobian(self, pt: np.ndarray) -> np.ndarray:
        """jac[k, l] = d X^k / d x_{l+1} at the point."""
        n = len(self.comps)
        out = np.empty((n, n))
        for k in range(n):
            for l in range(n):
                out[k, l] = eval_expr(diff_expr(self.comps[k], l + 1), pt)
        return out


def apply_j(patch: PatchAcs, field: VectorField) -> VectorField:
    """The field J X with symbolic components sum_i J^k_i X^i."""
    n = patch.dim
    comps = []
    for k in range(n):
        total: Expr = mul(patch.entries[k][0], field.comps[0])
        for i in range(1, n):
            total = add(total, mul(patch.entries[k][i], field.comps[i]))
        comps.append(total)
    return VectorField(comps=tuple(comps))


def bracket_fields(x_field: VectorField, y_field: VectorField, pt: np.ndarray) -> np.ndarray:
    """[X, Y] at a point: X . grad Y - Y . grad X."""
    return y_field.jacobian(pt) @ x_field.value(pt) - x_field.jacobian(pt) @ y_field.value(pt)


def nijenhuis_fields(patch: PatchAcs, x_field: VectorField, y_field: VectorField,
                     x) -> np.ndarray:
    """N(X, Y) at a point straight from vector-field brackets.

    Slower than nijenhuis_patch but independent of the coordinate
    formula; agreement of the two on arbitrary fields is what makes the
    tensor pointwise-defined.
    """
    pt = _check_in_box(patch, x)
    jm = j_at(patch, pt)
    jx = apply_j(patch, x_field)
    jy = apply_j(patch, y_field)
    return (
        bracket_fields(jx, jy, pt)
        - jm @ bracket_fields(jx, y_field, pt)
        - jm @ bracket_fields(x_field, jy, pt)
        - bracket_fields(x_field, y_field, pt)
    )


def point_rank(patch: PatchAcs, x, tol_rank_rel: float = RANK_TOL_REL,
               tol_rank_abs: float = RANK_TOL_ABS) -> int:
    """Pointwise complex rank at x via the factor-4 route through N."""
    pt = _check_in_box(patch, x)
    frame = adapted_frame(j_at(patch, pt))
    g_mat = mu_bar_from_nijenhuis(nijenhuis_patch(patch, pt), frame)
    rank, _ = rank_of_matrix(g_mat, tol_rank_rel, tol_rank_abs)
    return rank


def _grid_points(box, per_axis: int):
    axes = [np.linspace(lo, hi, per_axis) for (lo, hi) in box]
    for idx in itertools.product(range(per_axis), repeat=len(box)):
        yield np.array([axes[a][idx[a]] for a in range(len(box))])


def min_rank_on_grid(patch: PatchAcs, per_axis: int,
                     tol_rank_rel: float = RANK_TOL_REL,
                     tol_rank_abs: float = RANK_TOL_ABS) -> GridRankResult:
    """Minimum pointwise rank over the per_axis^dim uniform grid.

    Requires per_axis >= 2 so both box faces are sampled.  Ties go to the
    lexicographically first grid index, independent of worker count.
    """
    if per_axis < 2:
        raise ValidationError(f"per_axis must be >= 2, got {per_axis}")
    indices = list(itertools.product(range(per_axis), repeat=patch.dim))
    axes = [np.linspace(lo, hi, per_axis) for (lo, hi) in patch.box]

    def rank_at(idx):
        pt = np.array([axes[a][idx[a]] for a in range(patch.dim)])
        return point_rank(patch, pt, tol_rank_rel, tol_rank_abs)

    ranks = map_indexed(rank_at, indices)
    best = None
    for pos, rank in enumerate(ranks):
        if best is None or rank < ranks[best]:
            best = pos
    idx = indices[best]
    argmin = tuple(float(axes[a][idx[a]]) for a in range(patch.dim))
    return GridRankResult(
        k_min=int(ranks[best]), argmin=argmin, argmin_index=tuple(idx),
        per_axis=per_axis, points=len(indices),
    )
