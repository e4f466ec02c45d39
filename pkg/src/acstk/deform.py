"""Deformations of almost complex structures along anti-commuting directions.

A single deformation is the conjugation J' = (I + L) J (I + L)^{-1} with
L J + J L = 0; recover_L inverts it inside the chart where I - J0 J1 is
nonsingular, via L = (I - J0 J1)^{-1} (I + J0 J1).  Polynomial curves
L(t) = sum_j L_j t^j (no constant term, so L(0) = 0) induce curves of
structures; rank profiles sample the pointwise complex rank along a grid,
refine_exceptional localizes isolated rank drops by bracketed bisection
on a singular value, and perturb_to_rank searches random anti-commuting
directions for a nearby structure of prescribed rank.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .acs import ACS_TOL, ANTICOMM_TOL, Acs, AntiCommEndo, anti_commuting_part, c0_distance
from .algebra import LieAlgebra
from .errors import NumericalError, ValidationError
from .nijenhuis import RANK_TOL_ABS, RANK_TOL_REL, mu_bar_matrix, rank_of_matrix
from .parallel import map_indexed

INVERT_TOL = 1e-10
PERTURB_LADDER_STEPS = 11


def deform(j0: Acs, l: AntiCommEndo | np.ndarray) -> Acs:
    """Conjugate j0 by (I + L): the deformed structure (I+L) J0 (I+L)^{-1}.

    Parameters
    ----------
    j0 : Acs
        Base structure.
    l : AntiCommEndo or ndarray
        Anti-commuting direction; a raw matrix is gated through the
        anti-commutation check first.

    Returns
    -------
    Acs
        The deformed structure; J^2 = -I holds to 1e-10 because
        conjugation preserves it exactly.

    Raises
    ------
    NumericalError
        If I + L is numerically singular (smallest singular value at or
        below 1e-10) or conjugation loses J^2 = -I beyond tolerance.
    """
    lmat = l.mat if isinstance(l, AntiCommEndo) else np.asarray(l, dtype=float)
    if isinstance(l, AntiCommEndo) and l.base.dim != j0.dim:
        raise ValidationError(f"L base dimension {l.base.dim} does not match J0 {j0.dim}")
    if not isinstance(l, AntiCommEndo):
        defect = np.abs(lmat @ j0.mat + j0.mat @ lmat).max()
        if defect > ANTICOMM_TOL * max(1.0, np.abs(lmat).max()):
            raise ValidationError(
                f"L does not anti-commute with J0: max defect {defect:.6e}"
            )
    return _conjugate(j0, lmat)


def _conjugate(j0: Acs, lmat: np.ndarray) -> Acs:
    n = j0.dim
    a = np.eye(n) + lmat
    sv = np.linalg.svd(a, compute_uv=False)
    if sv[-1] <= INVERT_TOL:
        raise NumericalError(
            f"I + L is numerically singular: smallest singular value {sv[-1]:.6e}"
        )
    mat = a @ j0.mat @ np.linalg.inv(a)
    defect = np.abs(mat @ mat + np.eye(n)).max()
    if defect > ACS_TOL:
        raise NumericalError(f"deformation lost J^2 = -I: defect {defect:.6e}")
    return Acs(mat=mat)


def recover_L(j0: Acs, j1: Acs) -> AntiCommEndo:
    """Invert deform: the unique anti-commuting L with deform(j0, L) = j1.

    Closed form L = (I - J0 J1)^{-1} (I + J0 J1), defined whenever
    J0 J1 has no unit eigenvalue; the result is projected back onto
    exact anti-commuters to shed roundoff.

    Raises
    ------
    NumericalError
        If j1 lies outside the deformation chart of j0, i.e. I - J0 J1
        is numerically singular.
    """
    if j0.dim != j1.dim:
        raise ValidationError(f"dimension mismatch: {j0.dim} vs {j1.dim}")
    n = j0.dim
    prod = j0.mat @ j1.mat
    a = np.eye(n) - prod
    sv = np.linalg.svd(a, compute_uv=False)
    if sv[-1] <= INVERT_TOL:
        raise NumericalError(
            "J1 is outside the deformation chart of J0: "
            f"I - J0 J1 has smallest singular value {sv[-1]:.6e}"
        )
    lmat = np.linalg.solve(a, np.eye(n) + prod)
    lmat = anti_commuting_part(j0, lmat)
    defect = np.abs(lmat @ j0.mat + j0.mat @ lmat).max()
    if defect > ANTICOMM_TOL * max(1.0, np.abs(lmat).max()):
        raise NumericalError(f"recovered L failed the anti-commutation gate: {defect:.6e}")
    return AntiCommEndo(mat=lmat, base=j0)


@dataclass(frozen=True)
class CurveL:
    """Polynomial curve L(t) = sum_{j>=1} coeffs[j-1] t^j of anti-commuters.

    coeffs has shape (degree, n, n); the absence of a constant term makes
    L(0) = 0 automatic.  Every coefficient anti-commutes with the base
    structure (gated at construction, tolerance scaled by coefficient
    magnitude so high-degree re-expansions with large coefficients remain
    representable).  domain is the closed t-interval the curve is meant
    to be evaluated on.
    """

    base: Acs
    coeffs: np.ndarray
    domain: tuple[float, float]

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0]


def make_curve(j0: Acs, coeffs, domain: tuple[float, float]) -> CurveL:
    """Validate coefficients and domain, and build a CurveL."""
    n = j0.dim
    arr = np.asarray(coeffs, dtype=float)
    if arr.size == 0:
        arr = np.zeros((0, n, n))
    if arr.ndim != 3 or arr.shape[1:] != (n, n):
        raise ValidationError(
            f"coefficients must be a stack of {n}x{n} matrices, got shape {arr.shape}"
        )
    for jdx in range(arr.shape[0]):
        lj = arr[jdx]
        defect = np.abs(lj @ j0.mat + j0.mat @ lj).max()
        if defect > ANTICOMM_TOL * max(1.0, np.abs(lj).max()):
            raise ValidationError(
                f"coefficient L_{jdx + 1} does not anti-commute with J0: "
                f"max defect {defect:.6e}"
            )
    lo, hi = float(domain[0]), float(domain[1])
    if not (np.isfinite(lo) and np.isfinite(hi)) or lo >= hi:
        raise ValidationError(f"domain must be a finite interval with lo < hi, got {domain}")
    return CurveL(base=j0, coeffs=arr, domain=(lo, hi))


def load_curve(doc: dict) -> CurveL:
    """Build a CurveL from {"j0": matrix, "coeffs": [matrix, ...], "domain": [lo, hi]}."""
    from .acs import new_acs

    if not isinstance(doc, dict):
        raise ValidationError("curve document must be a JSON object")
    try:
        j0 = new_acs(np.asarray(doc["j0"], dtype=float))
        coeffs = [np.asarray(cj, dtype=float) for cj in doc["coeffs"]]
        domain = (float(doc["domain"][0]), float(doc["domain"][1]))
    except (KeyError, TypeError, ValueError, IndexError):
        raise ValidationError("curve document needs 'j0', 'coeffs', and 'domain'") from None
    return make_curve(j0, np.stack(coeffs) if coeffs else np.zeros((0, j0.dim, j0.dim)), domain)


def serialize_curve(curve: CurveL) -> dict:
    return {
        "j0": curve.base.mat.tolist(),
        "coeffs": [cj.tolist() for cj in curve.coeffs],
        "domain": [curve.domain[0], curve.domain[1]],
    }


def eval_l(curve: CurveL, t: float) -> np.ndarray:
    """L(t) by Horner evaluation of the matrix polynomial (no domain check)."""
    n = curve.base.dim
    if curve.degree == 0:
        return np.zeros((n, n))
    acc = curve.coeffs[-1].copy()
    for jdx in range(curve.degree - 2, -1, -1):
        acc = acc * t + curve.coeffs[jdx]
    return acc * t


def curve_eval(curve: CurveL, t: float) -> Acs:
    """The structure at parameter t: deform(J0, L(t)).

    Raises ValidationError for t outside the domain and NumericalError
    where I + L(t) is numerically singular.
    """
    lo, hi = curve.domain
    if not (lo <= t <= hi):
        raise ValidationError(f"t = {t} outside curve domain [{lo}, {hi}]")
    return _conjugate(curve.base, eval_l(curve, t))


@dataclass
class RankProfile:
    """Sampled rank data of a curve on a uniform grid.

    ranks[i] is -1 where evaluation failed (point skipped); sigma_k[i]
    is the k_index-th singular value of G at t_i (NaN on skipped points),
    with k_index = max(generic_rank, 1).  flagged lists grid indices of
    non-skipped points whose rank drops below the generic rank, and
    exceptional brackets each maximal flagged run by its neighboring grid
    values.  semicontinuity_ok records whether every unflagged interior
    point has rank at least max(rank(t_lo), rank(t_hi)).
    """

    ts: np.ndarray
    ranks: np.ndarray
    sigma_k: np.ndarray
    generic_rank: int
    k_index: int
    exceptional: list[tuple[float, float]]
    flagged: list[int]
    skipped: list[int]
    semicontinuity_ok: bool
    tol_rank_rel: float
    tol_rank_abs: float

    @property
    def flagged_fraction(self) -> float:
        live = len(self.ts) - len(self.skipped)
        return len(self.flagged) / live if live else 0.0


def _rank_point(g: LieAlgebra, curve: CurveL, t: float,
                tol_rank_rel: float, tol_rank_abs: float):
    try:
        jt = curve_eval(curve, t)
        rank, sv = rank_of_matrix(mu_bar_matrix(g, jt).mat, tol_rank_rel, tol_rank_abs)
        return rank, sv
    except NumericalError:
        return None


def rank_profile(g: LieAlgebra, curve: CurveL, grid_n: int = 1001,
                 tol_rank_rel: float = RANK_TOL_REL,
                 tol_rank_abs: float = RANK_TOL_ABS) -> RankProfile:
    """Sample the complex rank of curve_eval(t) on grid_n uniform points.

    Parameters
    ----------
    g : LieAlgebra
        Invariant bracket backing the rank computation.
    curve : CurveL
        Deformation curve; the grid spans its whole domain.
    grid_n : int
        Number of grid points including both endpoints (>= 2).
    """
    if g.dim != curve.base.dim:
        raise ValidationError(f"algebra dimension {g.dim} does not match curve {curve.base.dim}")
    if grid_n < 2:
        raise ValidationError(f"grid must have at least 2 points, got {grid_n}")
    lo, hi = curve.domain
    ts = np.linspace(lo, hi, grid_n)
    results = map_indexed(
        lambda t: _rank_point(g, curve, float(t), tol_rank_rel, tol_rank_abs), ts
    )
    ranks = np.full(grid_n, -1, dtype=int)
    svs: list[np.ndarray | None] = [None] * grid_n
    for i, res in enumerate(results):
        if res is not None:
            ranks[i], svs[i] = res
    skipped = [i for i in range(grid_n) if svs[i] is None]
    live = [i for i in range(grid_n) if svs[i] is not None]
    if not live:
        raise NumericalError("every grid point of the curve failed to evaluate")
    generic = int(ranks[live].max())
    k_index = max(generic, 1)
    sigma_k = np.full(grid_n, np.nan)
    for i in live:
        sv = svs[i]
        sigma_k[i] = float(sv[k_index - 1]) if sv.size >= k_index else 0.0
    flagged = [i for i in live if ranks[i] < generic]
    exceptional = []
    for run_lo, run_hi in _runs(flagged):
        left = ts[run_lo - 1] if run_lo > 0 else ts[run_lo]
        right = ts[run_hi + 1] if run_hi + 1 < grid_n else ts[run_hi]
        exceptional.append((float(left), float(right)))
    r_lo = int(ranks[live[0]])
    r_hi = int(ranks[live[-1]])
    bound = max(r_lo, r_hi)
    sc_ok = all(ranks[i] >= bound for i in live if i not in set(flagged))
    return RankProfile(
        ts=ts, ranks=ranks, sigma_k=sigma_k, generic_rank=generic, k_index=k_index,
        exceptional=exceptional, flagged=flagged, skipped=skipped,
        semicontinuity_ok=sc_ok, tol_rank_rel=tol_rank_rel, tol_rank_abs=tol_rank_abs,
    )


def _runs(indices: list[int]) -> list[tuple[int, int]]:
    """Maximal runs of consecutive integers as (first, last) pairs."""
    runs = []
    for idx in indices:
        if runs and idx == runs[-1][1] + 1:
            runs[-1] = (runs[-1][0], idx)
        else:
            runs.append((idx, idx))
    return runs


@dataclass
class RefineResult:
    """Localized exceptional intervals plus an optional degeneracy note."""

    intervals: list[tuple[float, float]]
    diagnostic: str | None = None
    evaluations: int = 0


def refine_exceptional(g: LieAlgebra, curve: CurveL, k: int,
                       interval: tuple[float, float], max_iter: int = 40,
                       scan_n: int = 256,
                       tol_rank_rel: float = RANK_TOL_REL,
                       tol_rank_abs: float = RANK_TOL_ABS) -> RefineResult:
    """Localize parameters where the rank drops below k inside an interval.

    Scans scan_n + 1 uniform points for dips of sigma_k below the rank
    threshold, then shrinks a bracket around each dip by interval
    halving on sigma_k (the singular value has a minimum at a rank drop,
    not a sign change, so bisection runs on function comparisons).  Each
    returned interval has width at most (hi - lo) * 2^-max_iter.

    If every scanned point is already below threshold the whole interval
    is reported as exceptional with a diagnostic instead of iterating.
    """
    if g.dim != curve.base.dim:
        raise ValidationError(f"algebra dimension {g.dim} does not match curve {curve.base.dim}")
    m = curve.base.m
    max_k = min(m, m * (m - 1) // 2)
    if not (1 <= k <= max_k):
        raise ValidationError(f"k must be between 1 and {max_k}, got {k}")
    lo, hi = float(interval[0]), float(interval[1])
    dlo, dhi = curve.domain
    if not (dlo <= lo < hi <= dhi):
        raise ValidationError(f"interval [{lo}, {hi}] not inside curve domain [{dlo}, {dhi}]")
    if max_iter < 1:
        raise ValidationError(f"max_iter must be positive, got {max_iter}")

    evals = [0]

    def sigma(t: float) -> tuple[float, bool]:
        """(sigma_k value, below-threshold flag); failed points push the search away."""
        evals[0] += 1
        res = _rank_point(g, curve, t, tol_rank_rel, tol_rank_abs)
        if res is None:
            return np.inf, False
        rank, sv = res
        val = float(sv[k - 1]) if sv.size >= k else 0.0
        return val, rank < k

    ts = np.linspace(lo, hi, scan_n + 1)
    scanned = [sigma(float(t)) for t in ts]
    valid = [i for i, (val, _) in enumerate(scanned) if np.isfinite(val)]
    below = [i for i in valid if scanned[i][1]]
    if not below:
        return RefineResult(intervals=[], diagnostic=None, evaluations=evals[0])
    if len(below) == len(valid):
        return RefineResult(
            intervals=[(lo, hi)],
            diagnostic="sigma_k is below the rank threshold across the whole scan; "
                       "the interval is everywhere-exceptional",
            evaluations=evals[0],
        )

    target = (hi - lo) * 2.0 ** (-max_iter)
    intervals = []
    for run_lo, run_hi in _runs(below):
        a = ts[run_lo - 1] if run_lo > 0 else lo
        c = ts[run_hi + 1] if run_hi + 1 <= scan_n else hi
        best = min(range(run_lo, run_hi + 1), key=lambda i: scanned[i][0])
        b = float(ts[best])
        fb = scanned[best][0]
        guard = max_iter + 100
        while (c - a) > target and guard > 0:
            m1, m2 = 0.5 * (a + b), 0.5 * (b + c)
            f1, _ = sigma(m1)
            f2, _ = sigma(m2)
            # ties keep the center: on a flat plateau of sigma_k (e.g. the
            # computed value bottoms out at exactly 0 around a rank drop)
            # the bracket must stay pinned on the scanned minimum instead
            # of drifting to one side of it.
            if f1 < fb and f1 <= f2:
                b, c, fb = m1, b, f1
            elif f2 < fb and f2 < f1:
                a, b, fb = b, m2, f2
            else:
                a, c = m1, m2
            guard -= 1
        intervals.append((float(a), float(c)))
    return RefineResult(intervals=_merge(intervals), diagnostic=None, evaluations=evals[0])


def _merge(intervals: list[tuple[float, float]]) -> list[tuple[float, float]]:
    """Union of possibly-overlapping intervals, sorted."""
    merged: list[tuple[float, float]] = []
    for lo, hi in sorted(intervals):
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(hi, merged[-1][1]))
        else:
            merged.append((lo, hi))
    return merged


@dataclass
class PerturbResult:
    """Outcome of the random search for a nearby structure of given rank."""

    found: bool
    trials_run: int
    acs: Acs | None = None
    l_direction: np.ndarray | None = None
    distance: float | None = None
    rank: int | None = None
    trial: int | None = None
    t: float | None = None


def perturb_to_rank(g: LieAlgebra, j0: Acs, target_rank: int, eps: float,
                    trials: int, seed: int,
                    tol_rank_rel: float = RANK_TOL_REL,
                    tol_rank_abs: float = RANK_TOL_ABS) -> PerturbResult:
    """Search for J within c0-distance eps of j0 with rank >= target_rank.

    Each trial draws a uniform random direction, projects it onto
    anti-commuters, normalizes to unit spectral norm, and walks the
    shrinking ladder t = eps * 2^-p for p = 0..10; the first structure
    within distance eps whose complex rank reaches the target wins.  The
    per-trial generator is seeded with (seed, trial), so outcomes do not
    depend on trial execution order.
    """
    if g.dim != j0.dim:
        raise ValidationError(f"algebra dimension {g.dim} does not match acs {j0.dim}")
    if not (1 <= target_rank <= j0.m):
        raise ValidationError(f"target rank must be between 1 and {j0.m}, got {target_rank}")
    if not (eps > 0.0):
        raise ValidationError(f"eps must be positive, got {eps}")
    if trials < 1:
        raise ValidationError(f"trials must be positive, got {trials}")
    n = j0.dim
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        direction = anti_commuting_part(j0, rng.uniform(-1.0, 1.0, size=(n, n)))
        norm = np.linalg.norm(direction, 2)
        if norm < 1e-12:
            continue
        direction = direction / norm
        for p in range(PERTURB_LADDER_STEPS):
            t = eps * 2.0 ** (-p)
            try:
                jt = _conjugate(j0, t * direction)
            except NumericalError:
                continue
            dist = c0_distance(j0, jt)
            if dist > eps:
                continue
            rank, _ = rank_of_matrix(mu_bar_matrix(g, jt).mat, tol_rank_rel, tol_rank_abs)
            if rank >= target_rank:
                return PerturbResult(
                    found=True, trials_run=trial + 1, acs=jt, l_direction=direction,
                    distance=dist, rank=rank, trial=trial, t=t,
                )
    return PerturbResult(found=False, trials_run=trials)
