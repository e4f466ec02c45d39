"""Pure request-to-response handlers, shared by the HTTP app and the CLI.

Handlers raise ValidationError / NumericalError from the core; surface
layers translate those into HTTP statuses or exit codes.  Every response
embeds a config object with the operation name and all resolved
parameters (tolerances, grids, seeds, degrees, input shapes), so an
artifact records what produced it.
"""

from __future__ import annotations

import numpy as np

from .. import acs as acs_mod
from .. import algebra as algebra_mod
from ..bernstein import bernstein_curve
from ..deform import (
    load_curve,
    perturb_to_rank,
    rank_profile,
    refine_exceptional,
    serialize_curve,
)
from ..errors import ValidationError
from ..invariants import h1_ddc
from ..nijenhuis import mu_bar_matrix, rank_of_matrix
from ..patch import load_patch, min_rank_on_grid
from . import models


def resolve_algebra(ref: models.AlgebraRef) -> algebra_mod.LieAlgebra:
    """Catalog name or inline document to a validated LieAlgebra."""
    if isinstance(ref, str):
        return algebra_mod.catalog(ref)
    return algebra_mod.load_algebra(ref.model_dump())


def _algebra_tag(ref: models.AlgebraRef, g: algebra_mod.LieAlgebra) -> str:
    if isinstance(ref, str):
        return ref
    return g.name or f"inline(dim={g.dim})"


def _acs(doc: models.AcsDoc) -> acs_mod.Acs:
    return acs_mod.load_acs(doc.model_dump())


def _g_doc(mat: np.ndarray) -> models.GMatrixDoc:
    return models.GMatrixDoc(re=np.real(mat).tolist(), im=np.imag(mat).tolist())


def handle_validate(req: models.ValidateRequest) -> models.ValidateResponse:
    checked = []
    if req.algebra is not None:
        resolve_algebra(req.algebra)
        checked.append("algebra")
    if req.acs is not None:
        _acs(req.acs)
        checked.append("acs")
    if req.curve is not None:
        load_curve(req.curve.model_dump())
        checked.append("curve")
    if req.patch is not None:
        load_patch(req.patch.model_dump())
        checked.append("patch")
    if not checked:
        raise ValidationError("nothing to validate: provide algebra, acs, curve, or patch")
    return models.ValidateResponse(
        valid=True, checked=checked, config={"op": "validate", "checked": checked},
    )


def handle_rank(req: models.RankRequest) -> models.RankResponse:
    g = resolve_algebra(req.algebra)
    j = _acs(req.acs)
    gm = mu_bar_matrix(g, j)
    rank, sv = rank_of_matrix(gm.mat, req.tol_rank_rel, req.tol_rank_abs)
    return models.RankResponse(
        rank=rank,
        singular_values=[float(s) for s in sv],
        g=_g_doc(gm.mat),
        config={
            "op": "rank", "algebra": _algebra_tag(req.algebra, g), "dim": g.dim,
            "tol_rank_rel": req.tol_rank_rel, "tol_rank_abs": req.tol_rank_abs,
        },
    )


def handle_curve_scan(req: models.CurveScanRequest) -> models.CurveScanResponse:
    g = resolve_algebra(req.algebra)
    curve = load_curve(req.curve.model_dump())
    profile = rank_profile(g, curve, req.grid, req.tol_rank_rel, req.tol_rank_abs)
    sigma = [None if profile.ranks[i] < 0 else float(profile.sigma_k[i])
             for i in range(len(profile.ts))]
    return models.CurveScanResponse(
        generic_rank=profile.generic_rank,
        k_index=profile.k_index,
        exceptional=[(float(a), float(b)) for (a, b) in profile.exceptional],
        flagged=list(profile.flagged),
        skipped=list(profile.skipped),
        semicontinuity_ok=profile.semicontinuity_ok,
        ts=[float(t) for t in profile.ts],
        ranks=[int(r) for r in profile.ranks],
        sigma_k=sigma,
        config={
            "op": "curve-scan", "algebra": _algebra_tag(req.algebra, g), "dim": g.dim,
            "grid": req.grid, "domain": list(curve.domain), "degree": curve.degree,
            "tol_rank_rel": req.tol_rank_rel, "tol_rank_abs": req.tol_rank_abs,
        },
    )


def handle_curve_refine(req: models.CurveRefineRequest) -> models.CurveRefineResponse:
    g = resolve_algebra(req.algebra)
    curve = load_curve(req.curve.model_dump())
    result = refine_exceptional(
        g, curve, req.k, req.interval, req.max_iter, req.scan_n,
        req.tol_rank_rel, req.tol_rank_abs,
    )
    return models.CurveRefineResponse(
        intervals=[(float(a), float(b)) for (a, b) in result.intervals],
        diagnostic=result.diagnostic,
        evaluations=result.evaluations,
        config={
            "op": "curve-refine", "algebra": _algebra_tag(req.algebra, g), "dim": g.dim,
            "k": req.k, "interval": list(req.interval), "max_iter": req.max_iter,
            "scan_n": req.scan_n,
            "tol_rank_rel": req.tol_rank_rel, "tol_rank_abs": req.tol_rank_abs,
        },
    )


def handle_perturb(req: models.PerturbRequest) -> models.PerturbResponse:
    g = resolve_algebra(req.algebra)
    j0 = _acs(req.acs)
    result = perturb_to_rank(
        g, j0, req.target_rank, req.eps, req.trials, req.seed,
        req.tol_rank_rel, req.tol_rank_abs,
    )
    config = {
        "op": "perturb", "algebra": _algebra_tag(req.algebra, g), "dim": g.dim,
        "target_rank": req.target_rank, "eps": req.eps, "trials": req.trials,
        "seed": req.seed,
        "tol_rank_rel": req.tol_rank_rel, "tol_rank_abs": req.tol_rank_abs,
    }
    if not result.found:
        return models.PerturbResponse(found=False, trials_run=result.trials_run, config=config)
    return models.PerturbResponse(
        found=True,
        trials_run=result.trials_run,
        trial=result.trial,
        t=result.t,
        distance=result.distance,
        rank=result.rank,
        acs=models.AcsDoc(dim=result.acs.dim, matrix=result.acs.mat.tolist()),
        config=config,
    )


def handle_approx(req: models.ApproxRequest) -> models.ApproxResponse:
    j0 = _acs(req.j0)
    samples = [(s.t, np.asarray(s.l, dtype=float)) for s in req.samples]
    result = bernstein_curve(j0, samples, req.degree)
    report = result.report
    return models.ApproxResponse(
        curve=models.CurveDoc(**serialize_curve(result.curve)),
        report=models.ApproxReport(
            degree=report.degree,
            sup_error=report.sup_error,
            endpoint_error_0=report.endpoint_error_0,
            endpoint_error_1=report.endpoint_error_1,
            curve_c0_distance=report.curve_c0_distance,
            max_coeff=report.max_coeff,
        ),
        config={
            "op": "approx", "dim": j0.dim, "degree": req.degree,
            "samples": len(req.samples),
        },
    )


def handle_invariants(req: models.InvariantsRequest) -> models.InvariantsResponse:
    g = resolve_algebra(req.algebra)
    j = _acs(req.acs)
    report = h1_ddc(g, j, req.tol_rank_rel, req.tol_rank_abs)
    return models.InvariantsResponse(
        dim=report.dim,
        h1_ddc=report.h1_ddc,
        b1=report.b1,
        method_a=report.method_a,
        method_b=report.method_b,
        rank=report.rank,
        scope=report.scope,
        config={
            "op": "invariants", "algebra": _algebra_tag(req.algebra, g), "dim": g.dim,
            "tol_rank_rel": req.tol_rank_rel, "tol_rank_abs": req.tol_rank_abs,
        },
    )


def handle_patch_rank(req: models.PatchRankRequest) -> models.PatchRankResponse:
    patch = load_patch(req.patch.model_dump())
    result = min_rank_on_grid(patch, req.per_axis, req.tol_rank_rel, req.tol_rank_abs)
    return models.PatchRankResponse(
        k_min=result.k_min,
        argmin=result.argmin,
        argmin_index=result.argmin_index,
        per_axis=result.per_axis,
        points=result.points,
        config={
            "op": "patch-rank", "dim": patch.dim, "per_axis": req.per_axis,
            "tol_rank_rel": req.tol_rank_rel, "tol_rank_abs": req.tol_rank_abs,
        },
    )


def handle_catalog(name: str | None = None) -> models.CatalogResponse:
    if name is None:
        return models.CatalogResponse(
            names=algebra_mod.catalog_names(), config={"op": "catalog"},
        )
    g = algebra_mod.catalog(name)
    doc = algebra_mod.serialize_algebra(g)
    return models.CatalogResponse(
        names=[name],
        algebra=models.AlgebraDoc(**doc),
        config={"op": "catalog", "name": name},
    )
