"""FastAPI application exposing the toolkit operations over HTTP.

Contract violations in request payloads map to 422 and numerical
failures to 409, mirroring the CLI exit codes 1 and 2.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..errors import NumericalError, ValidationError
from . import handlers, models


def create_app() -> FastAPI:
    app = FastAPI(
        title="acstk",
        description="Almost complex structures: Nijenhuis tensors, complex rank, "
                    "deformation curves, and first-order invariants",
        version="0.1.0",
    )

    @app.exception_handler(ValidationError)
    async def _validation(_: Request, exc: ValidationError):
        return JSONResponse(status_code=422, content={"error": "validation", "detail": str(exc)})

    @app.exception_handler(NumericalError)
    async def _numerical(_: Request, exc: NumericalError):
        return JSONResponse(status_code=409, content={"error": "numerical", "detail": str(exc)})

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": app.version}

    @app.post("/validate", response_model=models.ValidateResponse)
    def validate(req: models.ValidateRequest):
        return handlers.handle_validate(req)

    @app.post("/rank", response_model=models.RankResponse)
    def rank(req: models.RankRequest):
        return handlers.handle_rank(req)

    @app.post("/curve/scan", response_model=models.CurveScanResponse)
    def curve_scan(req: models.CurveScanRequest):
        return handlers.handle_curve_scan(req)

    @app.post("/curve/refine", response_model=models.CurveRefineResponse)
    def curve_refine(req: models.CurveRefineRequest):
        return handlers.handle_curve_refine(req)

    @app.post("/perturb", response_model=models.PerturbResponse)
    def perturb(req: models.PerturbRequest):
        return handlers.handle_perturb(req)

    @app.post("/approx", response_model=models.ApproxResponse)
    def approx(req: models.ApproxRequest):
        return handlers.handle_approx(req)

    @app.post("/invariants", response_model=models.InvariantsResponse)
    def invariants(req: models.InvariantsRequest):
        return handlers.handle_invariants(req)

    @app.post("/patch/rank", response_model=models.PatchRankResponse)
    def patch_rank(req: models.PatchRankRequest):
        return handlers.handle_patch_rank(req)

    @app.get("/catalog", response_model=models.CatalogResponse)
    def catalog():
        return handlers.handle_catalog()

    @app.get("/catalog/{name}", response_model=models.CatalogResponse)
    def catalog_name(name: str):
        return handlers.handle_catalog(name)

    return app
