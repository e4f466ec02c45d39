"""Request and response models for every operation.

These mirror the on-disk JSON formats exactly: algebra documents with
1-based sparse brackets, row-major structure matrices, curve documents
with j0/coeffs/domain, and patch documents with expression strings.  An
algebra parameter may be either a catalog name (string) or an inline
document.  Every response carries a config object echoing the resolved
parameters that determined the run.
"""

from __future__ import annotations

from typing import Union

from pydantic import BaseModel, ConfigDict


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid")


class BracketEntry(_Model):
    i: int
    j: int
    k: int
    c: float


class AlgebraDoc(_Model):
    name: str = ""
    dim: int
    brackets: list[BracketEntry] = []


AlgebraRef = Union[str, AlgebraDoc]


class AcsDoc(_Model):
    dim: int
    matrix: list[list[float]]


class CurveDoc(_Model):
    j0: list[list[float]]
    coeffs: list[list[list[float]]]
    domain: tuple[float, float]


class PatchDoc(_Model):
    dim: int
    entries: list[list[str]]
    box: list[tuple[float, float]]


class GMatrixDoc(_Model):
    """Complex matrix split into real and imaginary parts, row-major."""

    re: list[list[float]]
    im: list[list[float]]


class ValidateRequest(_Model):
    algebra: AlgebraRef | None = None
    acs: AcsDoc | None = None
    curve: CurveDoc | None = None
    patch: PatchDoc | None = None


class ValidateResponse(_Model):
    valid: bool
    checked: list[str]
    config: dict


class RankRequest(_Model):
    algebra: AlgebraRef
    acs: AcsDoc
    tol_rank_rel: float = 1e-8
    tol_rank_abs: float = 1e-12


class RankResponse(_Model):
    rank: int
    singular_values: list[float]
    g: GMatrixDoc
    config: dict


class CurveScanRequest(_Model):
    algebra: AlgebraRef
    curve: CurveDoc
    grid: int = 1001
    tol_rank_rel: float = 1e-8
    tol_rank_abs: float = 1e-12


class CurveScanResponse(_Model):
    generic_rank: int
    k_index: int
    exceptional: list[tuple[float, float]]
    flagged: list[int]
    skipped: list[int]
    semicontinuity_ok: bool
    ts: list[float]
    ranks: list[int]
    sigma_k: list[float | None]
    config: dict


class CurveRefineRequest(_Model):
    algebra: AlgebraRef
    curve: CurveDoc
    k: int
    interval: tuple[float, float]
    max_iter: int = 40
    scan_n: int = 256
    tol_rank_rel: float = 1e-8
    tol_rank_abs: float = 1e-12


class CurveRefineResponse(_Model):
    intervals: list[tuple[float, float]]
    diagnostic: str | None
    evaluations: int
    config: dict


class PerturbRequest(_Model):
    algebra: AlgebraRef
    acs: AcsDoc
    target_rank: int
    eps: float = 1e-3
    trials: int = 100
    seed: int = 0
    tol_rank_rel: float = 1e-8
    tol_rank_abs: float = 1e-12


class PerturbResponse(_Model):
    found: bool
    trials_run: int
    trial: int | None = None
    t: float | None = None
    distance: float | None = None
    rank: int | None = None
    acs: AcsDoc | None = None
    config: dict


class SamplePoint(_Model):
    t: float
    l: list[list[float]]


class ApproxRequest(_Model):
    j0: AcsDoc
    samples: list[SamplePoint]
    degree: int


class ApproxReport(_Model):
    degree: int
    sup_error: float
    endpoint_error_0: float
    endpoint_error_1: float
    curve_c0_distance: float
    max_coeff: float


class ApproxResponse(_Model):
    curve: CurveDoc
    report: ApproxReport
    config: dict


class InvariantsRequest(_Model):
    algebra: AlgebraRef
    acs: AcsDoc
    tol_rank_rel: float = 1e-8
    tol_rank_abs: float = 1e-12


class InvariantsResponse(_Model):
    dim: int
    h1_ddc: int
    b1: int
    method_a: int
    method_b: int
    rank: int
    scope: str
    config: dict


class PatchRankRequest(_Model):
    patch: PatchDoc
    per_axis: int
    tol_rank_rel: float = 1e-8
    tol_rank_abs: float = 1e-12


class PatchRankResponse(_Model):
    k_min: int
    argmin: tuple[float, ...]
    argmin_index: tuple[int, ...]
    per_axis: int
    points: int
    config: dict


class CatalogResponse(_Model):
    names: list[str]
    algebra: AlgebraDoc | None = None
    config: dict
