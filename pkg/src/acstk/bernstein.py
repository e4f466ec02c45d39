"""Bernstein approximation of sampled deformation curves.

Given samples L_i on a uniform t-grid over [0, 1], the degree-n Bernstein
polynomial of the piecewise-linear interpolant is built in exact rational
arithmetic: nodes f_v at v/n, then monomial coefficients C(n, j) Delta^j f_0
by iterated forward differences.  Only the final coefficients are rounded
to float, so linear data reproduces exactly and the endpoint interpolation
B(0) = L(0), B(1) = L(1) is exact by construction.

Two evaluation routes differ sharply in conditioning.  De Casteljau on the
node values is backward-stable and is what the quality report uses.  The
monomial re-expansion stored in the returned CurveL is the documented wire
format, but its coefficients grow like 3^n (about 1e14 at degree 40), so
float Horner evaluation loses roughly n log 3 bits near t = 1; the report
carries the measured structure-level distance of that route separately
rather than pretending the two agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .acs import ANTICOMM_TOL, Acs, c0_distance
from .deform import CurveL, curve_eval, deform, make_curve
from .errors import NumericalError, ValidationError

GRID_TOL = 1e-9
ENDPOINT_TOL = 1e-12


@dataclass(frozen=True)
class BernsteinReport:
    """Approximation quality measured on the sample set.

    sup_error and the endpoint errors use stable de Casteljau evaluation
    of the Bernstein form; curve_c0_distance is the worst spectral-norm
    distance between the deformed structures along the stored monomial
    curve and along the samples, and max_coeff exposes the monomial
    coefficient growth driving that figure.
    """

    degree: int
    sup_error: float
    endpoint_error_0: float
    endpoint_error_1: float
    curve_c0_distance: float
    max_coeff: float


@dataclass(frozen=True)
class BernsteinResult:
    curve: CurveL
    report: BernsteinReport


def _validate_samples(j0: Acs, samples) -> tuple[np.ndarray, np.ndarray]:
    if len(samples) < 2:
        raise ValidationError(f"need at least 2 samples, got {len(samples)}")
    ts = np.array([float(t) for t, _ in samples])
    mats = np.stack([np.asarray(l, dtype=float) for _, l in samples])
    n = j0.dim
    if mats.shape[1:] != (n, n):
        raise ValidationError(
            f"sample matrices must be {n}x{n}, got shape {mats.shape[1:]}"
        )
    if abs(ts[0]) > ENDPOINT_TOL or abs(ts[-1] - 1.0) > ENDPOINT_TOL:
        raise ValidationError(
            f"samples must span [0, 1]: first t = {ts[0]}, last t = {ts[-1]}"
        )
    step = 1.0 / (len(ts) - 1)
    drift = np.abs(ts - step * np.arange(len(ts))).max()
    if drift > GRID_TOL:
        raise ValidationError(
            f"sample grid must be uniform on [0, 1]: worst drift {drift:.3e}"
        )
    if np.abs(mats[0]).max() > ENDPOINT_TOL:
        raise ValidationError(
            f"sample at t = 0 must vanish, got max entry {np.abs(mats[0]).max():.3e}"
        )
    for idx in range(mats.shape[0]):
        defect = np.abs(mats[idx] @ j0.mat + j0.mat @ mats[idx]).max()
        if defect > ANTICOMM_TOL * max(1.0, np.abs(mats[idx]).max()):
            raise ValidationError(
                f"sample {idx} does not anti-commute with J0: max defect {defect:.6e}"
            )
    return ts, mats


def _exact_nodes(mats: np.ndarray, degree: int) -> list[list[list[Fraction]]]:
    """Node matrices f_v = piecewise-linear interpolant at v/degree, exact."""
    segments = mats.shape[0] - 1
    n = mats.shape[1]
    frac = [[[Fraction(mats[s][r][c]) for c in range(n)] for r in range(n)]
            for s in range(segments + 1)]
    nodes = []
    for v in range(degree + 1):
        pos = Fraction(v * segments, degree)
        s = min(int(pos), segments - 1)
        theta = pos - s
        one = 1 - theta
        nodes.append([[one * frac[s][r][c] + theta * frac[s + 1][r][c]
                       for c in range(n)] for r in range(n)])
    return nodes


def _monomial_coeffs(nodes: list[list[list[Fraction]]]) -> list[list[list[Fraction]]]:
    """Exact monomial coefficients c_j = C(n, j) Delta^j f_0, j = 0..n."""
    degree = len(nodes) - 1
    n = len(nodes[0])
    diffs = nodes
    out = []
    for j in range(degree + 1):
        binom = math.comb(degree, j)
        out.append([[binom * diffs[0][r][c] for c in range(n)] for r in range(n)])
        diffs = [[[diffs[v + 1][r][c] - diffs[v][r][c] for c in range(n)]
                  for r in range(n)] for v in range(len(diffs) - 1)]
    return out


def _de_casteljau(nodes: np.ndarray, t: float) -> np.ndarray:
    """Stable Bernstein evaluation from node values (stack of matrices)."""
    b = nodes.copy()
    while b.shape[0] > 1:
        b = (1.0 - t) * b[:-1] + t * b[1:]
    return b[0]


def bernstein_curve(j0: Acs, samples, degree: int) -> BernsteinResult:
    """Bernstein approximation of sampled anti-commuting deformation data.

    Parameters
    ----------
    j0 : Acs
        Common base structure of all samples.
    samples : sequence of (t, L) pairs
        L values on a uniform grid over [0, 1], with L(0) = 0; every L
        must anti-commute with j0.
    degree : int
        Bernstein degree n >= 1.

    Returns
    -------
    BernsteinResult
        The monomial-form CurveL on domain [0, 1] plus the quality
        report described on BernsteinReport.
    """
    if degree < 1:
        raise ValidationError(f"degree must be >= 1, got {degree}")
    if degree > 200:
        raise ValidationError(f"degree {degree} unreasonably large (max 200)")
    ts, mats = _validate_samples(j0, samples)
    nodes_exact = _exact_nodes(mats, degree)
    coeffs_exact = _monomial_coeffs(nodes_exact)
    n = j0.dim
    coeffs = np.array(
        [[[float(coeffs_exact[j][r][c]) for c in range(n)] for r in range(n)]
         for j in range(1, degree + 1)]
    )
    # c_0 = f_0 = L(0) is zero to 1e-12 by validation and is dropped, so the
    # stored curve keeps the no-constant-term invariant exactly.
    curve = make_curve(j0, coeffs, (0.0, 1.0))

    nodes = np.array([[[float(nodes_exact[v][r][c]) for c in range(n)] for r in range(n)]
                      for v in range(degree + 1)])
    errs = [np.linalg.norm(_de_casteljau(nodes, float(t)) - mats[i], 2)
            for i, t in enumerate(ts)]
    sup_error = float(max(errs))
    end0 = float(np.linalg.norm(_de_casteljau(nodes, 0.0) - mats[0], 2))
    end1 = float(np.linalg.norm(_de_casteljau(nodes, 1.0) - mats[-1], 2))

    worst = 0.0
    evaluable = 0
    for i, t in enumerate(ts):
        try:
            along = curve_eval(curve, float(t))
            target = deform(j0, mats[i])
        except NumericalError:
            continue
        evaluable += 1
        worst = max(worst, c0_distance(along, target))
    c0_dist = worst if evaluable else float("nan")

    report = BernsteinReport(
        degree=degree,
        sup_error=sup_error,
        endpoint_error_0=end0,
        endpoint_error_1=end1,
        curve_c0_distance=c0_dist,
        max_coeff=float(np.abs(coeffs).max()) if degree >= 1 else 0.0,
    )
    return BernsteinResult(curve=curve, report=report)
