"""Bernstein approximation: exactness on linear data, corner-curve quality."""

import numpy as np
import pytest

import acstk
from acstk import ValidationError
from acstk.bernstein import _de_casteljau
from acstk.deform import eval_l


def _linear_samples(e_swap, n_samples=17):
    ts = np.linspace(0.0, 1.0, n_samples)
    return [(float(t), 0.5 * float(t) * e_swap) for t in ts]


def _corner_samples(e_swap, n_samples=101):
    # L(t) = min(t, 1-t) E: piecewise linear with a kink at 1/2.
    ts = np.linspace(0.0, 1.0, n_samples)
    return [(float(t), min(float(t), 1.0 - float(t)) * e_swap) for t in ts]


def test_linear_data_reproduced_exactly(j_a, e_swap):
    # A linear L(t) = (t/2) E is its own Bernstein polynomial at every
    # degree.  The rational pipeline gives the monomial coefficients
    # exactly; the float de Casteljau report only rounds at non-dyadic
    # node positions (v/3, v/10), so the sup stays at machine epsilon.
    for degree in (1, 3, 10):
        res = acstk.bernstein_curve(j_a, _linear_samples(e_swap), degree)
        assert res.report.sup_error <= 1e-15
        assert res.report.endpoint_error_0 == 0.0
        assert res.report.endpoint_error_1 == 0.0
        # monomial form: single degree-1 coefficient E/2, rest exactly 0
        assert np.abs(res.curve.coeffs[0] - 0.5 * e_swap).max() == 0.0
        if degree > 1:
            assert np.abs(res.curve.coeffs[1:]).max() == 0.0
    assert acstk.bernstein_curve(j_a, _linear_samples(e_swap), 1).report.sup_error == 0.0


def test_corner_curve_sup_error_deg10(j_a, e_swap):
    res = acstk.bernstein_curve(j_a, _corner_samples(e_swap), 10)
    # Bernstein of min(t, 1-t) at even degree n has max error at t = 1/2:
    # 1/2 - C(n, n/2)/2^n * n/(2n) ... for n = 10 the measured sup over the
    # 101-point grid is exactly 126/1024.
    assert res.report.sup_error == pytest.approx(126.0 / 1024.0, abs=1e-12)
    assert res.report.endpoint_error_0 == 0.0
    assert res.report.endpoint_error_1 == 0.0


def test_corner_curve_improves_with_degree(j_a, e_swap):
    samples = _corner_samples(e_swap)
    res10 = acstk.bernstein_curve(j_a, samples, 10)
    res40 = acstk.bernstein_curve(j_a, samples, 40)
    assert res40.report.sup_error < res10.report.sup_error
    # degree-40 monomial coefficients are astronomically large; the report
    # must expose that rather than hide it.
    assert res40.report.max_coeff > 1e13
    assert res40.report.curve_c0_distance == res40.report.curve_c0_distance  # not NaN


def test_monomial_curve_is_valid_curvel(j_a, e_swap):
    res = acstk.bernstein_curve(j_a, _corner_samples(e_swap), 40)
    curve = res.curve
    assert curve.degree == 40
    assert curve.domain == (0.0, 1.0)
    # every stored coefficient anti-commutes with the base (scaled gate)
    for lj in curve.coeffs:
        scale = max(1.0, np.abs(lj).max())
        assert np.abs(lj @ j_a.mat + j_a.mat @ lj).max() <= 1e-10 * scale
    assert np.array_equal(eval_l(curve, 0.0), np.zeros((6, 6)))


def test_monomial_matches_de_casteljau_at_low_degree(j_a, e_swap):
    # At degree 10 the monomial coefficients are still small enough that
    # Horner and de Casteljau agree to ~1e-12.
    samples = _corner_samples(e_swap)
    res = acstk.bernstein_curve(j_a, samples, 10)
    nodes = np.array(
        [[[float(x) for x in row] for row in mat]
         for mat in _exact_nodes_float(samples, 10)]
    )
    for t in np.linspace(0.0, 1.0, 23):
        direct = _de_casteljau(nodes, float(t))
        horner = eval_l(res.curve, float(t))
        assert np.abs(direct - horner).max() <= 1e-12


def _exact_nodes_float(samples, degree):
    from fractions import Fraction

    mats = np.stack([np.asarray(l) for _, l in samples])
    from acstk.bernstein import _exact_nodes

    return _exact_nodes(mats, degree)


def test_validation_errors(j_a, e_swap):
    good = _linear_samples(e_swap)
    with pytest.raises(ValidationError, match="degree"):
        acstk.bernstein_curve(j_a, good, 0)
    with pytest.raises(ValidationError, match="at least 2"):
        acstk.bernstein_curve(j_a, good[:1], 3)
    # wrong span
    shifted = [(t + 0.5, l) for t, l in good]
    with pytest.raises(ValidationError, match="span"):
        acstk.bernstein_curve(j_a, shifted, 3)
    # non-uniform grid
    bent = list(good)
    bent[3] = (bent[3][0] + 0.01, bent[3][1])
    with pytest.raises(ValidationError, match="uniform"):
        acstk.bernstein_curve(j_a, bent, 3)
    # nonzero start
    bad0 = list(good)
    bad0[0] = (0.0, e_swap.copy())
    with pytest.raises(ValidationError, match="t = 0 must vanish"):
        acstk.bernstein_curve(j_a, bad0, 3)
    # non-anti-commuting sample
    bad = list(good)
    bad[5] = (bad[5][0], np.eye(6))
    with pytest.raises(ValidationError, match="anti-commute"):
        acstk.bernstein_curve(j_a, bad, 3)
