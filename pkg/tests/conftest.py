"""Shared fixtures: catalog algebras and the worked structures on them."""

from __future__ import annotations

import numpy as np
import pytest

import acstk


@pytest.fixture(scope="session")
def heis() -> acstk.LieAlgebra:
    return acstk.catalog("heis3xR3")


@pytest.fixture(scope="session")
def free() -> acstk.LieAlgebra:
    return acstk.catalog("free2step3gen")


@pytest.fixture(scope="session")
def abelian6() -> acstk.LieAlgebra:
    return acstk.catalog("abelian6")


@pytest.fixture(scope="session")
def j_a() -> acstk.Acs:
    """Pairing e1->e2, e3->e4, e5->e6: the standard block structure."""
    return acstk.j_std(6)


@pytest.fixture(scope="session")
def j_b() -> acstk.Acs:
    """Pairing e1->e3, e2->e4, e5->e6: non-integrable on heis3xR3."""
    mat = np.zeros((6, 6))
    mat[2, 0] = 1.0
    mat[0, 2] = -1.0
    mat[3, 1] = 1.0
    mat[1, 3] = -1.0
    mat[5, 4] = 1.0
    mat[4, 5] = -1.0
    return acstk.new_acs(mat)


@pytest.fixture(scope="session")
def e_swap() -> np.ndarray:
    """E: e1 <-> e3, e2 -> -e4, e4 -> -e2; anti-commutes with j_std(6),
    squares to the identity on span(e1..e4)."""
    mat = np.zeros((6, 6))
    mat[2, 0] = 1.0
    mat[0, 2] = 1.0
    mat[3, 1] = -1.0
    mat[1, 3] = -1.0
    return mat


@pytest.fixture(scope="session")
def te_curve(j_a, e_swap) -> acstk.CurveL:
    """L(t) = t E on [-0.9, 0.9]; rank drops to 0 exactly at t = 0."""
    return acstk.make_curve(j_a, e_swap[None, :, :], (-0.9, 0.9))


def te_closed_form(t: float) -> np.ndarray:
    """Deformed structure along t E in closed form.

    With a = (1 + t^2)/(1 - t^2) and b = 2t/(1 - t^2) (so a^2 - b^2 = 1)
    the first two J_std blocks mix through E while the e5/e6 block stays.
    """
    a = (1 + t * t) / (1 - t * t)
    b = 2 * t / (1 - t * t)
    mat = np.zeros((6, 6))
    mat[1, 0] = a
    mat[0, 1] = -a
    mat[3, 2] = a
    mat[2, 3] = -a
    mat[0, 3] = -b
    mat[3, 0] = -b
    mat[1, 2] = -b
    mat[2, 1] = -b
    mat[5, 4] = 1.0
    mat[4, 5] = -1.0
    return mat
