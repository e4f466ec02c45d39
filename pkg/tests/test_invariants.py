"""h^1 of d + d^c, first Betti number, and the method A/B cross-check."""

import numpy as np
import pytest

import acstk
from acstk import ValidationError
from acstk.invariants import b1, h1_ddc


def test_abelian_everything_survives(abelian6, j_a):
    rep = h1_ddc(abelian6, j_a)
    assert (rep.h1_ddc, rep.b1, rep.rank) == (6, 6, 0)
    assert rep.method_a == rep.method_b == 6


def test_heis_j_a(heis, j_a):
    # d e^3 = -e^1 ^ e^2 is the only relation, so b1 = 5; pairing the
    # closed directions against J_a leaves two complex (1,0) lines closed.
    rep = h1_ddc(heis, j_a)
    assert rep.b1 == 5
    assert rep.h1_ddc == 4
    assert rep.rank == 0


def test_heis_j_b(heis, j_b):
    rep = h1_ddc(heis, j_b)
    assert rep.b1 == 5
    assert rep.h1_ddc == 4
    assert rep.rank == 1


def test_free_j_f(free):
    mat = np.zeros((6, 6))
    for i in range(3):
        mat[i + 3, i] = 1.0
        mat[i, i + 3] = -1.0
    j_f = acstk.new_acs(mat)
    rep = h1_ddc(free, j_f)
    assert rep.b1 == 3
    assert rep.h1_ddc == 0
    assert rep.rank == 3


def test_b1_values(heis, free, abelian6):
    assert b1(abelian6) == 6
    assert b1(heis) == 5
    assert b1(free) == 3


def test_methods_agree_on_random_structures(heis, free, abelian6):
    for g in (heis, free, abelian6):
        for seed in range(30):
            j = acstk.random_acs(6, seed=seed)
            rep = h1_ddc(g, j)
            assert rep.method_a == rep.method_b
            assert rep.h1_ddc % 2 == 0
            assert rep.h1_ddc <= rep.b1
            assert 0 <= rep.rank <= 3


def test_dimension_mismatch(heis):
    with pytest.raises(ValidationError):
        h1_ddc(heis, acstk.j_std(4))
