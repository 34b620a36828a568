from __future__ import annotations

from fractions import Fraction as F

import numpy as np
import pytest

from bachflat import _kernels
from bachflat.acceptance import random_algebra, thm1_eigen_oracle
from bachflat.curvature import curvature
from bachflat.lie import abelian, change_basis, family_algebra, thm1_algebra
from bachflat.weyl import (
    char_poly,
    eigen3,
    eval_poly,
    is_zero_matrix,
    ricci_contraction,
    sd_asd_parts,
    weyl_tensor,
)


def weyl_of(C):
    cu = curvature(C)
    return weyl_tensor(cu.R, cu.rho, cu.tau)


def test_abelian_weyl_zero():
    assert all(x == 0 for x in weyl_of(abelian()).flat)


def test_symbolic_contraction_zero():
    W = weyl_of(family_algebra())
    assert all(x == 0 for x in ricci_contraction(W).flat)


def test_g11_halves():
    h = sd_asd_parts(weyl_of(family_algebra(1, 1)))
    assert not is_zero_matrix(h.plus)
    assert is_zero_matrix(h.minus)
    hn = sd_asd_parts(weyl_of(family_algebra(-1, -1)))
    assert is_zero_matrix(hn.plus) and not is_zero_matrix(hn.minus)


def test_g_r1r2_eigenvalues_exact():
    h = sd_asd_parts(weyl_of(thm1_algebra()))
    plus, minus = thm1_eigen_oracle()
    for M, lams in ((h.plus, plus), (h.minus, minus)):
        cp = char_poly(np.array([[8 * x for x in row] for row in M], dtype=object))
        assert all(eval_poly(cp, lam) == 0 for lam in lams)
        assert sum(lams) == 0
        got = eigen3(np.array([[8 * float(x) for x in row] for row in M]))
        assert np.allclose(got, sorted(float(x) for x in lams), atol=1e-12)


def test_halves_are_symmetric_trace_free():
    h = sd_asd_parts(weyl_of(thm1_algebra()))
    for M in (h.plus, h.minus):
        assert M[0, 0] + M[1, 1] + M[2, 2] == 0
        assert all(M[i, j] == M[j, i] for i in range(3) for j in range(3))


def test_orientation_reversal_swaps_halves():
    C = thm1_algebra()
    S = np.array([[1 if (i, j) in ((0, 0), (1, 1), (2, 3), (3, 2)) else 0 for j in range(4)] for i in range(4)], dtype=object)
    h = sd_asd_parts(weyl_of(C))
    g = sd_asd_parts(weyl_of(change_basis(C, S)))
    assert eigen3(h.plus) == pytest.approx(eigen3(g.minus), abs=1e-12)
    assert eigen3(h.minus) == pytest.approx(eigen3(g.plus), abs=1e-12)


def test_eigen3_examples():
    assert eigen3(np.zeros((3, 3))) == (0.0, 0.0, 0.0)
    assert eigen3(np.diag([1.0, 2.0, -3.0])) == (-3.0, 1.0, 2.0)
    rng = np.random.default_rng(0)
    for _ in range(50):
        A = rng.standard_normal((3, 3))
        A = A + A.T
        assert np.allclose(eigen3(A), np.linalg.eigvalsh(A), atol=1e-10)
    assert all(isinstance(x, float) for x in eigen3(np.eye(3)))


def test_char_poly_exact():
    M = np.array([[F(1), F(2), 0], [F(2), F(1), 0], [0, 0, F(-2)]], dtype=object)
    cp = char_poly(M)
    for lam in (3, -1, -2):
        assert eval_poly(cp, lam) == 0


def test_norm_ratio_and_zero_iff():
    # |W|^2 = |M+|^2 + |M-|^2 for the operator normalization used here
    rng = np.random.default_rng(11)
    for _ in range(30):
        C = random_algebra(rng)
        t = _kernels.curvature_batch(C.c[None])
        W = t["W"][0]
        p, m = _kernels.weyl_halves_batch(t["W"])
        lhs = np.sum(W * W)
        rhs = (np.sum(p[0] ** 2) + np.sum(m[0] ** 2))
        assert lhs == pytest.approx(rhs, rel=1e-9)
        assert (np.abs(W).max() < 1e-9) == (np.abs(p).max() < 1e-9 and np.abs(m).max() < 1e-9)


def test_float_halves_match_exact():
    C = thm1_algebra()
    h = sd_asd_parts(weyl_of(C))
    t = _kernels.curvature_batch(C.to_float().c[None])
    p, m = _kernels.weyl_halves_batch(t["W"])
    assert np.allclose(p[0], h.plus.astype(float), atol=1e-12)
    assert np.allclose(m[0], h.minus.astype(float), atol=1e-12)
