from __future__ import annotations

from fractions import Fraction as F

import numpy as np

from bachflat import _kernels
from bachflat.acceptance import bach_display, random_algebra
from bachflat.bach import bach_tensor, cov_ricci, divergence_einstein, weyl_bach_float
from bachflat.curvature import curvature
from bachflat.family import poly, symbolic_tensors
from bachflat.lie import abelian, family_algebra, thm1_algebra, thm2_algebra
from bachflat.scalars import ALPHA, BETA


def bach_of(C):
    cu = curvature(C)
    return bach_tensor(cu.rho, cu.tau, cov_ricci(cu.gamma, cu.rho).d2)


def test_abelian():
    cu = curvature(abelian())
    cr = cov_ricci(cu.gamma, cu.rho)
    assert all(x == 0 for x in cr.d1.flat) and all(x == 0 for x in cr.d2.flat)


def test_einstein_parallel_ricci():
    cu = curvature(family_algebra(F(1, 2), F(1, 2)))
    assert all(x == 0 for x in cov_ricci(cu.gamma, cu.rho).d1.flat)
    assert all(x == 0 for x in bach_of(family_algebra(F(1, 2), F(1, 2))).flat)


def test_symbolic_d1_symmetric():
    cu = curvature(family_algebra())
    d1 = cov_ricci(cu.gamma, cu.rho).d1
    assert all(d1[p, i, j] == d1[p, j, i] for p in range(4) for i in range(4) for j in range(4))


def test_family_bach_symbolic():
    B = symbolic_tensors().B
    b11, b22, b33 = bach_display()
    assert poly(B[0, 0]) == b11 and poly(B[1, 1]) == b22 and poly(B[2, 2]) == b33
    assert all(B[i, j] == 0 for i in range(4) for j in range(4) if i != j)
    assert poly(B[3, 3]) == -(b11 + b22 + b33)


def test_family_b44_closed_form():
    B = symbolic_tensors().B
    a, b = ALPHA, BETA
    want = (
        F(5, 6) - a**2 * F(7, 6) - a * b * F(11, 6) - b**2 * F(7, 6)
        + a**3 * b * F(2, 3) + a**2 * b**2 * 2 + a * b**3 * F(2, 3)
    )
    assert poly(B[3, 3]) == want


def test_fixture_examples_bach_flat():
    assert all(x == 0 for x in bach_of(thm1_algebra()).flat)
    assert all(x == 0 for x in bach_of(thm2_algebra()).flat)


def test_symbolic_contracted_bianchi():
    cu = curvature(family_algebra())
    assert all(x == 0 for x in divergence_einstein(cu.gamma, cu.rho, cu.tau))


def test_generic_float_path_matches_kernels():
    rng = np.random.default_rng(5)
    for _ in range(10):
        C = random_algebra(rng)
        B = bach_of(C).astype(float)
        Bk = _kernels.bach_batch(C.c[None])[0]
        assert np.allclose(B, Bk, atol=1e-10)
        assert abs(np.trace(B)) < 1e-9
        assert np.allclose(B, B.T, atol=1e-10)


def test_weyl_route_agrees():
    # the Weyl-based expression matches with constant exactly 1
    rng = np.random.default_rng(6)
    for _ in range(100):
        C = random_algebra(rng)
        t = _kernels.curvature_batch(C.c[None])
        Bw = weyl_bach_float(t["gamma"][0], t["rho"][0], t["W"][0])
        B = t["B"][0]
        assert np.abs(Bw - B).max() <= 1e-9 * max(1.0, np.abs(B).max())
