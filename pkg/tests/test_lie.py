from __future__ import annotations

from fractions import Fraction as F

import numpy as np
import pytest

from bachflat.lie import (
    JacobiError,
    StructureConstants,
    abelian,
    ad_traces,
    change_basis,
    descriptor,
    family_algebra,
    from_brackets,
    is_orthogonal,
    iso_witness,
    jacobi_check,
    r1,
    r2,
    require_jacobi,
    rescaled_algebra,
    thm1_algebra,
    thm2_algebra,
)
from bachflat.linalg import inverse, rank
from bachflat.scalars import ALPHA, BETA, BiQuadratic

IDENTITY = np.array([[1 if i == j else 0 for j in range(4)] for i in range(4)], dtype=object)


def test_family_brackets():
    C = family_algebra(ALPHA, BETA)
    e = [[1 if i == k else 0 for i in range(4)] for k in range(4)]
    assert C.bracket(e[1], e[0]) == [0, ALPHA, 0, 0]
    assert C.bracket(e[2], e[0]) == [0, 0, BETA, 0]
    assert C.bracket(e[3], e[0]) == [0, 0, 0, ALPHA + BETA]
    assert C.bracket(e[2], e[1]) == [0, 0, 0, 1]
    assert C.bracket(e[2], e[3]) == [0, 0, 0, 0]


def test_antisymmetry_enforced():
    c = np.zeros((4, 4, 4))
    c[0, 1, 2] = 1.0
    with pytest.raises(ValueError, match="antisymmetric"):
        StructureConstants(c)
    with pytest.raises(ValueError, match="shape"):
        StructureConstants(np.zeros((3, 3, 3)))


def test_jacobi_symbolic_and_named():
    assert jacobi_check(family_algebra())[0]
    assert jacobi_check(abelian())[0]
    for C in (thm1_algebra(), thm2_algebra(), rescaled_algebra()):
        assert jacobi_check(C)[0]


FAMILY_12 = {(2, 1): {2: 1}, (3, 1): {3: 2}, (4, 1): {4: 3}, (3, 2): {4: 1}}


def test_extra_e12_term_in_de3_keeps_jacobi():
    # de3 = 2 e1^e3 + e1^e2 still satisfies d^2 = 0
    C = from_brackets({**FAMILY_12, (1, 2): {3: -1}})
    assert jacobi_check(C)[0]


def test_jacobi_violation_reported():
    # de2 = e1^e2 + e2^e3 gives d(de2) = 2 e1^e2^e3
    C = from_brackets({**FAMILY_12, (2, 3): {2: -1}})
    ok, bad = jacobi_check(C)
    assert not ok
    assert (1, 2, 3, 2) in bad
    assert all(1 <= x <= 4 for v in bad for x in v)
    with pytest.raises(JacobiError):
        require_jacobi(C)


def test_descriptor_named_algebras():
    d = descriptor(thm1_algebra())
    assert d.derived_dims == (4, 3, 1, 0)
    assert d.solvable and not d.nilpotent and not d.unimodular
    assert descriptor(thm2_algebra()).derived_dims == (4, 2, 0)
    assert not descriptor(thm2_algebra()).unimodular
    assert not descriptor(rescaled_algebra()).unimodular
    assert descriptor(family_algebra(1, -1)).unimodular
    a = descriptor(abelian())
    assert a.derived_dims == (4, 0) and a.nilpotent and a.unimodular


def test_r1_plus_r2():
    assert r1() + r2() == BiQuadratic(2, 5, (0, 0, 0, F(-1, 4)))
    assert r1() * r2() == F(-1, 8)


def test_heisenberg_is_nilpotent():
    C = from_brackets({(1, 2): {3: 1}})
    d = descriptor(C)
    assert d.nilpotent and d.lower_central_dims == (4, 1, 0) and d.derived_dims == (4, 1, 0)


def test_non_solvable():
    # so(3) + R
    C = from_brackets({(1, 2): {3: 1}, (2, 3): {1: 1}, (3, 1): {2: 1}})
    d = descriptor(C)
    assert not d.solvable and d.derived_dims == (4, 3)


@pytest.mark.parametrize("a", [F(-2), F(-1, 3), F(1, 2), F(3)])
@pytest.mark.parametrize("b", [F(-2), F(-1, 3), F(1, 2), F(3)])
def test_unimodular_iff_sum_zero(a, b):
    assert descriptor(family_algebra(a, b)).unimodular == (a + b == 0)


def test_symbolic_ad_traces():
    assert ad_traces(family_algebra()) == [-(2 * ALPHA + 2 * BETA), 0, 0, 0]
    assert all(t == 0 for t in ad_traces(family_algebra(ALPHA, -ALPHA)))


def test_descriptor_rejects_polynomials():
    with pytest.raises(TypeError):
        descriptor(family_algebra())


def test_change_basis_identity_and_singular():
    C = thm1_algebra()
    assert change_basis(C, IDENTITY) == C
    S = IDENTITY.copy()
    S[0, 0] = 0
    with pytest.raises(ValueError, match="singular"):
        change_basis(C, S)


@pytest.mark.parametrize("lam", [F(2), F(-1), F(1, 3), F(-7, 2)])
def test_p_witness(lam):
    assert change_basis(family_algebra(), iso_witness("P", lam)) == family_algebra(lam * ALPHA, lam * BETA)


def test_q_and_neg_witness():
    fam = family_algebra()
    assert change_basis(fam, iso_witness("Q")) == family_algebra(BETA, ALPHA)
    assert change_basis(fam, iso_witness("Neg")) == family_algebra(-ALPHA, -BETA)
    assert is_orthogonal(iso_witness("Neg")) and is_orthogonal(iso_witness("Q"))
    assert not is_orthogonal(iso_witness("P", 2))


def test_q_without_sign_flip_fails():
    S = iso_witness("Q")
    S[3, 3] = 1
    assert change_basis(family_algebra(), S) != family_algebra(BETA, ALPHA)


def test_witness_composition():
    Q = iso_witness("Q")
    assert (Q.dot(Q) == IDENTITY).all()
    P2, P3 = iso_witness("P", 2), iso_witness("P", 3)
    assert (P2.dot(P3) == iso_witness("P", 6)).all()
    with pytest.raises(ValueError):
        iso_witness("P", 0)
    with pytest.raises(ValueError):
        iso_witness("R")


def test_float_change_basis_matches_exact():
    C = family_algebra(F(1, 3), F(-2))
    S = iso_witness("Q")
    assert change_basis(C.to_float(), S.astype(float)).allclose(change_basis(C, S))


def test_linalg_helpers():
    M = np.array([[F(2), F(1)], [F(1), F(1)]], dtype=object)
    Mi = inverse(M)
    assert (M.dot(Mi) == np.array([[1, 0], [0, 1]], dtype=object)).all()
    assert rank([[1, 2, 3], [2, 4, 6], [0, 0, 1]]) == 2
    assert rank([[1.0, 2.0], [2.0, 4.0 + 1e-12]]) == 1
