from __future__ import annotations

import math
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from bachflat.scalars import (
    ALPHA,
    BETA,
    BiPolynomial,
    BiQuadratic,
    FieldMismatchError,
    field_of_radicands,
    is_zero,
    sqrt_rational,
    squarefree_split,
    to_field,
    to_float,
)

small_q = st.fractions(min_value=-20, max_value=20, max_denominator=12)
FIELDS = [(2, 5), (2, 3), (3, 7)]


@st.composite
def biquad(draw, field=None):
    a, b = field or draw(st.sampled_from(FIELDS))
    return BiQuadratic(a, b, [draw(small_q) for _ in range(4)])


@st.composite
def same_field_triple(draw):
    f = draw(st.sampled_from(FIELDS))
    return tuple(draw(biquad(f)) for _ in range(3))


def sqrt2():
    return BiQuadratic.sqrt_of(2, 5, 2)


def test_basis_products():
    s2, s5 = BiQuadratic.sqrt_of(2, 5, 2), BiQuadratic.sqrt_of(2, 5, 5)
    assert s2 * s5 == BiQuadratic.sqrt_of(2, 5, 10)
    assert s2 * s2 == 2
    assert (s2 * s5).coeffs == (0, 0, 0, 1)


def test_conjugate_product_is_rational():
    # (3 sqrt2 - sqrt10)(3 sqrt2 + sqrt10) = 18 - 10
    x = BiQuadratic(2, 5, (0, 3, 0, -1))
    y = BiQuadratic(2, 5, (0, 3, 0, 1))
    assert x * y == 8
    assert (x * y).is_rational()


def test_nonstandard_field_ab_slot():
    # Q(sqrt6, sqrt10) has sqrt6 * sqrt10 = 2 sqrt15
    x = BiQuadratic.sqrt_of(6, 10, 6) * BiQuadratic.sqrt_of(6, 10, 10)
    assert x.surd() == {15: 2}
    assert x == 2 * BiQuadratic.sqrt_of(6, 10, 15)


def test_invalid_fields_rejected():
    with pytest.raises(ValueError):
        BiQuadratic(2, 8)
    with pytest.raises(ValueError):
        BiQuadratic(6, 3)
    with pytest.raises(ValueError):
        BiQuadratic(2, 2)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        BiQuadratic(2, 5) ** -1
    with pytest.raises(ZeroDivisionError):
        sqrt2() / 0


def test_field_mismatch():
    x = BiQuadratic.sqrt_of(2, 5, 5)
    y = BiQuadratic.sqrt_of(2, 3, 3)
    with pytest.raises(FieldMismatchError):
        x + y
    # a shared subfield is fine
    assert BiQuadratic.sqrt_of(2, 5, 2) == BiQuadratic.sqrt_of(2, 3, 2)
    assert BiQuadratic.sqrt_of(2, 5, 2) + BiQuadratic.sqrt_of(2, 3, 2) == 2 * sqrt2()


@given(same_field_triple())
def test_field_axioms(t):
    x, y, z = t
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert x * 1 == x and x + 0 == x
    assert x - x == 0
    if x != 0:
        assert x * x ** -1 == 1
        assert (y / x) * x == y


@given(same_field_triple())
def test_float_homomorphism(t):
    x, y, _ = t
    for exact, approx in ((x + y, float(x) + float(y)), (x * y, float(x) * float(y))):
        assert math.isclose(float(exact), approx, rel_tol=1e-12, abs_tol=1e-9)


@given(biquad())
def test_sign_matches_float(x):
    f = float(x)
    if abs(f) > 1e-9:
        assert x.sign() == (1 if f > 0 else -1)
    assert (x.sign() == 0) == (x == 0)


def test_sign_near_cancellation():
    # 99 - 70 sqrt2 is about 0.005 (9801 vs 9800)
    x = BiQuadratic(2, 5, (99, -70, 0, 0))
    assert x.sign() == 1
    assert (-x).sign() == -1
    assert x > 0 and -x < 0


def test_to_float_examples():
    r1 = BiQuadratic(2, 5, (0, F(3, 8), 0, F(-1, 8)))
    assert abs(to_float(r1) - 0.135045) < 1e-6
    assert to_float(0) == 0.0
    assert to_float(F(7, 2)) == 3.5
    with pytest.raises(TypeError):
        to_float(ALPHA)


def test_two_forms_of_r1_agree():
    # (sqrt(7 - 3 sqrt5) / 4)^2 and ((3 sqrt2 - sqrt10)/8)^2 both equal (7 - 3 sqrt5)/16
    r1 = BiQuadratic(2, 5, (0, F(3, 8), 0, F(-1, 8)))
    assert r1 * r1 == BiQuadratic(2, 5, (F(7, 16), 0, F(-3, 16), 0))


def test_sqrt_rational_and_squarefree():
    assert squarefree_split(72) == (6, 2)
    assert sqrt_rational(F(8, 9)) == (F(2, 3), 2)
    assert sqrt_rational(F(1, 12)) == (F(1, 6), 3)
    assert sqrt_rational(F(0)) == (0, 1)


def test_field_of_radicands():
    assert field_of_radicands([2, 5, 10]) == (2, 5)
    assert field_of_radicands([10]) == (2, 10)
    assert field_of_radicands([2]) == (2, 3)
    assert field_of_radicands([6, 10]) == (6, 10)
    assert field_of_radicands([1]) is None
    with pytest.raises(FieldMismatchError):
        field_of_radicands([2, 3, 5])


def test_to_field():
    x = to_field(F(1, 2), (2, 5))
    assert isinstance(x, BiQuadratic) and x == F(1, 2)
    assert to_field(BiQuadratic(2, 5, (3, 0, 0, 0)), None) == 3
    with pytest.raises(FieldMismatchError):
        to_field(sqrt2(), None)


def test_is_zero():
    assert is_zero(0) and is_zero(F(0)) and is_zero(1e-12)
    assert not is_zero(1e-6) and not is_zero(F(1, 10**30))


# ---------------------------------------------------------------------------
# polynomials

polys = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)), small_q, max_size=5
).map(BiPolynomial)


def test_poly_expansion_example():
    p = (ALPHA**2 - BETA**2) * (1 + 8 * ALPHA * BETA)
    want = ALPHA**2 + 8 * ALPHA**3 * BETA - 8 * ALPHA * BETA**3 - BETA**2
    assert p == want


def test_poly_no_zero_terms():
    p = ALPHA - ALPHA
    assert p.terms == {} and p == 0
    assert (ALPHA + 0) == ALPHA


def test_poly_eval_b11_at_one():
    b11 = (
        F(1, 6) - ALPHA**2 * F(1, 6) + ALPHA**3 * BETA * F(2, 3) - ALPHA**2 * BETA**2 * F(2, 3)
        - ALPHA * BETA * F(1, 2) + ALPHA * BETA**3 * F(2, 3) - BETA**2 * F(1, 6)
    )
    assert b11.eval(1, 1) == 0
    assert b11.eval(F(1, 2), F(1, 2)) == 0


@given(polys, polys, small_q, small_q)
def test_eval_is_homomorphism(p, q, s, t):
    assert (p * q).eval(s, t) == p.eval(s, t) * q.eval(s, t)
    assert (p + q).eval(s, t) == p.eval(s, t) + q.eval(s, t)


@given(polys, polys, polys)
def test_poly_ring_axioms(p, q, r):
    assert p * (q + r) == p * q + p * r
    assert (p * q) * r == p * (q * r)
    assert p - p == 0


def test_poly_eval_in_number_field():
    r1 = BiQuadratic(2, 5, (0, F(3, 8), 0, F(-1, 8)))
    r2 = BiQuadratic(2, 5, (0, F(-3, 8), 0, F(-1, 8)))
    assert (1 + 8 * ALPHA * BETA).eval(r1, r2) == 0


def test_poly_division_and_degree():
    p = ALPHA**2 * 3 + BETA
    assert (p / 3) * 3 == p
    assert p.degree() == 2
    assert BiPolynomial.const(5).is_constant()
    with pytest.raises(ZeroDivisionError):
        p / 0
