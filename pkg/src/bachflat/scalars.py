"""Scalar backends for the curvature pipeline.

Every tensor routine in this package only needs a commutative Q-algebra:
``+``, ``-``, ``*``, and division by small integers.  Four backends are
provided:

* :class:`fractions.Fraction` (exported as :data:`Rational`),
* :class:`BiQuadratic`, elements of a field Q(sqrt a, sqrt b),
* :class:`BiPolynomial`, elements of Q[alpha, beta],
* plain Python floats.

Python ints mix freely with all of them and act as exact zeros/ones.
"""

from __future__ import annotations

import math
import numbers
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

Rational = Fraction

FLOAT_TOL = 1e-9


class FieldMismatchError(ValueError):
    """Raised when two biquadratic values live in different fields."""


# ---------------------------------------------------------------------------
# integer helpers


@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of ``n >= 1`` by trial division."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out = []
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def squarefree_split(n: int) -> tuple[int, int]:
    """Write ``n = m**2 * d`` with ``d`` square-free; return ``(m, d)``."""
    m, d = 1, 1
    for p, e in factorize(n):
        m *= p ** (e // 2)
        if e % 2:
            d *= p
    return m, d


def is_squarefree(n: int) -> bool:
    return n >= 1 and all(e == 1 for _, e in factorize(n))


def sqrt_rational(q: Fraction) -> tuple[Fraction, int]:
    """Return ``(c, d)`` with ``sqrt(q) = c * sqrt(d)``, ``d`` square-free, ``c >= 0``."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("square root of a negative rational")
    if q == 0:
        return Fraction(0), 1
    # sqrt(n/m) = sqrt(n*m)/m
    mn, dn = squarefree_split(q.numerator * q.denominator)
    return Fraction(mn, q.denominator), dn


def _as_fraction(x) -> Fraction | None:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, numbers.Integral):
        return Fraction(int(x))
    return None


# ---------------------------------------------------------------------------
# biquadratic fields


class BiQuadratic:
    """An element ``q0 + q1*sqrt(a) + q2*sqrt(b) + q3*sqrt(a)*sqrt(b)``.

    ``a < b`` are distinct square-free integers greater than one, so the
    four basis elements are linearly independent over Q.  Values from the
    same field compare componentwise; values from different fields compare
    as real numbers (both sides are expanded into square-free radicals).
    """

    __slots__ = ("a", "b", "coeffs")

    def __init__(self, a: int, b: int, coeffs: Iterable = (0, 0, 0, 0)):
        a, b = int(a), int(b)
        if not (1 < a < b and is_squarefree(a) and is_squarefree(b)):
            raise ValueError(f"invalid biquadratic field spec ({a}, {b})")
        ab_m, ab_d = squarefree_split(a * b)
        if ab_d in (1, a, b):
            raise ValueError(f"sqrt({a}) and sqrt({b}) are dependent")
        cs = tuple(Fraction(c) for c in coeffs)
        if len(cs) != 4:
            raise ValueError("need four rational coefficients")
        self.a = a
        self.b = b
        self.coeffs = cs

    # construction helpers
    @classmethod
    def from_rational(cls, a: int, b: int, q) -> BiQuadratic:
        return cls(a, b, (q, 0, 0, 0))

    @classmethod
    def sqrt_of(cls, a: int, b: int, n: int) -> BiQuadratic:
        """``sqrt(n)`` for integer ``n >= 0`` whose square-free part lies in the field."""
        m, d = squarefree_split(n)
        return cls.from_surd(a, b, {d: Fraction(m)})

    @classmethod
    def from_surd(cls, a: int, b: int, terms: Mapping[int, Fraction]) -> BiQuadratic:
        """Build from ``{squarefree d: coefficient}`` meaning ``sum c*sqrt(d)``."""
        g = math.gcd(a, b)
        ab = a * b // (g * g)
        q = [Fraction(0)] * 4
        for d, c in terms.items():
            if c == 0:
                continue
            if d == 1:
                q[0] += c
            elif d == a:
                q[1] += c
            elif d == b:
                q[2] += c
            elif d == ab:
                # sqrt(a)*sqrt(b) = g*sqrt(ab)
                q[3] += Fraction(c) / g
            else:
                raise FieldMismatchError(f"sqrt({d}) is not in Q(sqrt({a}), sqrt({b}))")
        return cls(a, b, q)

    @property
    def field(self) -> tuple[int, int]:
        return (self.a, self.b)

    def surd(self) -> dict[int, Fraction]:
        """Expansion into square-free radicals, zero terms dropped."""
        g = math.gcd(self.a, self.b)
        keys = (1, self.a, self.b, self.a * self.b // (g * g))
        scale = (1, 1, 1, g)
        return {k: c * s for k, c, s in zip(keys, self.coeffs, scale) if c != 0}

    def is_rational(self) -> bool:
        return self.coeffs[1] == self.coeffs[2] == self.coeffs[3] == 0

    # coercion
    def _coerce(self, other) -> BiQuadratic | None:
        if isinstance(other, BiQuadratic):
            if other.field == self.field:
                return other
            try:
                return BiQuadratic.from_surd(self.a, self.b, other.surd())
            except FieldMismatchError:
                raise FieldMismatchError(
                    f"mixing Q(sqrt{self.field}) and Q(sqrt{other.field})"
                ) from None
        q = _as_fraction(other)
        if q is None:
            return None
        return BiQuadratic(self.a, self.b, (q, 0, 0, 0))

    def _new(self, coeffs) -> BiQuadratic:
        out = object.__new__(BiQuadratic)
        out.a, out.b, out.coeffs = self.a, self.b, tuple(coeffs)
        return out

    def __add__(self, other):
        if isinstance(other, float):
            return float(self) + other
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._new(x + y for x, y in zip(self.coeffs, o.coeffs))

    __radd__ = __add__

    def __neg__(self) -> BiQuadratic:
        return self._new(-x for x in self.coeffs)

    def __pos__(self) -> BiQuadratic:
        return self

    def __sub__(self, other):
        if isinstance(other, float):
            return float(self) - other
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._new(x - y for x, y in zip(self.coeffs, o.coeffs))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, float):
            return float(self) * other
        q = _as_fraction(other)
        if q is not None:
            return self._new(x * q for x in self.coeffs)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.a, self.b
        x0, x1, x2, x3 = self.coeffs
        y0, y1, y2, y3 = o.coeffs
        # basis 1, sa, sb, sa*sb with sa^2 = a, sb^2 = b
        return self._new((
            x0 * y0 + a * x1 * y1 + b * x2 * y2 + a * b * x3 * y3,
            x0 * y1 + x1 * y0 + b * (x2 * y3 + x3 * y2),
            x0 * y2 + x2 * y0 + a * (x1 * y3 + x3 * y1),
            x0 * y3 + x3 * y0 + x1 * y2 + x2 * y1,
        ))

    __rmul__ = __mul__

    def conj_a(self) -> BiQuadratic:
        """Image under sqrt(a) -> -sqrt(a)."""
        x0, x1, x2, x3 = self.coeffs
        return self._new((x0, -x1, x2, -x3))

    def conj_b(self) -> BiQuadratic:
        """Image under sqrt(b) -> -sqrt(b)."""
        x0, x1, x2, x3 = self.coeffs
        return self._new((x0, x1, -x2, -x3))

    def inverse(self) -> BiQuadratic:
        if self == 0:
            raise ZeroDivisionError("division by zero in biquadratic field")
        # x * conj_b(x) lies in Q(sqrt a); then n * conj_a(n) is rational.
        y = self.conj_b()
        n = self * y
        z = n.conj_a()
        r = (n * z).coeffs[0]
        return (y * z) * (1 / r)

    def __truediv__(self, other):
        if isinstance(other, float):
            return float(self) / other
        q = _as_fraction(other)
        if q is not None:
            if q == 0:
                raise ZeroDivisionError("division by zero in biquadratic field")
            return self._new(x / q for x in self.coeffs)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        if isinstance(other, float):
            return other / float(self)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int) -> BiQuadratic:
        if not isinstance(n, numbers.Integral):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = self._new((1, 0, 0, 0))
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, BiQuadratic):
            if other.field == self.field:
                return self.coeffs == other.coeffs
            return self.surd() == other.surd()
        q = _as_fraction(other)
        if q is not None:
            return self.is_rational() and self.coeffs[0] == q
        if isinstance(other, float):
            return float(self) == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash(frozenset(self.surd().items()))

    def __bool__(self) -> bool:
        return any(self.coeffs)

    # exact sign: write x = u + v*sqrt(b) with u, v in Q(sqrt a)
    @staticmethod
    def _sign_quadratic(p: Fraction, q: Fraction, d: int) -> int:
        sp = (p > 0) - (p < 0)
        sq = (q > 0) - (q < 0)
        if sq == 0 or sp == sq:
            return sp or sq
        if sp == 0:
            return sq
        diff = p * p - q * q * d
        return sp if diff > 0 else (sq if diff < 0 else 0)

    def sign(self) -> int:
        """Exact sign under the real embedding with positive square roots."""
        a, b = self.a, self.b
        x0, x1, x2, x3 = self.coeffs
        su = self._sign_quadratic(x0, x1, a)
        sv = self._sign_quadratic(x2, x3, a)
        if sv == 0 or su == sv:
            return su or sv
        if su == 0:
            return sv
        # compare u^2 with b v^2, both in Q(sqrt a)
        u2_0, u2_1 = x0 * x0 + a * x1 * x1, 2 * x0 * x1
        v2_0, v2_1 = x2 * x2 + a * x3 * x3, 2 * x2 * x3
        s = self._sign_quadratic(u2_0 - b * v2_0, u2_1 - b * v2_1, a)
        return su if s > 0 else (sv if s < 0 else 0)

    def __lt__(self, other) -> bool:
        return (self - other).sign() < 0

    def __le__(self, other) -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other) -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other) -> bool:
        return (self - other).sign() >= 0

    def __abs__(self) -> BiQuadratic:
        return -self if self.sign() < 0 else self

    def __float__(self) -> float:
        sa, sb = math.sqrt(self.a), math.sqrt(self.b)
        x0, x1, x2, x3 = self.coeffs
        val = float(x0) + float(x1) * sa + float(x2) * sb + float(x3) * sa * sb
        return val

    def __repr__(self) -> str:
        return f"BiQuadratic({self.a}, {self.b}, {tuple(str(c) for c in self.coeffs)})"

    def __str__(self) -> str:
        from .expr_parser import format_scalar

        return format_scalar(self)


def field_of_radicands(radicands: Iterable[int]) -> tuple[int, int] | None:
    """Smallest biquadratic field containing ``sqrt(d)`` for every given square-free ``d``.

    Returns ``None`` when every ``d`` is 1.  The field is named by the two
    smallest non-trivial square-free integers in the multiplicative span of
    the radicands (modulo squares).  A single independent radicand ``d`` is
    paired with 2, or with 3 when ``d == 2``.

    Raises :class:`FieldMismatchError` when more than two independent radicals occur.
    """
    primes: list[int] = []
    vecs: set[frozenset[int]] = set()
    for d in radicands:
        if d == 1:
            continue
        ps = frozenset(p for p, _ in factorize(d))
        vecs.add(ps)
        for p in ps:
            if p not in primes:
                primes.append(p)
    if not vecs:
        return None
    # F2 span of the prime-support vectors
    span: set[frozenset[int]] = {frozenset()}
    for v in vecs:
        span |= {s ^ v for s in span}
    if len(span) > 4:
        raise FieldMismatchError("too many independent radicals")
    elems = sorted(math.prod(s) for s in span if s)
    if len(elems) == 1:
        d = elems[0]
        return (2, d) if d > 2 else (2, 3)
    return (elems[0], elems[1])


def common_field(values: Iterable) -> tuple[int, int] | None:
    """Smallest biquadratic field holding all given Rational/BiQuadratic values."""
    rads: set[int] = set()
    for v in values:
        if isinstance(v, BiQuadratic):
            rads.update(v.surd())
    return field_of_radicands(rads)


def to_field(x, field: tuple[int, int] | None):
    """Coerce a Rational or BiQuadratic into ``field`` (``None`` means Q)."""
    if field is None:
        if isinstance(x, BiQuadratic):
            if not x.is_rational():
                raise FieldMismatchError(f"{x!r} is not rational")
            return x.coeffs[0]
        return Fraction(x)
    if isinstance(x, BiQuadratic):
        return BiQuadratic.from_surd(field[0], field[1], x.surd())
    return BiQuadratic.from_rational(field[0], field[1], x)


# ---------------------------------------------------------------------------
# bivariate polynomials


Monomial = tuple[int, int]


class BiPolynomial:
    """Sparse polynomial in ``alpha`` and ``beta`` with rational coefficients.

    ``terms`` maps exponent pairs ``(i, j)`` to the coefficient of
    ``alpha**i * beta**j``.  Zero coefficients are never stored.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        t: dict[Monomial, Fraction] = {}
        for k, c in (terms or {}).items():
            c = Fraction(c)
            if c != 0:
                t[(int(k[0]), int(k[1]))] = c
        self.terms = t

    @classmethod
    def alpha(cls) -> BiPolynomial:
        return cls({(1, 0): 1})

    @classmethod
    def beta(cls) -> BiPolynomial:
        return cls({(0, 1): 1})

    @classmethod
    def const(cls, c) -> BiPolynomial:
        return cls({(0, 0): c})

    @staticmethod
    def _raw(terms: dict[Monomial, Fraction]) -> BiPolynomial:
        out = object.__new__(BiPolynomial)
        out.terms = terms
        return out

    def _coerce(self, other) -> BiPolynomial | None:
        if isinstance(other, BiPolynomial):
            return other
        q = _as_fraction(other)
        if q is None:
            return None
        return BiPolynomial.const(q)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        t = dict(self.terms)
        for k, c in o.terms.items():
            v = t.get(k, 0) + c
            if v:
                t[k] = v
            else:
                t.pop(k, None)
        return self._raw(t)

    __radd__ = __add__

    def __neg__(self) -> BiPolynomial:
        return self._raw({k: -c for k, c in self.terms.items()})

    def __pos__(self) -> BiPolynomial:
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, q) -> BiPolynomial:
        q = Fraction(q)
        if q == 0:
            return self._raw({})
        return self._raw({k: c * q for k, c in self.terms.items()})

    def __mul__(self, other):
        q = _as_fraction(other)
        if q is not None:
            return self.scale(q)
        if not isinstance(other, BiPolynomial):
            return NotImplemented
        t: dict[Monomial, Fraction] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                k = (i1 + i2, j1 + j2)
                t[k] = t.get(k, 0) + c1 * c2
        return self._raw({k: c for k, c in t.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        q = _as_fraction(other)
        if q is None:
            if isinstance(other, BiPolynomial) and other.is_constant():
                q = other.constant_term()
            else:
                return NotImplemented
        if q == 0:
            raise ZeroDivisionError("polynomial division by zero")
        return self.scale(1 / q)

    def __pow__(self, n: int) -> BiPolynomial:
        if not isinstance(n, numbers.Integral) or n < 0:
            return NotImplemented
        out = BiPolynomial.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self) -> int:
        if self.is_constant():
            return hash(self.constant_term())
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(k == (0, 0) for k in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0, 0), Fraction(0))

    def degree(self) -> int:
        return max((i + j for i, j in self.terms), default=-1)

    def eval(self, s, t):
        """Substitute ``alpha -> s`` and ``beta -> t`` (any backend)."""
        acc = 0
        for (i, j), c in sorted(self.terms.items()):
            acc = acc + (s ** i) * (t ** j) * c
        return acc

    def __repr__(self) -> str:
        return f"BiPolynomial({ {k: str(c) for k, c in sorted(self.terms.items())} })"

    def __str__(self) -> str:
        from .expr_parser import format_scalar

        return format_scalar(self)


ALPHA = BiPolynomial.alpha()
BETA = BiPolynomial.beta()


# ---------------------------------------------------------------------------
# backend-neutral helpers


def is_float_like(x) -> bool:
    return isinstance(x, float)


def to_float(x) -> float:
    """Real image of a scalar (positive square roots for radicals)."""
    if isinstance(x, BiPolynomial):
        if not x.is_constant():
            raise TypeError("cannot convert a non-constant polynomial to float")
        x = x.constant_term()
    v = float(x)
    if not math.isfinite(v):
        raise ValueError(f"non-finite float image {v}")
    return v


def is_zero(x, tol: float = FLOAT_TOL) -> bool:
    """Exact zero test; float values are compared against ``tol``."""
    if is_float_like(x):
        return abs(float(x)) <= tol
    return x == 0
