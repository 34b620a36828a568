"""Four-dimensional metric Lie algebras given by structure constants.

The basis ``e_1..e_4`` is always orthonormal.  Internally indices are
0-based; everything user facing (files, reports, violation lists) is 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import linalg
from .scalars import ALPHA, BETA, BiQuadratic, is_float_like, is_zero

DIM = 4


class JacobiError(ValueError):
    """Structure constants that violate the Jacobi identity."""

    def __init__(self, violations):
        self.violations = violations
        super().__init__(f"Jacobi identity fails at (i,j,k,l) = {violations[:6]}")


@dataclass(frozen=True)
class StructureConstants:
    """``c[i, j, k]`` is the coefficient of ``e_k`` in ``[e_i, e_j]``.

    ``c`` is a (4, 4, 4) array, either float64 or object-valued with exact
    scalars.  Antisymmetry in ``(i, j)`` is checked on construction.
    """

    c: np.ndarray

    def __post_init__(self):
        c = self.c
        if c.shape != (DIM, DIM, DIM):
            raise ValueError(f"structure constants must have shape (4, 4, 4), got {c.shape}")
        for i in range(DIM):
            for j in range(DIM):
                for k in range(DIM):
                    if not is_zero(c[i, j, k] + c[j, i, k]):
                        raise ValueError("structure constants are not antisymmetric")

    @property
    def is_float(self) -> bool:
        return self.c.dtype != object

    def bracket(self, x, y) -> list:
        """``[x, y]`` for coordinate vectors ``x``, ``y``."""
        out = []
        for k in range(DIM):
            acc = 0
            for i in range(DIM):
                if is_zero(x[i]):
                    continue
                for j in range(DIM):
                    if is_zero(y[j]) or is_zero(self.c[i, j, k]):
                        continue
                    acc = acc + x[i] * y[j] * self.c[i, j, k]
            out.append(acc)
        return out

    def to_float(self) -> StructureConstants:
        if self.is_float:
            return self
        return StructureConstants(np.vectorize(float, otypes=[float])(self.c))

    def map(self, f) -> StructureConstants:
        """Apply ``f`` to every entry (e.g. substitution into polynomials)."""
        out = np.empty_like(self.c, dtype=object)
        for idx in np.ndindex(self.c.shape):
            out[idx] = f(self.c[idx])
        return StructureConstants(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, StructureConstants):
            return NotImplemented
        return all(self.c[idx] == other.c[idx] for idx in np.ndindex(self.c.shape))

    def allclose(self, other: StructureConstants, tol: float = 1e-9) -> bool:
        return bool(np.allclose(self.to_float().c, other.to_float().c, atol=tol, rtol=0))

    __hash__ = None


def from_brackets(brackets: dict, zero=0) -> StructureConstants:
    """Build from ``{(i, j): {k: coeff}}`` with 1-based indices, ``[e_i, e_j] = sum coeff e_k``."""
    c = np.full((DIM, DIM, DIM), zero, dtype=object)
    for (i, j), vec in brackets.items():
        for k, v in vec.items():
            c[i - 1, j - 1, k - 1] = c[i - 1, j - 1, k - 1] + v
            c[j - 1, i - 1, k - 1] = c[j - 1, i - 1, k - 1] - v
    return StructureConstants(c)


def zeros_like(C: StructureConstants) -> StructureConstants:
    return StructureConstants(np.zeros((DIM, DIM, DIM)) if C.is_float else np.full((DIM,) * 3, 0, dtype=object))


def abelian() -> StructureConstants:
    return StructureConstants(np.full((DIM, DIM, DIM), 0, dtype=object))


# ---------------------------------------------------------------------------
# validity and invariants


def jacobi_sums(C: StructureConstants) -> dict[tuple[int, int, int, int], object]:
    """Jacobi sums for ``i < j < k`` (0-based keys), components ``l``."""
    c = C.c
    out = {}
    for i, j, k in combinations(range(DIM), 3):
        for l in range(DIM):
            acc = 0
            for m in range(DIM):
                acc = acc + c[i, j, m] * c[m, k, l] + c[j, k, m] * c[m, i, l] + c[k, i, m] * c[m, j, l]
            out[(i, j, k, l)] = acc
    return out


def jacobi_check(C: StructureConstants, tol: float = 1e-9) -> tuple[bool, list[tuple[int, int, int, int]]]:
    """Return ``(ok, violations)``; violations are 1-based ``(i, j, k, l)``."""
    bad = [
        tuple(x + 1 for x in key)
        for key, v in jacobi_sums(C).items()
        if not is_zero(v, tol)
    ]
    return (not bad, bad)


def require_jacobi(C: StructureConstants) -> None:
    ok, bad = jacobi_check(C)
    if not ok:
        raise JacobiError(bad)


def ad_traces(C: StructureConstants) -> list:
    """``trace(ad e_i) = sum_k c^k_{ik}``."""
    return [sum((C.c[i, k, k] for k in range(DIM)), 0) for i in range(DIM)]


@dataclass(frozen=True)
class AlgebraDescriptor:
    unimodular: bool
    derived_dims: tuple[int, ...]
    lower_central_dims: tuple[int, ...]
    nilpotent: bool
    solvable: bool


def _bracket_span(C: StructureConstants, U: list, V: list) -> list:
    vecs = [C.bracket(u, v) for u in U for v in V]
    vecs = [v for v in vecs if not all(is_zero(x) for x in v)]
    return linalg.span_basis(vecs) if vecs else []


def _series(C: StructureConstants, derived: bool) -> tuple[int, ...]:
    one = 1.0 if C.is_float else 1
    full = [[one if i == j else 0 * one for j in range(DIM)] for i in range(DIM)]
    cur = full
    dims = [DIM]
    while cur:
        nxt = _bracket_span(C, cur, cur if derived else full)
        if len(nxt) == len(cur):
            break
        cur = nxt
        dims.append(len(cur))
    return tuple(dims)


def descriptor(C: StructureConstants) -> AlgebraDescriptor:
    """Unimodularity and derived / lower central series dimensions."""
    if any(not (is_float_like(x) or isinstance(x, (int, Fraction, BiQuadratic))) for x in C.c.flat):
        raise TypeError("descriptor needs a field backend (rational, biquadratic or float)")
    derived = _series(C, True)
    lower = _series(C, False)
    return AlgebraDescriptor(
        unimodular=all(is_zero(t) for t in ad_traces(C)),
        derived_dims=derived,
        lower_central_dims=lower,
        nilpotent=lower[-1] == 0,
        solvable=derived[-1] == 0,
    )


# ---------------------------------------------------------------------------
# named algebras


def family_algebra(alpha=ALPHA, beta=BETA) -> StructureConstants:
    """The family with ``[e2,e1] = a e2, [e3,e1] = b e3, [e4,e1] = (a+b) e4, [e3,e2] = e4``.

    With no arguments the constants are symbolic polynomials in alpha, beta.
    """
    C = from_brackets(
        {
            (2, 1): {2: alpha},
            (3, 1): {3: beta},
            (4, 1): {4: alpha + beta},
            (3, 2): {4: 1},
        }
    )
    if is_float_like(alpha) or is_float_like(beta):
        return C.to_float()
    return C


_S2 = BiQuadratic.sqrt_of(2, 3, 2)
_S3 = BiQuadratic.sqrt_of(2, 3, 3)


def r1() -> BiQuadratic:
    """``(3 sqrt 2 - sqrt 10) / 8``, the positive root of 8x^4 - 7x^2 + 1/8 below 1/2."""
    return BiQuadratic(2, 5, (0, Fraction(3, 8), 0, Fraction(-1, 8)))


def r2() -> BiQuadratic:
    """``-(3 sqrt 2 + sqrt 10) / 8``."""
    return BiQuadratic(2, 5, (0, Fraction(-3, 8), 0, Fraction(-1, 8)))


def thm1_algebra() -> StructureConstants:
    return family_algebra(r1(), r2())


def _from_dsys_coeffs(dsys: dict, field: tuple[int, int] | None) -> StructureConstants:
    """``dsys[i] = {(j, k): a}`` meaning ``de^i = sum a e^j ^ e^k`` (1-based)."""
    zero = BiQuadratic(*field) if field else 0
    c = np.full((DIM, DIM, DIM), zero, dtype=object)
    for i, terms in dsys.items():
        for (j, k), a in terms.items():
            c[j - 1, k - 1, i - 1] = -a
            c[k - 1, j - 1, i - 1] = a
    return StructureConstants(c)


def thm2_algebra() -> StructureConstants:
    """Two-step solvable example over Q(sqrt 2, sqrt 3)."""
    inv_s3 = _S3 / 3
    return _from_dsys_coeffs(
        {
            3: {(1, 3): _S2, (2, 3): 1, (2, 4): -inv_s3},
            4: {(1, 4): _S2, (2, 4): -1, (2, 3): inv_s3},
        },
        (2, 3),
    )


def rescaled_algebra() -> StructureConstants:
    """The rotated and rescaled form of g_(r1,r2) over Q(sqrt 2, sqrt 5)."""
    s2 = BiQuadratic.sqrt_of(2, 5, 2)
    s5 = BiQuadratic.sqrt_of(2, 5, 5)
    return _from_dsys_coeffs(
        {
            2: {(1, 3): 1},
            3: {(1, 2): 1, (1, 3): s5},
            4: {(1, 4): s5, (2, 3): 2 * s2},
        },
        (2, 5),
    )


# ---------------------------------------------------------------------------
# basis changes


def change_basis(C: StructureConstants, S) -> StructureConstants:
    """Constants in the basis ``f_a = sum_i S[i, a] e_i``.

    The new basis is declared orthonormal, so for orthogonal ``S`` the
    metric Lie algebra is unchanged up to isometry.
    """
    S = np.asarray(S, dtype=object if not C.is_float else float)
    if C.is_float:
        Sinv = np.linalg.inv(S)
        return StructureConstants(np.einsum("ia,jb,ijk,ck->abc", S, S, C.c, Sinv))
    Sinv = linalg.inverse(S)
    c = C.c
    out = np.full((DIM, DIM, DIM), 0, dtype=object)
    # t[a, b, k] = sum_ij S[i,a] S[j,b] c[i,j,k]
    t = np.full((DIM, DIM, DIM), 0, dtype=object)
    for a in range(DIM):
        for b in range(DIM):
            for i in range(DIM):
                if S[i, a] == 0:
                    continue
                for j in range(DIM):
                    if S[j, b] == 0:
                        continue
                    for k in range(DIM):
                        if c[i, j, k] == 0:
                            continue
                        t[a, b, k] = t[a, b, k] + S[i, a] * S[j, b] * c[i, j, k]
    for a in range(DIM):
        for b in range(DIM):
            for cc in range(DIM):
                acc = 0
                for k in range(DIM):
                    if t[a, b, k] == 0 or Sinv[cc, k] == 0:
                        continue
                    acc = acc + t[a, b, k] * Sinv[cc, k]
                out[a, b, cc] = acc
    return StructureConstants(out)


def iso_witness(kind: str, lam=None) -> np.ndarray:
    """Basis-change matrix realizing a named isomorphism of the family.

    ``"P"``  scales ``e_1`` by ``lam``: family(a, b) -> family(lam a, lam b).
    ``"Q"``  swaps ``e_2, e_3`` and negates ``e_4``: family(a, b) -> family(b, a).
    ``"Neg"`` negates ``e_1``: family(a, b) -> family(-a, -b), an isometry.
    """
    M = np.array([[1 if i == j else 0 for j in range(DIM)] for i in range(DIM)], dtype=object)
    if kind == "P":
        if lam is None or lam == 0:
            raise ValueError("P needs a non-zero lambda")
        M[0, 0] = lam
    elif kind == "Q":
        M[1, 1] = M[2, 2] = 0
        M[1, 2] = M[2, 1] = 1
        M[3, 3] = -1
    elif kind == "Neg":
        M[0, 0] = -1
    else:
        raise ValueError(f"unknown isomorphism kind {kind!r}")
    return M


def is_orthogonal(S, tol: float = 1e-9) -> bool:
    S = np.asarray(S)
    prod = S.T.dot(S)
    return all(is_zero(prod[i, j] - (1 if i == j else 0), tol) for i in range(DIM) for j in range(DIM))
