"""Weyl tensor and its self-dual / anti-self-dual halves in dimension four."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .lie import DIM
from .scalars import is_zero

# Hodge star for the orientation e1^e2^e3^e4 pairs the 2-forms
#   e12 <-> e34,  e13 <-> e42,  e14 <-> e23
# and the +1 / -1 eigenspaces are spanned by (e_ab +- e_cd) / sqrt 2.
_HODGE_PAIRS = (((0, 1), (2, 3)), ((0, 2), (3, 1)), ((0, 3), (1, 2)))
QUARTER = Fraction(1, 4)


def _delta(i: int, j: int) -> int:
    return 1 if i == j else 0


def weyl_tensor(R: np.ndarray, rho: np.ndarray, tau) -> np.ndarray:
    """Totally trace-free part of ``R`` (same index convention)."""
    W = np.full((DIM,) * 4, 0, dtype=object)
    t6 = tau * Fraction(1, 6)
    for i, j, k, l in np.ndindex(W.shape):
        ric = 0
        if j == l:
            ric = ric + rho[i, k]
        if j == k:
            ric = ric - rho[i, l]
        if i == k:
            ric = ric + rho[j, l]
        if i == l:
            ric = ric - rho[j, k]
        w = R[i, j, k, l] - ric * Fraction(1, 2)
        dd = _delta(i, k) * _delta(j, l) - _delta(i, l) * _delta(j, k)
        if dd:
            w = w + t6 * dd
        W[i, j, k, l] = w
    return W


def ricci_contraction(W: np.ndarray) -> np.ndarray:
    out = np.full((DIM, DIM), 0, dtype=object)
    for i in range(DIM):
        for j in range(DIM):
            out[i, j] = sum((W[k, i, k, j] for k in range(DIM)), 0)
    return out


def _two_forms(sign: int) -> list[dict[tuple[int, int], int]]:
    forms = []
    for (a, b), (c, d) in _HODGE_PAIRS:
        forms.append({(a, b): 1, (b, a): -1, (c, d): sign, (d, c): -sign})
    return forms


@dataclass(frozen=True)
class WeylHalf:
    """``plus`` / ``minus`` are the 3x3 matrices of W on the self-dual and
    anti-self-dual 2-forms (orientation e1^e2^e3^e4)."""

    plus: np.ndarray
    minus: np.ndarray


def half_matrix(W: np.ndarray, sign: int) -> np.ndarray:
    """Matrix of ``omega_ij -> sum_kl W_ijkl omega_kl`` on the unit (anti-)self-dual basis."""
    forms = _two_forms(sign)
    M = np.full((3, 3), 0, dtype=object)
    for a, fa in enumerate(forms):
        for b, fb in enumerate(forms):
            acc = 0
            for (i, j), x in fa.items():
                for (k, l), y in fb.items():
                    w = W[i, j, k, l]
                    if w != 0:
                        acc = acc + w * (x * y)
            # unit forms carry 1/sqrt 2 each; the operator convention adds 1/2
            M[a, b] = acc * QUARTER
    return M


def sd_asd_parts(W: np.ndarray) -> WeylHalf:
    return WeylHalf(half_matrix(W, +1), half_matrix(W, -1))


def is_zero_matrix(M: np.ndarray, tol: float = 1e-9) -> bool:
    return all(is_zero(x, tol) for x in np.asarray(M).flat)


# ---------------------------------------------------------------------------
# 3x3 symmetric eigenproblems


def char_poly(M: np.ndarray) -> tuple:
    """Coefficients ``(1, c2, c1, c0)`` of ``det(x I - M) = x^3 + c2 x^2 + c1 x + c0``."""
    m = M
    tr = m[0, 0] + m[1, 1] + m[2, 2]
    minors = (
        m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        + m[0, 0] * m[2, 2] - m[0, 2] * m[2, 0]
        + m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1]
    )
    det = (
        m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
        + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
    )
    return (1, -tr, minors, -det)


def eval_poly(coeffs, x):
    """Horner evaluation, highest degree first."""
    acc = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


def eigen3(M) -> tuple[float, float, float]:
    """Sorted eigenvalues of a real symmetric 3x3 matrix (trigonometric closed form)."""
    A = np.array([[float(x) for x in row] for row in np.asarray(M)], dtype=float)
    p1 = A[0, 1] ** 2 + A[0, 2] ** 2 + A[1, 2] ** 2
    q = np.trace(A) / 3.0
    if p1 == 0.0:
        return tuple(sorted(float(A[i, i]) for i in range(3)))
    p2 = (A[0, 0] - q) ** 2 + (A[1, 1] - q) ** 2 + (A[2, 2] - q) ** 2 + 2.0 * p1
    p = math.sqrt(p2 / 6.0)
    Bm = (A - q * np.eye(3)) / p
    r = np.linalg.det(Bm) / 2.0
    r = min(1.0, max(-1.0, r))
    phi = math.acos(r) / 3.0
    e1 = q + 2.0 * p * math.cos(phi)
    e3 = q + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)
    e2 = 3.0 * q - e1 - e3
    return tuple(sorted((float(e1), float(e2), float(e3))))
