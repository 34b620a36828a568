"""Levi-Civita connection and curvature of a left-invariant orthonormal frame.

Conventions (0-based arrays):

* ``gamma[i, h, q] = <nabla_{e_i} e_h, e_q>``; as connection 1-forms this is
  ``omega_h^q(e_i)``.
* ``R[i, j, k, l] = <R(e_i, e_j) e_l, e_k>`` with
  ``R(X, Y) = [nabla_X, nabla_Y] - nabla_[X,Y]``, so ``R[i, j, i, j]`` is the
  sectional curvature of the plane ``e_i ^ e_j``.
* ``rho[i, j] = sum_k R[k, i, k, j]``, ``tau = trace(rho)``.

Every routine works on object arrays of exact scalars as well as on floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .lie import DIM, StructureConstants

HALF = Fraction(1, 2)


def _obj(shape) -> np.ndarray:
    return np.full(shape, 0, dtype=object)


def as_object(a: np.ndarray) -> np.ndarray:
    """Object array of Python scalars (float64 input becomes Python floats)."""
    if a.dtype == object:
        return a
    return np.array(a.tolist(), dtype=object)


@dataclass(frozen=True)
class RicciScalar:
    rho: np.ndarray
    tau: object


def levi_civita(C: StructureConstants) -> np.ndarray:
    """Koszul formula: ``2 gamma[i,h,q] = c^q_{ih} - c^i_{hq} + c^h_{qi}``."""
    c = as_object(C.c)
    g = _obj((DIM, DIM, DIM))
    for i in range(DIM):
        for h in range(DIM):
            for q in range(DIM):
                v = c[i, h, q] - c[h, q, i] + c[q, i, h]
                if v != 0:
                    g[i, h, q] = v * HALF
    return g


def riemann(gamma: np.ndarray, C: StructureConstants) -> np.ndarray:
    c = as_object(C.c)
    # V[i, j, l, q] = <R(e_i, e_j) e_l, e_q>
    R = _obj((DIM,) * 4)
    for i in range(DIM):
        for j in range(i + 1, DIM):
            for l in range(DIM):
                for q in range(DIM):
                    acc = 0
                    for m in range(DIM):
                        a, b = gamma[j, l, m], gamma[i, m, q]
                        if a != 0 and b != 0:
                            acc = acc + a * b
                        a, b = gamma[i, l, m], gamma[j, m, q]
                        if a != 0 and b != 0:
                            acc = acc - a * b
                        a, b = c[i, j, m], gamma[m, l, q]
                        if a != 0 and b != 0:
                            acc = acc - a * b
                    R[i, j, q, l] = acc
                    R[j, i, q, l] = -acc
    return R


def ricci_scalar(R: np.ndarray) -> RicciScalar:
    rho = _obj((DIM, DIM))
    for i in range(DIM):
        for j in range(DIM):
            acc = 0
            for k in range(DIM):
                if R[k, i, k, j] != 0:
                    acc = acc + R[k, i, k, j]
            rho[i, j] = acc
    tau = sum((rho[i, i] for i in range(DIM)), 0)
    return RicciScalar(rho, tau)


@dataclass(frozen=True)
class Curvature:
    """Connection and curvature of one metric Lie algebra."""

    C: StructureConstants
    gamma: np.ndarray
    R: np.ndarray
    rho: np.ndarray
    tau: object


def curvature(C: StructureConstants) -> Curvature:
    gamma = levi_civita(C)
    R = riemann(gamma, C)
    rs = ricci_scalar(R)
    return Curvature(C, gamma, R, rs.rho, rs.tau)


def riemann_symmetry_defects(R: np.ndarray) -> list:
    """All entries that must vanish for a curvature tensor (pair symmetries, first Bianchi)."""
    out = []
    for i, j, k, l in np.ndindex(R.shape):
        out.append(R[i, j, k, l] + R[j, i, k, l])
        out.append(R[i, j, k, l] + R[i, j, l, k])
        out.append(R[i, j, k, l] - R[k, l, i, j])
        out.append(R[i, j, k, l] + R[j, k, i, l] + R[k, i, j, l])
    return out
