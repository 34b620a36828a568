"""Covariant derivatives of the Ricci tensor and the Bach tensor.

All components are constant on a left-invariant frame, so covariant
derivatives only involve connection coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .lie import DIM


@dataclass(frozen=True)
class CovRicci:
    d1: np.ndarray  # d1[p, i, j] = (nabla_p rho)_{ij}
    d2: np.ndarray  # d2[p, q, i, j] = (nabla_p nabla_q rho)_{ij}


def cov_ricci(gamma: np.ndarray, rho: np.ndarray) -> CovRicci:
    d1 = np.full((DIM,) * 3, 0, dtype=object)
    for p, i, j in np.ndindex(d1.shape):
        acc = 0
        for q in range(DIM):
            g = gamma[p, i, q]
            if g != 0:
                acc = acc - g * rho[q, j]
            g = gamma[p, j, q]
            if g != 0:
                acc = acc - g * rho[i, q]
        d1[p, i, j] = acc
    d2 = np.full((DIM,) * 4, 0, dtype=object)
    for p, q, i, j in np.ndindex(d2.shape):
        acc = 0
        for m in range(DIM):
            g = gamma[p, q, m]
            if g != 0:
                acc = acc - g * d1[m, i, j]
            g = gamma[p, i, m]
            if g != 0:
                acc = acc - g * d1[q, m, j]
            g = gamma[p, j, m]
            if g != 0:
                acc = acc - g * d1[q, i, m]
        d2[p, q, i, j] = acc
    return CovRicci(d1, d2)


def bach_tensor(rho: np.ndarray, tau, d2: np.ndarray) -> np.ndarray:
    """``B_ij = sum_p nabla_p nabla_j rho_ip - 1/2 sum_p nabla_p nabla_p rho_ij
    + tau rho_ij / 3 - sum_p rho_pi rho_pj + (3 |rho|^2 - tau^2) delta_ij / 12``."""
    norm2 = 0
    for r, s in np.ndindex(rho.shape):
        norm2 = norm2 + rho[r, s] * rho[r, s]
    trace_term = (norm2 * 3 - tau * tau) * Fraction(1, 12)
    B = np.full((DIM, DIM), 0, dtype=object)
    for i in range(DIM):
        for j in range(DIM):
            acc = 0
            for p in range(DIM):
                acc = acc + d2[p, j, i, p] - d2[p, p, i, j] * Fraction(1, 2) - rho[p, i] * rho[p, j]
            acc = acc + tau * rho[i, j] * Fraction(1, 3)
            if i == j:
                acc = acc + trace_term
            B[i, j] = acc
    return B


def divergence_einstein(gamma: np.ndarray, rho: np.ndarray, tau) -> np.ndarray:
    """``sum_p nabla_p (rho - tau g / 2)_{pj}``; vanishes by the contracted Bianchi identity."""
    G = np.array(rho, dtype=object)
    for i in range(DIM):
        G[i, i] = G[i, i] - tau * Fraction(1, 2)
    d1 = cov_ricci(gamma, G).d1
    return np.array([sum((d1[p, p, j] for p in range(DIM)), 0) for j in range(DIM)], dtype=object)


def _cov_float(gamma: np.ndarray, T: np.ndarray) -> np.ndarray:
    """``(nabla_p T)_{a...}`` for a constant-component tensor, new index first."""
    letters = "abcdefgh"[: T.ndim]
    out = np.zeros((DIM,) + T.shape)
    for s in range(T.ndim):
        src = letters[:s] + "m" + letters[s + 1 :]
        out -= np.einsum(f"p{letters[s]}m,{src}->p{letters}", gamma, T)
    return out


def weyl_bach_float(gamma: np.ndarray, rho: np.ndarray, W: np.ndarray) -> np.ndarray:
    """``sum_kl nabla_k nabla_l W_kijl + 1/2 rho_kl W_kijl`` on float arrays.

    An independent route to the Bach tensor used as a cross-check; with the
    conventions of this package it equals :func:`bach_tensor` exactly.
    """
    g = np.asarray(gamma, dtype=float)
    W = np.asarray(W, dtype=float)
    d2 = _cov_float(g, _cov_float(g, W))
    return np.einsum("klkijl->ij", d2) + 0.5 * np.einsum("kl,kijl->ij", np.asarray(rho, dtype=float), W)
