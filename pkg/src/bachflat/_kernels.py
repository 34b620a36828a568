"""Float64 curvature kernels for batches of structure constants.

Two interchangeable implementations compute the same arrays:

* ``numba``: per-algebra loops compiled with ``@njit``;
* ``numpy``: batched ``einsum`` contractions.

The numba path is used when numba imports and ``BACHFLAT_DISABLE_NUMBA`` is
unset (or ``0``).  Array layouts follow :mod:`bachflat.curvature`.
"""

from __future__ import annotations

import os

import numpy as np

try:  # pragma: no cover - exercised implicitly
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

_CHUNK = 4096


def numba_enabled() -> bool:
    return HAVE_NUMBA and os.environ.get("BACHFLAT_DISABLE_NUMBA", "0") in ("", "0")


def backend_name() -> str:
    return "numba" if numba_enabled() else "numpy"


# ---------------------------------------------------------------------------
# numpy implementation


def _np_connection(c):
    return 0.5 * (c - np.einsum("nhqi->nihq", c) + np.einsum("nqih->nihq", c))


def _np_curvature(c):
    G = _np_connection(c)
    V = (
        np.einsum("njlm,nimq->nijlq", G, G)
        - np.einsum("nilm,njmq->nijlq", G, G)
        - np.einsum("nijm,nmlq->nijlq", c, G)
    )
    R = np.einsum("nijlk->nijkl", V)
    rho = np.einsum("nkikj->nij", R)
    tau = np.einsum("nii->n", rho)
    return G, R, rho, tau


def _np_bach(G, rho, tau):
    d1 = -(np.einsum("npiq,nqj->npij", G, rho) + np.einsum("npjq,niq->npij", G, rho))
    d2 = -(
        np.einsum("npqm,nmij->npqij", G, d1)
        + np.einsum("npim,nqmj->npqij", G, d1)
        + np.einsum("npjm,nqim->npqij", G, d1)
    )
    eye = np.eye(4)
    norm2 = np.einsum("nrs,nrs->n", rho, rho)
    B = (
        np.einsum("npjip->nij", d2)
        - 0.5 * np.einsum("nppij->nij", d2)
        + (tau / 3.0)[:, None, None] * rho
        - np.einsum("npi,npj->nij", rho, rho)
        + ((3.0 * norm2 - tau**2) / 12.0)[:, None, None] * eye
    )
    return B


def _np_weyl(R, rho, tau):
    d = np.eye(4)
    ric = (
        np.einsum("nik,jl->nijkl", rho, d)
        - np.einsum("nil,jk->nijkl", rho, d)
        + np.einsum("njl,ik->nijkl", rho, d)
        - np.einsum("njk,il->nijkl", rho, d)
    )
    dd = np.einsum("ik,jl->ijkl", d, d) - np.einsum("il,jk->ijkl", d, d)
    return R - 0.5 * ric + (tau / 6.0)[:, None, None, None, None] * dd


def _np_div4(G, W):
    return -(
        np.einsum("nihq,nqkpi->nhkp", G, W)
        + np.einsum("nikq,nhqpi->nhkp", G, W)
        + np.einsum("nipq,nhkqi->nhkp", G, W)
        + np.einsum("niiq,nhkpq->nhkp", G, W)
    )


def numpy_curvature_batch(c: np.ndarray) -> dict[str, np.ndarray]:
    c = np.asarray(c, dtype=float)
    G, R, rho, tau = _np_curvature(c)
    W = _np_weyl(R, rho, tau)
    return {
        "gamma": G,
        "R": R,
        "rho": rho,
        "tau": tau,
        "W": W,
        "B": _np_bach(G, rho, tau),
        "D": _np_div4(G, W),
    }


def numpy_bach_batch(c: np.ndarray) -> np.ndarray:
    c = np.asarray(c, dtype=float)
    out = np.empty((c.shape[0], 4, 4))
    for s in range(0, c.shape[0], _CHUNK):
        G, _, rho, tau = _np_curvature(c[s : s + _CHUNK])
        out[s : s + _CHUNK] = _np_bach(G, rho, tau)
    return out


# ---------------------------------------------------------------------------
# numba implementation

if HAVE_NUMBA:

    @njit(cache=True)
    def _nb_connection(c, G):
        for i in range(4):
            for h in range(4):
                for q in range(4):
                    G[i, h, q] = 0.5 * (c[i, h, q] - c[h, q, i] + c[q, i, h])

    @njit(cache=True)
    def _nb_riemann(c, G, R, rho):
        for i in range(4):
            for j in range(4):
                for l in range(4):
                    for q in range(4):
                        acc = 0.0
                        for m in range(4):
                            acc += G[j, l, m] * G[i, m, q] - G[i, l, m] * G[j, m, q] - c[i, j, m] * G[m, l, q]
                        R[i, j, q, l] = acc
        for i in range(4):
            for j in range(4):
                acc = 0.0
                for k in range(4):
                    acc += R[k, i, k, j]
                rho[i, j] = acc
        tau = 0.0
        for i in range(4):
            tau += rho[i, i]
        return tau

    @njit(cache=True)
    def _nb_bach(G, rho, tau, d1, d2, B):
        for p in range(4):
            for i in range(4):
                for j in range(4):
                    acc = 0.0
                    for q in range(4):
                        acc -= G[p, i, q] * rho[q, j] + G[p, j, q] * rho[i, q]
                    d1[p, i, j] = acc
        for p in range(4):
            for q in range(4):
                for i in range(4):
                    for j in range(4):
                        acc = 0.0
                        for m in range(4):
                            acc -= G[p, q, m] * d1[m, i, j] + G[p, i, m] * d1[q, m, j] + G[p, j, m] * d1[q, i, m]
                        d2[p, q, i, j] = acc
        norm2 = 0.0
        for r in range(4):
            for s in range(4):
                norm2 += rho[r, s] * rho[r, s]
        trace_term = (3.0 * norm2 - tau * tau) / 12.0
        for i in range(4):
            for j in range(4):
                acc = tau * rho[i, j] / 3.0
                for p in range(4):
                    acc += d2[p, j, i, p] - 0.5 * d2[p, p, i, j] - rho[p, i] * rho[p, j]
                if i == j:
                    acc += trace_term
                B[i, j] = acc

    @njit(cache=True)
    def _nb_weyl(R, rho, tau, W):
        for i in range(4):
            for j in range(4):
                for k in range(4):
                    for l in range(4):
                        ric = 0.0
                        if j == l:
                            ric += rho[i, k]
                        if j == k:
                            ric -= rho[i, l]
                        if i == k:
                            ric += rho[j, l]
                        if i == l:
                            ric -= rho[j, k]
                        dd = 0.0
                        if i == k and j == l:
                            dd += 1.0
                        if i == l and j == k:
                            dd -= 1.0
                        W[i, j, k, l] = R[i, j, k, l] - 0.5 * ric + tau / 6.0 * dd

    @njit(cache=True)
    def _nb_div4(G, W, D):
        for h in range(4):
            for k in range(4):
                for p in range(4):
                    acc = 0.0
                    for i in range(4):
                        for q in range(4):
                            acc += (
                                G[i, h, q] * W[q, k, p, i]
                                + G[i, k, q] * W[h, q, p, i]
                                + G[i, p, q] * W[h, k, q, i]
                                + G[i, i, q] * W[h, k, p, q]
                            )
                    D[h, k, p] = -acc

    @njit(cache=True)
    def _nb_curvature_batch(c, G, R, rho, tau, W, B, D):
        d1 = np.empty((4, 4, 4))
        d2 = np.empty((4, 4, 4, 4))
        for n in range(c.shape[0]):
            _nb_connection(c[n], G[n])
            t = _nb_riemann(c[n], G[n], R[n], rho[n])
            tau[n] = t
            _nb_weyl(R[n], rho[n], t, W[n])
            _nb_bach(G[n], rho[n], t, d1, d2, B[n])
            _nb_div4(G[n], W[n], D[n])

    @njit(cache=True)
    def _nb_bach_batch(c, B):
        G = np.empty((4, 4, 4))
        R = np.empty((4, 4, 4, 4))
        rho = np.empty((4, 4))
        d1 = np.empty((4, 4, 4))
        d2 = np.empty((4, 4, 4, 4))
        for n in range(c.shape[0]):
            _nb_connection(c[n], G)
            t = _nb_riemann(c[n], G, R, rho)
            _nb_bach(G, rho, t, d1, d2, B[n])


def numba_curvature_batch(c: np.ndarray) -> dict[str, np.ndarray]:
    if not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    c = np.ascontiguousarray(c, dtype=float)
    n = c.shape[0]
    out = {
        "gamma": np.empty((n, 4, 4, 4)),
        "R": np.empty((n, 4, 4, 4, 4)),
        "rho": np.empty((n, 4, 4)),
        "tau": np.empty(n),
        "W": np.empty((n, 4, 4, 4, 4)),
        "B": np.empty((n, 4, 4)),
        "D": np.empty((n, 4, 4, 4)),
    }
    _nb_curvature_batch(c, out["gamma"], out["R"], out["rho"], out["tau"], out["W"], out["B"], out["D"])
    return out


def numba_bach_batch(c: np.ndarray) -> np.ndarray:
    if not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    c = np.ascontiguousarray(c, dtype=float)
    B = np.empty((c.shape[0], 4, 4))
    _nb_bach_batch(c, B)
    return B


# ---------------------------------------------------------------------------
# dispatch


def curvature_batch(c: np.ndarray) -> dict[str, np.ndarray]:
    """All float tensors for a batch ``c`` of shape ``(N, 4, 4, 4)``."""
    if numba_enabled():
        return numba_curvature_batch(c)
    return numpy_curvature_batch(c)


def bach_batch(c: np.ndarray) -> np.ndarray:
    """Bach tensors, shape ``(N, 4, 4)``."""
    if numba_enabled():
        return numba_bach_batch(c)
    return numpy_bach_batch(c)


def family_batch(alpha: np.ndarray, beta: np.ndarray) -> np.ndarray:
    """Structure constants of the family for arrays of parameters."""
    alpha = np.asarray(alpha, dtype=float).ravel()
    beta = np.asarray(beta, dtype=float).ravel()
    c = np.zeros((alpha.size, 4, 4, 4))
    c[:, 1, 0, 1], c[:, 0, 1, 1] = alpha, -alpha
    c[:, 2, 0, 2], c[:, 0, 2, 2] = beta, -beta
    c[:, 3, 0, 3], c[:, 0, 3, 3] = alpha + beta, -(alpha + beta)
    c[:, 2, 1, 3], c[:, 1, 2, 3] = 1.0, -1.0
    return c


def family_bach_norm2(alpha: np.ndarray, beta: np.ndarray) -> np.ndarray:
    """``|B|^2`` (sum of squared entries) on the family, same shape as ``alpha``."""
    shape = np.shape(alpha)
    B = bach_batch(family_batch(alpha, beta))
    return np.einsum("nij,nij->n", B, B).reshape(shape)


_PAIRS = (((0, 1), (2, 3)), ((0, 2), (3, 1)), ((0, 3), (1, 2)))


def _forms(sign: float) -> np.ndarray:
    U = np.zeros((3, 4, 4))
    for a, ((i, j), (k, l)) in enumerate(_PAIRS):
        U[a, i, j], U[a, j, i] = 1.0, -1.0
        U[a, k, l], U[a, l, k] = sign, -sign
    return U


_UP, _UM = _forms(1.0), _forms(-1.0)


def weyl_halves_batch(W: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Float counterpart of :func:`bachflat.weyl.sd_asd_parts` for a batch."""
    plus = 0.25 * np.einsum("aij,nijkl,bkl->nab", _UP, W, _UP)
    minus = 0.25 * np.einsum("aij,nijkl,bkl->nab", _UM, W, _UM)
    return plus, minus
