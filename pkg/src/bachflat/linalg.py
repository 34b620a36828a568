"""Small dense linear algebra over any scalar backend.

Exact backends (Fraction, BiQuadratic) pivot on the first non-zero entry;
float inputs use partial pivoting and an absolute threshold.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from .scalars import is_float_like

RANK_TOL = 1e-9


def _is_float_matrix(rows) -> bool:
    return any(is_float_like(x) for r in rows for x in r)


def _nz(x, floaty: bool, tol: float) -> bool:
    return abs(x) > tol if floaty else x != 0


def row_echelon(rows: Sequence[Sequence], tol: float = RANK_TOL) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; returns (rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    floaty = _is_float_matrix(m)
    ncol = len(m[0])
    pivots: list[int] = []
    r = 0
    for col in range(ncol):
        if r == len(m):
            break
        if floaty:
            best = max(range(r, len(m)), key=lambda i: abs(m[i][col]))
            piv = best if abs(m[best][col]) > tol else None
        else:
            piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][col]
        if isinstance(p, int):
            p = Fraction(p)
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and _nz(m[i][col], floaty, tol if floaty else 0):
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    return m, pivots


def rank(rows: Sequence[Sequence], tol: float = RANK_TOL) -> int:
    return len(row_echelon(rows, tol)[1])


def span_basis(vectors: Sequence[Sequence], tol: float = RANK_TOL) -> list[list]:
    """A basis (echelon rows) of the span of ``vectors``."""
    ech, piv = row_echelon(vectors, tol)
    return ech[: len(piv)]


def inverse(S) -> np.ndarray:
    """Inverse of a square matrix; raises ``ValueError`` when singular."""
    S = np.asarray(S, dtype=object)
    n = S.shape[0]
    aug = [list(S[i]) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    ech, piv = row_echelon(aug)
    if piv[:n] != list(range(n)):
        raise ValueError("singular matrix")
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            out[i, j] = ech[i][n + j]
    return out
