"""Divergence of the Weyl tensor and the conformally-Einstein obstruction.

A 4-manifold can only be locally conformally Einstein if some non-zero
vector ``T`` solves ``(div W)(X, Y, Z) = W(X, Y, Z, T)``.  We assemble this
as a linear system in the components of ``T`` and decide it exactly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg
from .lie import DIM
from .scalars import FLOAT_TOL, is_float_like, is_zero


def div4_weyl(gamma: np.ndarray, W: np.ndarray) -> np.ndarray:
    """``D[h,k,p] = -sum_{i,q} [w_h^q(e_i) W_qkpi + w_k^q(e_i) W_hqpi
    + w_p^q(e_i) W_hkqi + w_i^q(e_i) W_hkpq]`` with ``w_h^q(e_i) = gamma[i,h,q]``."""
    D = np.full((DIM,) * 3, 0, dtype=object)
    for h, k, p in np.ndindex(D.shape):
        acc = 0
        for i in range(DIM):
            for q in range(DIM):
                g = gamma[i, h, q]
                if g != 0:
                    acc = acc + g * W[q, k, p, i]
                g = gamma[i, k, q]
                if g != 0:
                    acc = acc + g * W[h, q, p, i]
                g = gamma[i, p, q]
                if g != 0:
                    acc = acc + g * W[h, k, q, i]
                g = gamma[i, i, q]
                if g != 0:
                    acc = acc + g * W[h, k, p, q]
        D[h, k, p] = -acc
    return D


class Status(enum.Enum):
    INCONSISTENT = "INCONSISTENT"
    ONLY_ZERO = "ONLY_ZERO"
    NONZERO_T = "NONZERO_T"


@dataclass(frozen=True)
class ObstructionVerdict:
    """Outcome of the linear system ``W(e_h, e_k, e_p, T) = D_hkp``.

    For ``INCONSISTENT``, ``certificate`` lists (1-based) the equations
    whose consistent solution set is violated by the last listed equation,
    and ``support`` the equations that combine into ``0 = non-zero``.
    """

    status: Status
    witness: tuple | None = None
    certificate: tuple[tuple[int, int, int], ...] = ()
    support: tuple[tuple[int, int, int], ...] = ()
    unconstrained: bool = False
    rank: int = 0
    equations: int = 0
    residual: float = 0.0
    notes: list[str] = field(default_factory=list)

    @property
    def verdict_text(self) -> str:
        if self.status is Status.INCONSISTENT:
            return "not locally conformally Einstein"
        return "inconclusive (candidate T exists)"


def obstruction_system(W: np.ndarray, D: np.ndarray):
    """Rows ``(coeffs, rhs, label)`` enumerated over ``h < k`` then ``p``."""
    rows = []
    for h in range(DIM):
        for k in range(h + 1, DIM):
            for p in range(DIM):
                coeffs = [W[h, k, p, l] for l in range(DIM)]
                rows.append((coeffs, D[h, k, p], (h + 1, k + 1, p + 1)))
    return rows


def _scale(row: list) -> float:
    return max((abs(float(x)) for x in row), default=0.0)


def ce_obstruction(W: np.ndarray, D: np.ndarray, tol: float = FLOAT_TOL) -> ObstructionVerdict:
    rows = obstruction_system(W, D)
    floaty = any(is_float_like(x) for coeffs, rhs, _ in rows for x in list(coeffs) + [rhs])

    def nz(x) -> bool:
        return abs(x) > tol if floaty else x != 0

    # incremental fraction-free elimination; each pivot row remembers which
    # original equations it is built from
    pivots: list[tuple[int, list, frozenset, tuple]] = []
    for coeffs, rhs, label in rows:
        r = list(coeffs) + [rhs]
        if floaty:
            r = [float(x) for x in r]
        used = {label}
        for col, prow, deps, _ in pivots:
            if nz(r[col]):
                f, pc = r[col], prow[col]
                r = [pc * a - f * b for a, b in zip(r, prow)]
                used |= deps
                if floaty:
                    s = _scale(r)
                    r = [x / s for x in r] if s > 0 else r
        lead = next((c for c in range(DIM) if nz(r[c])), None)
        if lead is None:
            if nz(r[DIM]):
                order = [l for _, _, _, l in pivots] + [label]
                return ObstructionVerdict(
                    Status.INCONSISTENT,
                    certificate=tuple(order),
                    support=tuple(l for _, _, l in rows if l in used),
                    rank=len(pivots),
                    equations=len(rows),
                )
            continue
        if floaty:
            s = _scale(r)
            r = [x / s for x in r]
        pivots.append((lead, r, frozenset(used), label))

    n_eq = len(rows)
    if not pivots:
        # every T solves the system
        one = 1.0 if floaty else 1
        return ObstructionVerdict(
            Status.NONZERO_T,
            witness=(one, 0 * one, 0 * one, 0 * one),
            unconstrained=True,
            equations=n_eq,
        )
    aug = [prow for _, prow, _, _ in pivots]
    ech, piv = linalg.row_echelon(aug, tol)
    sol = [0.0 if floaty else Fraction(0)] * DIM
    for r, col in zip(ech, piv):
        sol[col] = r[DIM]
    rank = len(piv)
    if rank < DIM:
        free = next(c for c in range(DIM) if c not in piv)
        if all(not nz(x) for x in sol):
            # particular solution is zero: take a null vector
            sol[free] = 1.0 if floaty else Fraction(1)
            for r, col in zip(ech, piv):
                sol[col] = -r[free]
        status = Status.NONZERO_T
    else:
        status = Status.ONLY_ZERO if all(not nz(x) for x in sol) else Status.NONZERO_T
    residual = 0.0
    for coeffs, rhs, _ in rows:
        res = sum((a * x for a, x in zip(coeffs, sol)), 0) - rhs
        if floaty:
            residual = max(residual, abs(float(res)))
        elif res != 0:
            raise AssertionError("exact witness fails the system")
    return ObstructionVerdict(
        status,
        witness=None if status is Status.ONLY_ZERO else tuple(sol),
        rank=rank,
        equations=n_eq,
        residual=residual,
    )


def trace_free_ricci(rho: np.ndarray, tau) -> np.ndarray:
    E = np.array(rho, dtype=object)
    for i in range(DIM):
        E[i, i] = E[i, i] - tau * Fraction(1, 4)
    return E


def einstein_check(rho: np.ndarray, tau, tol: float = FLOAT_TOL) -> bool:
    return all(is_zero(x, tol) for x in trace_free_ricci(rho, tau).flat)
