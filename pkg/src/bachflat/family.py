"""The two-parameter family g_{alpha,beta}: symbolic tensors and the Bach-flat locus."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _kernels
from .analysis import analyze
from .bach import bach_tensor, cov_ricci
from .curvature import curvature
from .lie import family_algebra
from .scalars import (
    ALPHA,
    BETA,
    BiPolynomial,
    BiQuadratic,
    field_of_radicands,
    sqrt_rational,
    to_field,
)

# ---------------------------------------------------------------------------
# symbolic pipeline


@dataclass(frozen=True)
class SymbolicTensors:
    rho: np.ndarray
    tau: BiPolynomial
    B: np.ndarray


@lru_cache(maxsize=1)
def symbolic_tensors() -> SymbolicTensors:
    """Ricci, scalar curvature and Bach tensor over Q[alpha, beta]."""
    cu = curvature(family_algebra())
    B = bach_tensor(cu.rho, cu.tau, cov_ricci(cu.gamma, cu.rho).d2)
    return SymbolicTensors(cu.rho, cu.tau, B)


def poly(x) -> BiPolynomial:
    return x if isinstance(x, BiPolynomial) else BiPolynomial.const(x)


# ---------------------------------------------------------------------------
# univariate helpers; a univariate polynomial is {exponent: Fraction}


def restrict_diagonal(p: BiPolynomial) -> dict[int, Fraction]:
    """``p(x, x)``."""
    out: dict[int, Fraction] = {}
    for (i, j), c in p.terms.items():
        out[i + j] = out.get(i + j, 0) + c
    return {k: v for k, v in out.items() if v}


def restrict_hyperbola(p: BiPolynomial, k: Fraction = Fraction(-1, 8)) -> dict[int, Fraction]:
    """``x^s p(x, k/x)`` with the smallest ``s`` making it a polynomial."""
    laurent: dict[int, Fraction] = {}
    for (i, j), c in p.terms.items():
        laurent[i - j] = laurent.get(i - j, 0) + c * k**j
    laurent = {e: v for e, v in laurent.items() if v}
    if not laurent:
        return {}
    shift = -min(min(laurent), 0)
    return {e + shift: v for e, v in laurent.items()}


def upoly_from(coeffs_desc) -> dict[int, Fraction]:
    n = len(coeffs_desc) - 1
    return {n - i: Fraction(c) for i, c in enumerate(coeffs_desc) if c}


def proportional(p: dict, q: dict) -> Fraction | None:
    """The rational ``u`` with ``p = u q``, or ``None``."""
    if set(p) != set(q) or not q:
        return None
    e0 = next(iter(q))
    u = p[e0] / q[e0]
    return u if all(p[e] == u * q[e] for e in q) else None


def denest_sqrt(s: Fraction, t: Fraction, d: int) -> dict[int, Fraction]:
    """``sqrt(s + t sqrt d)`` as a sum of square-free radicals, when it denests.

    Uses ``sqrt(s + t sqrt d) = sqrt((s+m)/2) + sign(t) sqrt((s-m)/2)`` with
    ``m = sqrt(s^2 - d t^2)`` rational.
    """
    if t == 0 or d == 1:
        c, e = sqrt_rational(s + t)
        return {e: c} if c else {}
    m2 = s * s - d * t * t
    mc, me = sqrt_rational(m2)
    if me != 1:
        raise ValueError(f"sqrt({s} + {t} sqrt {d}) does not denest")
    m = mc
    c1, e1 = sqrt_rational((s + m) / 2)
    c2, e2 = sqrt_rational((s - m) / 2)
    sg = 1 if t > 0 else -1
    out: dict[int, Fraction] = {}
    for c, e in ((c1, e1), (sg * c2, e2)):
        if c:
            out[e] = out.get(e, 0) + c
    return out


def even_quartic_roots(p: dict[int, Fraction]) -> list:
    """Real roots of ``a x^4 + b x^2 + c`` in denested exact form."""
    if set(p) - {0, 2, 4} or 4 not in p:
        raise ValueError("not an even quartic")
    a, b, c = p[4], p.get(2, Fraction(0)), p.get(0, Fraction(0))
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    dc, dd = sqrt_rational(disc)
    surds = []
    for sg in (1, -1):
        # x^2 = (-b + sg dc sqrt dd) / 2a = s + t sqrt dd
        s = -b / (2 * a)
        t = sg * dc / (2 * a)
        if dd == 1:
            s, t = s + t, Fraction(0)
        if float(s) + float(t) * dd ** 0.5 < 0:
            continue
        r = denest_sqrt(s, t, dd)
        surds.append(r)
        surds.append({e: -v for e, v in r.items()})
    fld = field_of_radicands({e for r in surds for e in r})
    roots = []
    for r in surds:
        v = BiQuadratic.from_surd(*fld, r) if fld else r.get(1, Fraction(0))
        if fld and v.is_rational():
            v = v.coeffs[0]
        if v not in roots:
            roots.append(v)
    return sorted(roots, key=float)


def eval_upoly(p: dict[int, Fraction], x):
    acc = 0
    for e, c in p.items():
        acc = acc + c * x**e
    return acc


# ---------------------------------------------------------------------------
# the Bach-flat locus


class ClassLabel(enum.Enum):
    HYPERHERMITIAN = "HYPERHERMITIAN"
    EINSTEIN_CH2 = "EINSTEIN_CH2"
    NONTRIVIAL = "NONTRIVIAL"


@dataclass
class FamilySolution:
    alpha: object
    beta: object
    branch: str
    class_label: ClassLabel | None = None
    diagnostics: dict = field(default_factory=dict)


@dataclass(frozen=True)
class LocusCertificate:
    difference_identity: bool  # B22 - B33 = (a^2 - b^2)(1 + 8ab) / 3
    diagonal_b11: dict  # B11(x, x)
    diagonal_identity: bool  # B11(x, x) = 2/3 (x^2 - 1)(x^2 - 1/4)
    hyperbola_b11: dict  # x^2 B11(x, -1/(8x))
    hyperbola_unit: Fraction | None  # u with hyperbola_b11 = u (8x^4 - 7x^2 + 1/8)
    diagonal_roots: list
    hyperbola_roots: list


class LocusError(AssertionError):
    """An identity the pipeline must satisfy failed (convention bug)."""


QUARTIC = upoly_from([8, 0, -7, 0, Fraction(1, 8)])


def locus_certificate() -> LocusCertificate:
    B = symbolic_tensors().B
    b11, b22, b33 = poly(B[0, 0]), poly(B[1, 1]), poly(B[2, 2])
    diff_rhs = (ALPHA * ALPHA - BETA * BETA) * (1 + 8 * ALPHA * BETA) * Fraction(1, 3)
    diag = restrict_diagonal(b11)
    x = ALPHA
    diag_target = restrict_diagonal((x * x - 1) * (x * x - Fraction(1, 4)) * Fraction(2, 3))
    hyp = restrict_hyperbola(b11)
    unit = proportional(hyp, QUARTIC)
    return LocusCertificate(
        difference_identity=(b22 - b33) == diff_rhs,
        diagonal_b11=diag,
        diagonal_identity=diag == diag_target,
        hyperbola_b11=hyp,
        hyperbola_unit=unit,
        diagonal_roots=even_quartic_roots(diag),
        hyperbola_roots=even_quartic_roots(hyp),
    )


def _common(a, b):
    fld = field_of_radicands(
        {d for v in (a, b) if isinstance(v, BiQuadratic) for d in v.surd()}
    )
    return to_field(a, fld), to_field(b, fld)


def bach_vanishes_exactly(alpha, beta) -> bool:
    """Evaluate the symbolic Bach tensor at an exact point."""
    B = symbolic_tensors().B
    return all(poly(B[i, j]).eval(alpha, beta) == 0 for i in range(4) for j in range(4))


def bach_flat_locus() -> list[FamilySolution]:
    """All eight exact Bach-flat points with alpha, beta non-zero."""
    cert = locus_certificate()
    if not cert.difference_identity:
        raise LocusError("B22 - B33 does not factor as (a^2 - b^2)(1 + 8ab)/3")
    if not cert.diagonal_identity:
        raise LocusError("B11 on alpha = beta is not 2/3 (a^2 - 1)(a^2 - 1/4)")
    if cert.hyperbola_unit is None:
        raise LocusError("B11 on 1 + 8ab = 0 is not a multiple of 8x^4 - 7x^2 + 1/8")
    candidates: list[FamilySolution] = []
    for x in cert.diagonal_roots:
        candidates.append(FamilySolution(x, x, "alpha=beta"))
    for x in cert.hyperbola_roots:
        y = Fraction(-1, 8) / x
        candidates.append(FamilySolution(x, y, "1+8*alpha*beta=0"))
    sols = []
    for s in candidates:
        if s.alpha == 0 or s.beta == 0:
            continue
        s.alpha, s.beta = _common(s.alpha, s.beta)
        if not bach_vanishes_exactly(s.alpha, s.beta):
            continue
        if any(t.alpha == s.alpha and t.beta == s.beta for t in sols):
            continue
        sols.append(s)
    return sols


def orbit(a, b) -> list[tuple]:
    """Images under the isometries (a, b) -> (b, a) and (a, b) -> (-a, -b)."""
    out = []
    for p in ((a, b), (b, a), (-a, -b), (-b, -a)):
        if not any(p[0] == q[0] and p[1] == q[1] for q in out):
            out.append(p)
    return out


def _representative(members: list[FamilySolution]) -> FamilySolution:
    def key(s):
        a, b = float(s.alpha), float(s.beta)
        return (a <= 0, abs(a) > abs(b), -b)

    return min(members, key=key)


@dataclass
class SolutionClass:
    label: ClassLabel
    representative: FamilySolution
    members: list[FamilySolution]


def diagnose(s: FamilySolution) -> dict:
    rep = analyze(family_algebra(s.alpha, s.beta), backend="exact")
    d = {
        "bach_flat": rep.flags["bach_flat"],
        "einstein": rep.flags["einstein"],
        "sd_flat": rep.flags["sd_flat"],
        "asd_flat": rep.flags["asd_flat"],
        "obstruction": rep.obstruction.status.value,
    }
    s.diagnostics = d
    return d


def classify_solutions(sols: list[FamilySolution]) -> list[SolutionClass]:
    """Group solutions into isometry classes and label them from their diagnostics."""
    for s in sols:
        if not s.diagnostics:
            diagnose(s)
    classes: list[SolutionClass] = []
    assigned: set[int] = set()
    for idx, s in enumerate(sols):
        if idx in assigned:
            continue
        orb = orbit(s.alpha, s.beta)
        members = []
        for jdx, t in enumerate(sols):
            if any(t.alpha == p[0] and t.beta == p[1] for p in orb):
                members.append(t)
                assigned.add(jdx)
        diags = [m.diagnostics for m in members]
        if not all(d["bach_flat"] for d in diags):
            raise LocusError("a listed solution is not Bach-flat")
        einstein = {d["einstein"] for d in diags}
        if len(einstein) != 1:
            raise LocusError("Einstein flag differs inside an isometry class")
        if einstein == {True}:
            label = ClassLabel.EINSTEIN_CH2
        elif any(d["sd_flat"] for d in diags):
            label = ClassLabel.HYPERHERMITIAN
        elif all(
            not d["sd_flat"] and not d["asd_flat"] and d["obstruction"] == "INCONSISTENT"
            for d in diags
        ):
            label = ClassLabel.NONTRIVIAL
        else:
            raise LocusError(f"cannot label class of ({s.alpha}, {s.beta}): {diags}")
        for m in members:
            m.class_label = label
        classes.append(SolutionClass(label, _representative(members), members))
    return classes


# ---------------------------------------------------------------------------
# numeric corroboration


@dataclass(frozen=True)
class GridMinimum:
    alpha: float
    beta: float
    norm2: float
    grid_alpha: float
    grid_beta: float
    label: str
    distance: float


def _bach_residual(x: np.ndarray) -> np.ndarray:
    B = _kernels.bach_batch(_kernels.family_batch([x[0]], [x[1]]))[0]
    return B[np.triu_indices(4)]


def _exact_points() -> list[tuple[float, float, str]]:
    out = []
    for cls in classify_solutions(bach_flat_locus()):
        for m in cls.members:
            out.append((float(m.alpha), float(m.beta), cls.label.value))
    return out


def label_point(a: float, b: float, exact: list[tuple[float, float, str]], near: float = 1e-3) -> tuple[str, float]:
    """Class label of the closest exact point within ``near``, else
    ``"degenerate"`` next to an axis, else ``"unexplained"``."""
    dist, lab = min(((math.hypot(a - ea, b - eb), l) for ea, eb, l in exact), default=(math.inf, ""))
    if dist < near:
        return lab, dist
    return ("degenerate" if min(abs(a), abs(b)) < near else "unexplained"), dist


def grid_scan(
    alpha_range: tuple[float, float] = (-1.5, 1.5),
    beta_range: tuple[float, float] = (-1.5, 1.5),
    resolution: int = 301,
    threshold: float = 1e-6,
    near: float = 1e-3,
) -> list[GridMinimum]:
    """Local minima of ``|B|^2`` on a grid, refined by least squares.

    Refined minima below ``threshold`` are returned and labelled with the
    exact solution class they approach, ``"degenerate"`` near an axis, or
    ``"unexplained"``.
    """
    from scipy.optimize import least_squares

    a0, a1 = alpha_range
    b0, b1 = beta_range
    if not (a1 > a0 and b1 > b0):
        raise ValueError("empty parameter range")
    if resolution < 3:
        raise ValueError("resolution must be at least 3")
    al = np.linspace(a0, a1, resolution)
    be = np.linspace(b0, b1, resolution)
    A, Bt = np.meshgrid(al, be, indexing="ij")
    F = _kernels.family_bach_norm2(A, Bt)

    P = np.pad(F, 1, constant_values=np.inf)
    core = P[1:-1, 1:-1]
    is_min = np.ones_like(F, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di or dj:
                is_min &= core <= P[1 + di : P.shape[0] - 1 + di, 1 + dj : P.shape[1] - 1 + dj]

    exact = _exact_points()
    step = max((a1 - a0), (b1 - b0)) / (resolution - 1)
    found: list[GridMinimum] = []
    for i, j in zip(*np.nonzero(is_min)):
        x0 = np.array([al[i], be[j]])
        res = least_squares(_bach_residual, x0, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15)
        x = res.x
        if np.max(np.abs(x - x0)) > 3 * step:
            # wandered off the cell; keep the grid value
            x = x0
        B = _kernels.bach_batch(_kernels.family_batch([x[0]], [x[1]]))[0]
        n2 = float(np.sum(B * B))
        if n2 >= threshold:
            continue
        if any(abs(m.alpha - x[0]) < 1e-7 and abs(m.beta - x[1]) < 1e-7 for m in found):
            continue
        lab, dist = label_point(float(x[0]), float(x[1]), exact, near)
        found.append(GridMinimum(float(x[0]), float(x[1]), n2, float(al[i]), float(be[j]), lab, float(dist)))
    found.sort(key=lambda m: (m.alpha, m.beta))
    return found
