"""Reproduction checks for the family, the two exact examples and the float pipeline.

Each check returns ``(passed, detail)``; :func:`run_all` times them.  The
checks compare against independently typed oracle values, never against
values produced by the pipeline itself.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import _kernels
from .analysis import analyze, compare_reports
from .bach import divergence_einstein
from .conformal import Status
from .curvature import riemann_symmetry_defects
from .family import (
    QUARTIC,
    ClassLabel,
    bach_flat_locus,
    classify_solutions,
    grid_scan,
    locus_certificate,
    poly,
    symbolic_tensors,
)
from .lie import (
    ad_traces,
    change_basis,
    descriptor,
    family_algebra,
    iso_witness,
    is_orthogonal,
    jacobi_check,
    r1,
    r2,
    rescaled_algebra,
    thm1_algebra,
    thm2_algebra,
    StructureConstants,
)
from .scalars import ALPHA, BETA, BiQuadratic
from .weyl import char_poly, eigen3, eval_poly, ricci_contraction

A, Bv = ALPHA, BETA
F = Fraction

CheckResult = tuple[bool, str]


@dataclass(frozen=True)
class Criterion:
    number: int
    title: str
    run: Callable[[], CheckResult]


def _fail_list(bad: list[str]) -> CheckResult:
    return (not bad, "ok" if not bad else "; ".join(bad))


# ---------------------------------------------------------------------------
# oracle values typed from the published formulas


def ricci_display() -> list:
    return [
        -(A * A + Bv * Bv + A * Bv),
        -(A * A + A * Bv + F(1, 4)),
        -(Bv * Bv + A * Bv + F(1, 4)),
        -((A + Bv) * (A + Bv) - F(1, 4)),
    ]


def bach_display() -> list:
    b11 = (
        F(1, 6) - A**2 * F(1, 6) + A**3 * Bv * F(2, 3) - A**2 * Bv**2 * F(2, 3)
        - A * Bv * F(1, 2) + A * Bv**3 * F(2, 3) - Bv**2 * F(1, 6)
    )
    b22 = (
        A**2 * F(5, 6) + Bv**2 * F(1, 2) + A**3 * Bv * F(2, 3) - A * Bv**3 * 2
        + A * Bv * F(7, 6) - A**2 * Bv**2 * F(2, 3) - F(1, 2)
    )
    b33 = (
        A**2 * F(1, 2) + Bv**2 * F(5, 6) + A * Bv * F(7, 6) - A**3 * Bv * 2
        + A * Bv**3 * F(2, 3) - A**2 * Bv**2 * F(2, 3) - F(1, 2)
    )
    return [b11, b22, b33]


def _q25(c1, c2, c5, c10) -> BiQuadratic:
    """``c1 + c2 sqrt2 + c5 sqrt5 + c10 sqrt10``."""
    return BiQuadratic(2, 5, (F(c1), F(c2), F(c5), F(c10)))


def thm1_eigen_oracle() -> tuple[list, list]:
    # 2 +- (3 sqrt2 - sqrt10), 2 -+ (3 sqrt2 + sqrt10), -4 +- 2 sqrt10
    plus = [_q25(2, 3, 0, -1), _q25(2, -3, 0, -1), _q25(-4, 0, 0, 2)]
    minus = [_q25(2, -3, 0, 1), _q25(2, 3, 0, 1), _q25(-4, 0, 0, -2)]
    return plus, minus


# ---------------------------------------------------------------------------
# criteria


def check_symbolic_ricci() -> CheckResult:
    rho = symbolic_tensors().rho
    bad = []
    want = ricci_display()
    for i in range(4):
        got = poly(rho[i, i])
        if got != want[i]:
            ratio = ""
            if want[i] * 2 == got:
                ratio = " (pipeline value is exactly twice the display)"
            bad.append(f"rho{i + 1}{i + 1} = {got} but display gives {want[i]}{ratio}")
    for i in range(4):
        for j in range(4):
            if i != j and rho[i, j] != 0:
                bad.append(f"rho{i + 1}{j + 1} = {rho[i, j]} is not zero")
    return _fail_list(bad)


def check_symbolic_bach() -> CheckResult:
    B = symbolic_tensors().B
    bad = []
    for i in range(4):
        for j in range(4):
            if i != j and B[i, j] != 0:
                bad.append(f"B{i + 1}{j + 1} is not zero")
    for i, want in enumerate(bach_display()):
        if poly(B[i, i]) != want:
            bad.append(f"B{i + 1}{i + 1} = {B[i, i]} differs from display")
    tr = poly(B[0, 0]) + B[1, 1] + B[2, 2] + B[3, 3]
    if tr != 0:
        bad.append(f"trace B = {tr}")
    return _fail_list(bad)


def check_factorization() -> CheckResult:
    cert = locus_certificate()
    bad = []
    if not cert.difference_identity:
        bad.append("B22 - B33 identity fails")
    if not cert.diagonal_identity:
        bad.append("alpha=beta reduction of B11 fails")
    if cert.hyperbola_unit is None or cert.hyperbola_unit == 0:
        bad.append("1+8ab=0 reduction is not a unit multiple of 8x^4-7x^2+1/8")
    ok = not bad
    detail = "ok" if ok else "; ".join(bad)
    if ok:
        detail = f"unit = {cert.hyperbola_unit}"
    return ok, detail


def check_solution_set() -> CheckResult:
    sols = bach_flat_locus()
    bad = []
    if len(sols) != 8:
        bad.append(f"{len(sols)} solutions")
    classes = classify_solutions(sols)
    if len(classes) != 3:
        bad.append(f"{len(classes)} classes")
    want = {
        ClassLabel.HYPERHERMITIAN: (F(1), F(1)),
        ClassLabel.EINSTEIN_CH2: (F(1, 2), F(1, 2)),
        ClassLabel.NONTRIVIAL: (r1(), r2()),
    }
    seen = {}
    for cls in classes:
        seen[cls.label] = cls
        if len(cls.members) != (4 if cls.label is ClassLabel.NONTRIVIAL else 2):
            bad.append(f"class {cls.label.value} has {len(cls.members)} members")
    for label, (a, b) in want.items():
        cls = seen.get(label)
        if cls is None:
            bad.append(f"no class labelled {label.value}")
            continue
        if not any(m.alpha == a and m.beta == b for m in cls.members):
            bad.append(f"({a}, {b}) not in class {label.value}")
    for s in sols:
        if not s.diagnostics.get("bach_flat"):
            bad.append(f"({s.alpha}, {s.beta}) diagnostics missing Bach-flatness")
    r = _q25(0, 0, 0, 0)
    for x in (r1(), r2()):
        if 8 * x**4 - 7 * x**2 + F(1, 8) != r:
            bad.append(f"{x} is not a root of the quartic")
    return _fail_list(bad)


def _scaled(M, k):
    return np.array([[x * k for x in row] for row in M], dtype=object)


def check_g_r1r2() -> CheckResult:
    rep = analyze(thm1_algebra(), backend="exact")
    bad = []
    if rep.bach_norm2 != 0:
        bad.append("B != 0")
    want_rho = [F(-3, 2), _q25(F(-9, 8), 0, F(3, 8), 0), _q25(F(-9, 8), 0, F(-3, 8), 0), F(-3, 4)]
    for i in range(4):
        for j in range(4):
            w = want_rho[i] if i == j else 0
            if rep.rho[i, j] != w:
                bad.append(f"rho{i + 1}{j + 1} = {rep.rho[i, j]}, expected {w}")
    if rep.flags["einstein"]:
        bad.append("reported Einstein")
    plus, minus = thm1_eigen_oracle()
    for tag, M, lams in (("+", rep.W_plus, plus), ("-", rep.W_minus, minus)):
        cp = char_poly(_scaled(M, 8))
        for lam in lams:
            if eval_poly(cp, lam) != 0:
                bad.append(f"char poly of 8W{tag} does not vanish at {lam}")
        if sum(lams, 0) != 0:
            bad.append(f"8W{tag} eigenvalues do not sum to 0")
    ob = rep.obstruction
    if ob.status is not Status.INCONSISTENT:
        bad.append(f"obstruction {ob.status.value}")
    for lab in ((1, 2, 1), (1, 2, 2)):
        if lab not in ob.certificate:
            bad.append(f"certificate lacks {lab}")
    return _fail_list(bad)


def check_two_step() -> CheckResult:
    C = thm2_algebra()
    bad = []
    ok, viol = jacobi_check(C)
    if not ok:
        bad.append(f"Jacobi fails at {viol[:3]}")
    if descriptor(C).derived_dims != (4, 2, 0):
        bad.append(f"derived dims {descriptor(C).derived_dims}")
    rep = analyze(C, backend="exact")
    if rep.bach_norm2 != 0:
        bad.append("B != 0")
    if rep.flags["einstein"]:
        bad.append("reported Einstein")
    if rep.flags["sd_flat"] or rep.flags["asd_flat"]:
        bad.append("a Weyl half vanishes")
    if rep.obstruction.status is not Status.INCONSISTENT:
        bad.append(f"obstruction {rep.obstruction.status.value}")
    return _fail_list(bad)


def check_rescaled() -> CheckResult:
    rep = analyze(rescaled_algebra(), backend="exact")
    bad = []
    if rep.bach_norm2 != 0:
        bad.append("B != 0")
    if rep.flags["einstein"]:
        bad.append("reported Einstein")
    if rep.half_flat:
        bad.append("half conformally flat")
    return _fail_list(bad)


def check_conventions() -> CheckResult:
    bad = []
    g11 = analyze(family_algebra(1, 1), backend="exact")
    if not g11.flags["sd_flat"]:
        bad.append("g_{1,1} has W+ != 0")
        if g11.flags["asd_flat"]:
            bad[-1] += " (W- = 0 instead; g_{-1,-1} is the member with W+ = 0)"
    if g11.flags["asd_flat"]:
        bad.append("g_{1,1} has W- = 0")
    h = F(1, 2)
    ch2 = analyze(family_algebra(h, h), backend="exact")
    if not ch2.flags["einstein"]:
        bad.append("g_{1/2,1/2} not Einstein")
    for i in range(4):
        for j in range(4):
            w = F(-3, 4) if i == j else 0
            if ch2.rho[i, j] != w:
                bad.append(f"g_{{1/2,1/2}} rho{i + 1}{j + 1} = {ch2.rho[i, j]}, expected {w}")
    if ch2.bach_norm2 != 0:
        bad.append("g_{1/2,1/2} has B != 0")
    return _fail_list(bad)


def check_structure() -> CheckResult:
    bad = []
    traces = ad_traces(family_algebra(A, -A))
    if any(t != 0 for t in traces):
        bad.append(f"trace ad on g_(a,-a) = {[str(t) for t in traces]}")
    for a in (F(1), F(-2, 3), F(5, 7)):
        if not descriptor(family_algebra(a, -a)).unimodular:
            bad.append(f"g_({a},{-a}) not unimodular")
    d = descriptor(thm1_algebra())
    if d.unimodular:
        bad.append("g_(r1,r2) unimodular")
    if d.derived_dims != (4, 3, 1, 0):
        bad.append(f"g_(r1,r2) derived dims {d.derived_dims}")
    return _fail_list(bad)


def check_isomorphisms() -> CheckResult:
    bad = []
    fam = family_algebra()
    for lam in (F(3), F(-2), F(1, 5)):
        if change_basis(fam, iso_witness("P", lam)) != family_algebra(A * lam, Bv * lam):
            bad.append(f"P_{lam} witness fails")
    if change_basis(fam, iso_witness("Q")) != family_algebra(Bv, A):
        bad.append("Q witness fails")
    N = iso_witness("Neg")
    if not is_orthogonal(N):
        bad.append("Neg not orthogonal")
    if change_basis(fam, N) != family_algebra(-A, -Bv):
        bad.append("Neg witness fails")
    a, b = r1(), r2()
    ra = analyze(family_algebra(a, b), backend="float")
    rb = analyze(family_algebra(-a, -b), backend="float")
    diff = compare_reports(ra, rb, 1e-9)
    if diff:
        msg = "float reports of g_(r1,r2) and g_(-r1,-r2) differ in " + ", ".join(diff)
        swapped = np.allclose(ra.eig_plus, rb.eig_minus, atol=1e-9) and np.allclose(
            ra.eig_minus, rb.eig_plus, atol=1e-9
        )
        if swapped:
            msg += " (W+ and W- exchanged: Neg reverses orientation)"
        bad.append(msg)
    return _fail_list(bad)


# -- randomized float properties ---------------------------------------------


def random_orthogonal(rng: np.random.Generator, proper: bool = True) -> np.ndarray:
    Q, R = np.linalg.qr(rng.standard_normal((4, 4)))
    Q = Q * np.sign(np.diag(R))
    if proper and np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


def random_algebra(rng: np.random.Generator) -> StructureConstants:
    """A random solvable metric Lie algebra, rotated by a random orthogonal frame.

    Alternates between ``R x_A R^3`` with random ``A`` and random family members.
    """
    if rng.random() < 0.5:
        M = rng.standard_normal((3, 3))
        c = np.zeros((4, 4, 4))
        for i in range(3):
            for k in range(3):
                c[0, i + 1, k + 1] = M[k, i]
                c[i + 1, 0, k + 1] = -M[k, i]
        C = StructureConstants(c)
    else:
        a, b = rng.uniform(-2, 2, size=2)
        C = family_algebra(float(a), float(b))
    return change_basis(C, random_orthogonal(rng))


def _invariants(t: dict, n: int) -> np.ndarray:
    plus, minus = _kernels.weyl_halves_batch(t["W"][n : n + 1])
    return np.array(
        [t["tau"][n], float(np.sum(t["B"][n] ** 2)), *eigen3(plus[0]), *eigen3(minus[0])]
    )


def property_defects(seeds: int = 100, base_seed: int = 0) -> dict[str, float]:
    """Largest violation of each identity over ``seeds`` random algebras."""
    worst = dict.fromkeys(
        ["riemann", "weyl_contraction", "bach_trace", "bianchi2", "invariance", "jacobi"], 0.0
    )
    rng = np.random.default_rng(base_seed)
    algs, rotated = [], []
    for _ in range(seeds):
        C = random_algebra(rng)
        algs.append(C.c)
        rotated.append(change_basis(C, random_orthogonal(rng)).c)
        ok, _ = jacobi_check(C)
        if not ok:
            worst["jacobi"] = float("inf")
    t = _kernels.curvature_batch(np.array(algs, dtype=float))
    u = _kernels.curvature_batch(np.array(rotated, dtype=float))
    for n in range(seeds):
        R = t["R"][n]
        worst["riemann"] = max(worst["riemann"], max(abs(x) for x in riemann_symmetry_defects(R)))
        wc = ricci_contraction(t["W"][n])
        worst["weyl_contraction"] = max(worst["weyl_contraction"], max(abs(float(x)) for x in wc.flat))
        worst["bach_trace"] = max(worst["bach_trace"], abs(float(np.trace(t["B"][n]))))
        dv = divergence_einstein(t["gamma"][n], t["rho"][n], float(t["tau"][n]))
        worst["bianchi2"] = max(worst["bianchi2"], max(abs(float(x)) for x in dv))
        d = np.max(np.abs(_invariants(t, n) - _invariants(u, n)))
        worst["invariance"] = max(worst["invariance"], float(d))
    return worst


def check_properties(seeds: int = 100, tol: float = 1e-9) -> CheckResult:
    worst = property_defects(seeds)
    bad = [f"{k} defect {v:.3g}" for k, v in worst.items() if not v <= tol]
    if bad:
        return False, "; ".join(bad)
    return True, f"{seeds} seeds, worst defect {max(worst.values()):.2g}"


# -- grid --------------------------------------------------------------------


def check_grid(resolution: int = 301, budget: float = 60.0) -> CheckResult:
    t0 = time.perf_counter()
    mins = grid_scan((-1.5, 1.5), (-1.5, 1.5), resolution)
    elapsed = time.perf_counter() - t0
    bad = []
    deep = [m for m in mins if m.norm2 < 1e-10]
    for m in deep:
        if m.label == "unexplained":
            bad.append(f"unexplained minimum at ({m.alpha:.6f}, {m.beta:.6f}), |B|^2 = {m.norm2:.3g}")
    if elapsed > budget:
        bad.append(f"scan took {elapsed:.1f}s")
    if bad:
        return False, "; ".join(bad)
    near = sum(1 for m in deep if m.label != "degenerate")
    return True, f"{len(deep)} minima below 1e-10 ({near} at exact points), {elapsed:.2f}s"


CRITERIA: list[Criterion] = [
    Criterion(1, "symbolic Ricci tensor of the family", check_symbolic_ricci),
    Criterion(2, "symbolic Bach tensor of the family", check_symbolic_bach),
    Criterion(3, "factorization and branch reductions", check_factorization),
    Criterion(4, "eight solutions in three classes", check_solution_set),
    Criterion(5, "exact data of g_(r1,r2)", check_g_r1r2),
    Criterion(6, "two-step example over Q(sqrt2, sqrt3)", check_two_step),
    Criterion(7, "rescaled algebra over Q(sqrt2, sqrt5)", check_rescaled),
    Criterion(8, "orientation and normalization conventions", check_conventions),
    Criterion(9, "unimodularity and derived series", check_structure),
    Criterion(10, "isomorphism witnesses", check_isomorphisms),
    Criterion(11, "randomized float identities", check_properties),
    Criterion(12, "grid scan of |B|^2", check_grid),
]


@dataclass(frozen=True)
class Outcome:
    criterion: Criterion
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        c = self.criterion
        return f"[{tag}] {c.number:2d} {c.title} ({self.seconds:.2f}s): {self.detail}"


def run_criterion(c: Criterion) -> Outcome:
    t0 = time.perf_counter()
    try:
        ok, detail = c.run()
    except Exception as exc:  # a crash is a failure, reported with its cause
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return Outcome(c, ok, detail, time.perf_counter() - t0)


def run_all(numbers: list[int] | None = None) -> list[Outcome]:
    return [run_criterion(c) for c in CRITERIA if numbers is None or c.number in numbers]
