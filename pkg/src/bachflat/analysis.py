"""One-shot analysis of a metric Lie algebra: flags plus the tensors behind them."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .bach import bach_tensor, cov_ricci
from .conformal import ObstructionVerdict, ce_obstruction, div4_weyl, einstein_check
from .curvature import curvature
from .expr_parser import format_scalar
from .lie import DIM, AlgebraDescriptor, StructureConstants, descriptor
from .scalars import FLOAT_TOL, BiPolynomial, is_zero
from .weyl import char_poly, eigen3, is_zero_matrix, sd_asd_parts, weyl_tensor

BACKENDS = ("exact", "float")


@dataclass
class AnalysisReport:
    """Summary of one algebra.

    ``sd_flat`` means the self-dual Weyl half ``W+`` vanishes and ``asd_flat``
    that ``W-`` does, for the orientation ``e1^e2^e3^e4``.
    """

    backend: str
    algebra: AlgebraDescriptor
    rho: np.ndarray
    tau: object
    B: np.ndarray
    W_plus: np.ndarray
    W_minus: np.ndarray
    eig_plus: tuple[float, float, float]
    eig_minus: tuple[float, float, float]
    charpoly_plus: tuple | None
    charpoly_minus: tuple | None
    obstruction: ObstructionVerdict
    flags: dict[str, bool] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    @property
    def bach_norm2(self):
        return _norm2(self.B)

    @property
    def half_flat(self) -> bool:
        return self.flags["sd_flat"] or self.flags["asd_flat"]

    # -- rendering ---------------------------------------------------------

    def items(self) -> list[tuple[str, str]]:
        """Deterministic ``(dotted key, value)`` pairs."""
        fmt = _fmt
        out: list[tuple[str, str]] = [("backend", self.backend)]
        a = self.algebra
        out += [
            ("algebra.unimodular", _b(a.unimodular)),
            ("algebra.solvable", _b(a.solvable)),
            ("algebra.nilpotent", _b(a.nilpotent)),
            ("algebra.derived_dims", ",".join(map(str, a.derived_dims))),
            ("algebra.lower_central_dims", ",".join(map(str, a.lower_central_dims))),
        ]
        for name in ("einstein", "bach_flat", "sd_flat", "asd_flat"):
            out.append((f"flags.{name}", _b(self.flags[name])))
        out.append(("flags.obstruction", self.obstruction.status.value))
        out.append(("scalar_curvature", fmt(self.tau)))
        for i in range(DIM):
            for j in range(i, DIM):
                out.append((f"ricci.{i + 1}{j + 1}", fmt(self.rho[i, j])))
        for i in range(DIM):
            for j in range(i, DIM):
                out.append((f"bach.{i + 1}{j + 1}", fmt(self.B[i, j])))
        out.append(("bach.norm2", fmt(self.bach_norm2)))
        for tag, M, eig, cp in (
            ("plus", self.W_plus, self.eig_plus, self.charpoly_plus),
            ("minus", self.W_minus, self.eig_minus, self.charpoly_minus),
        ):
            for i in range(3):
                for j in range(i, 3):
                    out.append((f"weyl.{tag}.{i + 1}{j + 1}", fmt(M[i, j])))
            out.append((f"weyl.{tag}.eigenvalues", ", ".join(_fmt_float(x) for x in eig)))
            if cp is not None:
                out.append((f"weyl.{tag}.charpoly", ", ".join(fmt(x) for x in cp)))
        ob = self.obstruction
        out.append(("obstruction.status", ob.status.value))
        out.append(("obstruction.verdict", ob.verdict_text))
        out.append(("obstruction.rank", str(ob.rank)))
        out.append(("obstruction.equations", str(ob.equations)))
        if ob.certificate:
            out.append(("obstruction.certificate", _labels(ob.certificate)))
            out.append(("obstruction.support", _labels(ob.support)))
        if ob.witness is not None:
            out.append(("obstruction.witness", ", ".join(fmt(x) for x in ob.witness)))
            out.append(("obstruction.unconstrained", _b(ob.unconstrained)))
        return out

    def numeric(self) -> dict[str, object]:
        """Comparable values: floats for tensor entries, plain values otherwise."""
        out: dict[str, object] = {
            "algebra.unimodular": self.algebra.unimodular,
            "algebra.derived_dims": self.algebra.derived_dims,
            "algebra.lower_central_dims": self.algebra.lower_central_dims,
            "flags.obstruction": self.obstruction.status.value,
            "scalar_curvature": float(self.tau),
            "bach.norm2": float(self.bach_norm2),
        }
        for name, v in self.flags.items():
            out[f"flags.{name}"] = v
        for i in range(DIM):
            for j in range(i, DIM):
                out[f"ricci.{i + 1}{j + 1}"] = float(self.rho[i, j])
                out[f"bach.{i + 1}{j + 1}"] = float(self.B[i, j])
        for k in range(3):
            out[f"weyl.plus.eig{k + 1}"] = self.eig_plus[k]
            out[f"weyl.minus.eig{k + 1}"] = self.eig_minus[k]
        return out

    def render_machine(self) -> str:
        return "".join(f"{k} = {v}\n" for k, v in self.items())

    def render_text(self) -> str:
        f = self.flags
        a = self.algebra
        lines = [
            f"backend: {self.backend}",
            f"algebra: unimodular={_b(a.unimodular)} solvable={_b(a.solvable)} "
            f"nilpotent={_b(a.nilpotent)} derived={a.derived_dims} lower_central={a.lower_central_dims}",
            "",
            f"Einstein:           {_b(f['einstein'])}",
            f"Bach-flat:          {_b(f['bach_flat'])}",
            f"W+ = 0 (sd_flat):   {_b(f['sd_flat'])}",
            f"W- = 0 (asd_flat):  {_b(f['asd_flat'])}",
            f"CE obstruction:     {self.obstruction.status.value} ({self.obstruction.verdict_text})",
            "",
            f"scalar curvature: {_fmt(self.tau)}",
            "Ricci tensor:",
        ]
        lines += _matrix_lines(self.rho)
        lines.append(f"Bach tensor (|B|^2 = {_fmt(self.bach_norm2)}):")
        lines += _matrix_lines(self.B)
        for tag, M, eig, cp in (
            ("W+", self.W_plus, self.eig_plus, self.charpoly_plus),
            ("W-", self.W_minus, self.eig_minus, self.charpoly_minus),
        ):
            lines.append(f"{tag} on unit 2-forms, eigenvalues {', '.join(_fmt_float(x) for x in eig)}:")
            lines += _matrix_lines(M)
            if cp is not None:
                lines.append(f"  char poly coefficients: {', '.join(_fmt(x) for x in cp)}")
        ob = self.obstruction
        if ob.certificate:
            lines.append(f"obstruction certificate: {_labels(ob.certificate)}")
            lines.append(f"combined equations:      {_labels(ob.support)}")
        if ob.witness is not None:
            extra = " (unconstrained)" if ob.unconstrained else ""
            lines.append(f"candidate T: {', '.join(_fmt(x) for x in ob.witness)}{extra}")
        for w in self.warnings:
            lines.append(f"warning: {w}")
        return "\n".join(lines) + "\n"


def _b(x: bool) -> str:
    return "true" if x else "false"


def _fmt_float(x: float) -> str:
    v = float(x)
    if abs(v) < 1e-12:
        v = 0.0
    return f"{v:.12g}"


def _fmt(x) -> str:
    if isinstance(x, float):
        return _fmt_float(x)
    return format_scalar(x)


def _labels(labels) -> str:
    return " ".join("(" + ",".join(map(str, t)) + ")" for t in labels)


def _matrix_lines(M) -> list[str]:
    cells = [[_fmt(x) for x in row] for row in np.asarray(M)]
    w = max(len(c) for row in cells for c in row)
    return ["  " + "  ".join(c.rjust(w) for c in row) for row in cells]


def _norm2(M):
    acc = 0
    for x in np.asarray(M).flat:
        acc = acc + x * x
    return acc


def _flags(rho, tau, B, Wp, Wm, ob, tol) -> dict[str, bool]:
    return {
        "einstein": einstein_check(rho, tau, tol),
        "bach_flat": all(is_zero(x, tol) for x in np.asarray(B).flat),
        "sd_flat": is_zero_matrix(Wp, tol),
        "asd_flat": is_zero_matrix(Wm, tol),
    }


def analyze(C: StructureConstants, backend: str = "exact", tol: float = FLOAT_TOL) -> AnalysisReport:
    """Full analysis with the exact generic pipeline or the float kernels."""
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    if any(isinstance(x, BiPolynomial) for x in C.c.flat):
        raise TypeError("reports need numeric structure constants; substitute alpha and beta first")
    if backend == "float" or C.is_float:
        return _analyze_float(C.to_float() if not C.is_float else C, tol)
    cu = curvature(C)
    B = bach_tensor(cu.rho, cu.tau, cov_ricci(cu.gamma, cu.rho).d2)
    W = weyl_tensor(cu.R, cu.rho, cu.tau)
    halves = sd_asd_parts(W)
    ob = ce_obstruction(W, div4_weyl(cu.gamma, W))
    rep = AnalysisReport(
        backend="exact",
        algebra=descriptor(C),
        rho=cu.rho,
        tau=cu.tau,
        B=B,
        W_plus=halves.plus,
        W_minus=halves.minus,
        eig_plus=eigen3(halves.plus),
        eig_minus=eigen3(halves.minus),
        charpoly_plus=char_poly(halves.plus),
        charpoly_minus=char_poly(halves.minus),
        obstruction=ob,
    )
    rep.flags = _flags(cu.rho, cu.tau, B, halves.plus, halves.minus, ob, tol)
    return rep


def _analyze_float(C: StructureConstants, tol: float) -> AnalysisReport:
    t = _kernels.curvature_batch(np.asarray(C.c, dtype=float)[None])
    rho, tau, B = t["rho"][0], float(t["tau"][0]), t["B"][0]
    plus, minus = _kernels.weyl_halves_batch(t["W"])
    Wp, Wm = plus[0], minus[0]
    ob = ce_obstruction(t["W"][0], t["D"][0], tol)
    rep = AnalysisReport(
        backend="float",
        algebra=descriptor(C),
        rho=rho,
        tau=tau,
        B=B,
        W_plus=Wp,
        W_minus=Wm,
        eig_plus=eigen3(Wp),
        eig_minus=eigen3(Wm),
        charpoly_plus=None,
        charpoly_minus=None,
        obstruction=ob,
    )
    rep.flags = _flags(rho, tau, B, Wp, Wm, ob, tol)
    return rep


def compare_reports(a: AnalysisReport, b: AnalysisReport, tol: float = 1e-9) -> list[str]:
    """Keys whose values differ (floats compared to ``tol``)."""
    na, nb = a.numeric(), b.numeric()
    bad = []
    for k in sorted(set(na) | set(nb)):
        x, y = na.get(k), nb.get(k)
        if isinstance(x, float) and isinstance(y, float):
            if abs(x - y) > tol:
                bad.append(k)
        elif x != y:
            bad.append(k)
    return bad
