"""Command line entry point: ``bachflat report|check|family|verify-paper``."""

from __future__ import annotations

import argparse
import sys
import time
from importlib import resources
from pathlib import Path

from .analysis import AnalysisReport, analyze
from .expr_parser import ParseError, format_scalar, parse_algebra
from .lie import JacobiError, require_jacobi
from .scalars import BiPolynomial, FieldMismatchError

EXIT_OK, EXIT_FALSE, EXIT_PARSE, EXIT_JACOBI, EXIT_FIELD = 0, 1, 2, 3, 4

FIXTURES = ("family", "thm1", "rescaled", "thm2", "ch2", "g11", "abelian")


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def fixture_text(name: str) -> str:
    stem = name[:-5] if name.endswith(".dsys") else name
    if stem not in FIXTURES:
        raise KeyError(name)
    return resources.files("bachflat").joinpath("fixtures", f"{stem}.dsys").read_text()


def read_source(name: str) -> str:
    """File contents, falling back to a bundled fixture of the same name."""
    p = Path(name)
    if p.is_file():
        return p.read_text()
    try:
        return fixture_text(p.name)
    except KeyError:
        raise CliError(f"no such file or bundled fixture: {name}", EXIT_PARSE) from None


def load(name: str, backend: str | None, alpha: str | None = None, beta: str | None = None):
    """Parse and validate an algebra; returns ``(C, warnings)``."""
    text = read_source(name)
    params = {k: v for k, v in (("alpha", alpha), ("beta", beta)) if v is not None}
    warnings: list[str] = []
    try:
        if backend == "float":
            C = parse_algebra(text, "float", params)
        else:
            try:
                C = parse_algebra(text, "exact", params)
            except FieldMismatchError as exc:
                if backend == "exact":
                    raise CliError(f"field incompatibility: {exc}", EXIT_FIELD) from None
                warnings.append(f"coefficients do not fit one biquadratic field ({exc}); using float backend")
                C = parse_algebra(text, "float", params)
    except ParseError as exc:
        raise CliError(f"parse error: {exc}", EXIT_PARSE) from None
    except (ValueError, TypeError) as exc:
        raise CliError(f"parse error: {exc}", EXIT_PARSE) from None
    if any(isinstance(x, BiPolynomial) and not x.is_constant() for x in C.c.flat):
        raise CliError("algebra still depends on alpha/beta; pass --alpha and --beta", EXIT_PARSE)
    if any(isinstance(x, BiPolynomial) for x in C.c.flat):
        C = C.map(lambda x: x.constant_term() if isinstance(x, BiPolynomial) else x)
    try:
        require_jacobi(C)
    except JacobiError as exc:
        viol = ", ".join("(" + ",".join(map(str, v)) + ")" for v in exc.violations)
        raise CliError(f"Jacobi identity fails at (i,j,k,l) = {viol}", EXIT_JACOBI) from None
    return C, warnings


def build_report(args) -> AnalysisReport:
    C, warnings = load(args.file, args.backend, args.alpha, args.beta)
    rep = analyze(C, backend="float" if C.is_float else "exact")
    rep.warnings.extend(warnings)
    return rep


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def cmd_report(args) -> int:
    rep = build_report(args)
    for w in rep.warnings:
        print(f"warning: {w}", file=sys.stderr)
    text = rep.render_machine() if args.format == "machine" else rep.render_text()
    _emit(text, args.out)
    return EXIT_OK


PROPERTIES = ("bach-flat", "einstein", "half-flat", "ce-obstruction")


def cmd_check(args) -> int:
    rep = build_report(args)
    for w in rep.warnings:
        print(f"warning: {w}", file=sys.stderr)
    prop = args.property
    if prop == "bach-flat":
        ok, what = rep.flags["bach_flat"], "Bach-flat"
    elif prop == "einstein":
        ok, what = rep.flags["einstein"], "Einstein"
    elif prop == "half-flat":
        ok = rep.half_flat
        which = [n for n, f in (("W+", "sd_flat"), ("W-", "asd_flat")) if rep.flags[f]]
        what = "half conformally flat" + (f" ({' and '.join(which)} = 0)" if which else "")
    else:
        ok = rep.obstruction.status.value == "INCONSISTENT"
        what = rep.obstruction.verdict_text
        print(f"{args.file}: {rep.obstruction.status.value}, {what}")
        return EXIT_OK if ok else EXIT_FALSE
    print(f"{args.file}: {'' if ok else 'not '}{what}")
    return EXIT_OK if ok else EXIT_FALSE


def cmd_family(args) -> int:
    from . import family

    if args.mode == "solve":
        cert = family.locus_certificate()
        classes = family.classify_solutions(family.bach_flat_locus())
        rows = []
        for ci, cls in enumerate(classes, start=1):
            for m in cls.members:
                rows.append((ci, cls, m))
        if args.format == "machine":
            lines = [
                f"identity.b22_minus_b33 = {'verified' if cert.difference_identity else 'failed'}",
                f"identity.diagonal_b11 = {'verified' if cert.diagonal_identity else 'failed'}",
                f"identity.quartic_unit = {cert.hyperbola_unit}",
                f"solutions.count = {len(rows)}",
                f"classes.count = {len(classes)}",
            ]
            for ci, cls in enumerate(classes, start=1):
                rep = cls.representative
                lines.append(f"class.{ci}.label = {cls.label.value}")
                lines.append(f"class.{ci}.representative = {format_scalar(rep.alpha)}, {format_scalar(rep.beta)}")
            for n, (ci, cls, m) in enumerate(rows, start=1):
                lines.append(f"solution.{n}.alpha = {format_scalar(m.alpha)}")
                lines.append(f"solution.{n}.beta = {format_scalar(m.beta)}")
                lines.append(f"solution.{n}.class = {cls.label.value}")
                for k in ("einstein", "sd_flat", "asd_flat"):
                    lines.append(f"solution.{n}.{k} = {'true' if m.diagnostics[k] else 'false'}")
                lines.append(f"solution.{n}.obstruction = {m.diagnostics['obstruction']}")
            _emit("\n".join(lines) + "\n", args.out)
            return EXIT_OK
        lines = [
            "B22 - B33 = (alpha^2 - beta^2)(1 + 8 alpha beta)/3: "
            + ("verified" if cert.difference_identity else "FAILED"),
            "alpha = beta:        B11 = 2/3 (x^2 - 1)(x^2 - 1/4): "
            + ("verified" if cert.diagonal_identity else "FAILED"),
            f"1 + 8 alpha beta = 0: x^2 B11 = ({cert.hyperbola_unit}) (8x^4 - 7x^2 + 1/8)",
            "",
            f"{'alpha':>24}  {'beta':>24}  class            Einstein  W+=0   W-=0   obstruction",
        ]
        for ci, cls, m in rows:
            d = m.diagnostics
            lines.append(
                f"{format_scalar(m.alpha):>24}  {format_scalar(m.beta):>24}  {cls.label.value:<15}  "
                f"{_yn(d['einstein']):<8}  {_yn(d['sd_flat']):<5}  {_yn(d['asd_flat']):<5}  {d['obstruction']}"
            )
        lines.append("")
        lines.append(f"{len(rows)} solutions in {len(classes)} classes")
        _emit("\n".join(lines) + "\n", args.out)
        return EXIT_OK

    a0, a1, b0, b1 = args.range
    if not (a1 > a0 and b1 > b0):
        raise CliError(f"bad range {args.range}", EXIT_PARSE)
    if args.res < 3:
        raise CliError("--res must be at least 3", EXIT_PARSE)
    t0 = time.perf_counter()
    mins = family.grid_scan((a0, a1), (b0, b1), args.res, threshold=args.threshold)
    dt = time.perf_counter() - t0
    lines = [f"grid {args.res}x{args.res} on [{a0}, {a1}] x [{b0}, {b1}], {dt:.2f}s"]
    lines.append(f"{'alpha':>20}  {'beta':>20}  {'|B|^2':>10}  label")
    for m in mins:
        lines.append(f"{m.alpha:>20.15f}  {m.beta:>20.15f}  {m.norm2:>10.2e}  {m.label}")
    lines.append(f"{len(mins)} refined minima below {args.threshold:g}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _yn(x: bool) -> str:
    return "yes" if x else "no"


def cmd_verify(args) -> int:
    from .acceptance import run_all

    t0 = time.perf_counter()
    outcomes = run_all(args.only)
    for o in outcomes:
        print(o.line())
    failed = [o.criterion.number for o in outcomes if not o.passed]
    total = time.perf_counter() - t0
    print(f"{len(outcomes) - len(failed)}/{len(outcomes)} checks passed in {total:.2f}s")
    if failed:
        print("failed: " + ", ".join(map(str, failed)))
    return EXIT_FALSE if failed else EXIT_OK


# ---------------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bachflat", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def algebra_args(sp):
        sp.add_argument("file", help=".dsys file or bundled fixture name (" + ", ".join(FIXTURES) + ")")
        sp.add_argument("--backend", choices=("exact", "float"), default=None,
                        help="default: exact when coefficients share one field, else float")
        sp.add_argument("--alpha", help="value substituted for alpha")
        sp.add_argument("--beta", help="value substituted for beta")

    sp = sub.add_parser("report", help="curvature report of one algebra")
    algebra_args(sp)
    sp.add_argument("--format", choices=("text", "machine"), default="text")
    sp.add_argument("--out", help="write to this file instead of stdout")
    sp.set_defaults(func=cmd_report)

    sp = sub.add_parser("check", help="test one property; exit 0 iff it holds")
    algebra_args(sp)
    sp.add_argument("property", choices=PROPERTIES)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("family", help="Bach-flat locus of the two-parameter family")
    sp.add_argument("mode", choices=("solve", "grid"))
    sp.add_argument("--format", choices=("text", "machine"), default="text")
    sp.add_argument("--range", nargs=4, type=float, default=[-1.5, 1.5, -1.5, 1.5],
                    metavar=("A0", "A1", "B0", "B1"))
    sp.add_argument("--res", type=int, default=301)
    sp.add_argument("--threshold", type=float, default=1e-6)
    sp.add_argument("--out", help="write to this file instead of stdout")
    sp.set_defaults(func=cmd_family)

    sp = sub.add_parser("verify-paper", help="run every reproduction check with timings")
    sp.add_argument("--only", type=int, nargs="*", help="criterion numbers to run")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
