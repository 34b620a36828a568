"""Scalar literals with radicals, and the ``.dsys`` algebra file format.

A ``.dsys`` file lists the exterior derivatives of the dual coframe::

    # g_{alpha,beta}
    d e2 = alpha e1^e2
    d e3 = beta e1^e3
    d e4 = (alpha+beta) e1^e4 + e2^e3

Absent lines mean ``d e<i> = 0``.  Coefficients are scalar expressions built
from integers, decimals, ``sqrt(<int>)``, the symbols ``alpha``/``beta``,
``+ - * /``, integer powers ``^`` and parentheses.  Indices are 1-based.

The structure constants returned obey ``de^i(e_j, e_k) = -e^i([e_j, e_k])``,
so a term ``a e<j>^e<k>`` in ``d e<i>`` gives ``c^i_{jk} = -a``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .scalars import (
    BiPolynomial,
    BiQuadratic,
    FieldMismatchError,
    field_of_radicands,
    factorize,
    squarefree_split,
)


class ParseError(ValueError):
    """Syntax or semantic error in a scalar expression or ``.dsys`` file."""

    def __init__(self, message: str, pos: int | None = None, line: int | None = None):
        self.message = message
        self.pos = pos
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if pos is not None:
            where.append(f"col {pos + 1}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


# ---------------------------------------------------------------------------
# exact values used while parsing: polynomials in alpha, beta whose
# coefficients are finite sums of rational multiples of square roots


Surd = dict  # {squarefree int: Fraction}


def _s_add(x: Surd, y: Surd, sign: int = 1) -> Surd:
    out = dict(x)
    for d, c in y.items():
        v = out.get(d, 0) + sign * c
        if v:
            out[d] = v
        else:
            out.pop(d, None)
    return out


def _s_mul(x: Surd, y: Surd) -> Surd:
    out: Surd = {}
    for d1, c1 in x.items():
        for d2, c2 in y.items():
            g = math.gcd(d1, d2)
            d = d1 * d2 // (g * g)
            out[d] = out.get(d, 0) + c1 * c2 * g
    return {d: c for d, c in out.items() if c}


def _s_inv(x: Surd) -> Surd:
    if not x:
        raise ZeroDivisionError
    primes = sorted({p for d in x for p, _ in factorize(d)})
    num: Surd = {1: Fraction(1)}
    y = x
    for p in primes:
        conj = {d: (-c if d % p == 0 else c) for d, c in y.items()}
        num = _s_mul(num, conj)
        y = _s_mul(y, conj)
    (r,) = y.values()
    return {d: c / r for d, c in num.items()}


class _Val:
    __slots__ = ("poly",)

    def __init__(self, poly: dict):
        self.poly = {k: v for k, v in poly.items() if v}

    @classmethod
    def const(cls, q) -> _Val:
        q = Fraction(q)
        return cls({(0, 0): {1: q}} if q else {})

    @classmethod
    def sqrt(cls, n: int) -> _Val:
        m, d = squarefree_split(n)
        return cls({(0, 0): {d: Fraction(m)}})

    def is_constant(self) -> bool:
        return all(k == (0, 0) for k in self.poly)

    def surd(self) -> Surd:
        return self.poly.get((0, 0), {})

    def __add__(self, o: _Val) -> _Val:
        out = dict(self.poly)
        for k, s in o.poly.items():
            out[k] = _s_add(out.get(k, {}), s)
        return _Val(out)

    def __neg__(self) -> _Val:
        return _Val({k: {d: -c for d, c in s.items()} for k, s in self.poly.items()})

    def __sub__(self, o: _Val) -> _Val:
        return self + (-o)

    def __mul__(self, o: _Val) -> _Val:
        out: dict = {}
        for (i1, j1), s1 in self.poly.items():
            for (i2, j2), s2 in o.poly.items():
                k = (i1 + i2, j1 + j2)
                out[k] = _s_add(out.get(k, {}), _s_mul(s1, s2))
        return _Val(out)

    def inverse(self) -> _Val:
        if not self.is_constant():
            raise ValueError("division by a non-constant polynomial")
        return _Val({(0, 0): _s_inv(self.surd())})

    def radicands(self) -> set[int]:
        return {d for s in self.poly.values() for d in s}


# ---------------------------------------------------------------------------
# tokenizer


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<ident>[^\W\d]\w*)|(?P<op>[-+*/^()=]))",
    re.UNICODE,
)

_GREEK = {"α": "alpha", "β": "beta"}


@dataclass
class _Tok:
    kind: str  # "num", "ident", "op", "end"
    text: str
    pos: int


def _tokenize(text: str, line: int | None = None) -> list[_Tok]:
    toks: list[_Tok] = []
    i = 0
    n = len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN_RE.match(text, i)
        if not m or m.end() == i:
            raise ParseError(f"unexpected character {text[i]!r}", i, line)
        kind = m.lastgroup
        val = m.group(kind)
        start = m.start(kind)
        if kind == "ident":
            val = _GREEK.get(val, val)
        toks.append(_Tok(kind, val, start))
        i = m.end()
    toks.append(_Tok("end", "", n))
    return toks


_E_RE = re.compile(r"e(\d+)$")


class _Parser:
    def __init__(self, text: str, params: dict[str, _Val] | None = None, line: int | None = None):
        self.toks = _tokenize(text, line)
        self.i = 0
        self.params = params or {}
        self.line = line

    # helpers
    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: _Tok | None = None) -> ParseError:
        return ParseError(msg, (tok or self.tok).pos, self.line)

    def expect(self, kind: str, text: str | None = None) -> _Tok:
        t = self.tok
        if t.kind != kind or (text is not None and t.text != text):
            want = text or kind
            got = t.text or "end of input"
            raise self.error(f"expected {want!r}, got {got!r}")
        return self.advance()

    def at_op(self, *ops: str) -> bool:
        return self.tok.kind == "op" and self.tok.text in ops

    def at_basis(self, k: int = 0) -> bool:
        t = self.toks[self.i + k]
        return t.kind == "ident" and _E_RE.match(t.text) is not None

    # scalar grammar
    def expr(self) -> _Val:
        v = self.term()
        while self.at_op("+", "-"):
            op = self.advance().text
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self, stop_at_basis: bool = False) -> _Val:
        v = self.unary()
        while self.at_op("*", "/"):
            if stop_at_basis and self.at_basis(1):
                break
            op_tok = self.advance()
            w = self.unary()
            if op_tok.text == "*":
                v = v * w
            else:
                try:
                    v = v * w.inverse()
                except ZeroDivisionError:
                    raise self.error("division by zero", op_tok) from None
                except ValueError as exc:
                    raise self.error(str(exc), op_tok) from None
        return v

    def unary(self) -> _Val:
        if self.at_op("-"):
            self.advance()
            return -self.unary()
        if self.at_op("+"):
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> _Val:
        base = self.atom()
        if self.at_op("^"):
            self.advance()
            t = self.expect("num")
            if not t.text.isdigit():
                raise self.error("exponent must be a non-negative integer", t)
            out = _Val.const(1)
            for _ in range(int(t.text)):
                out = out * base
            return out
        return base

    def atom(self) -> _Val:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return _Val.const(Fraction(t.text))
        if t.kind == "ident":
            if t.text == "sqrt":
                self.advance()
                self.expect("op", "(")
                n = self.expect("num")
                if not n.text.isdigit():
                    raise self.error("sqrt takes a non-negative integer", n)
                self.expect("op", ")")
                return _Val.sqrt(int(n.text))
            if t.text in ("alpha", "beta"):
                self.advance()
                if t.text in self.params:
                    return self.params[t.text]
                return _Val({(1, 0) if t.text == "alpha" else (0, 1): {1: Fraction(1)}})
            raise self.error(f"unknown identifier {t.text!r}")
        if self.at_op("("):
            self.advance()
            v = self.expr()
            self.expect("op", ")")
            return v
        raise self.error(f"unexpected {t.text or 'end of input'!r}")

    # algebra-line grammar
    def basis_index(self) -> int:
        t = self.tok
        m = _E_RE.match(t.text) if t.kind == "ident" else None
        if not m:
            raise self.error(f"expected a basis 1-form e<k>, got {t.text or 'end of input'!r}")
        self.advance()
        k = int(m.group(1))
        if not 1 <= k <= 4:
            raise self.error(f"index {k} out of range 1..4", t)
        return k

    def wedge_term(self) -> tuple[_Val, int, int, _Tok]:
        sign = 1
        while self.at_op("+", "-"):
            if self.advance().text == "-":
                sign = -sign
        start = self.tok
        if self.at_basis():
            coef = _Val.const(1)
        else:
            coef = self.term(stop_at_basis=True)
            if self.at_op("*"):
                self.advance()
        j = self.basis_index()
        self.expect("op", "^")
        kt = self.tok
        k = self.basis_index()
        if j >= k:
            raise self.error(f"wedge e{j}^e{k} must have ascending indices", kt)
        return (coef if sign > 0 else -coef), j, k, start

    def dsys_line(self) -> tuple[int, list[tuple[_Val, int, int, _Tok]]]:
        t = self.tok
        if t.kind == "ident" and t.text == "d":
            self.advance()
            i = self.basis_index()
        elif t.kind == "ident" and re.fullmatch(r"de\d+", t.text):
            self.advance()
            i = int(t.text[2:])
            if not 1 <= i <= 4:
                raise self.error(f"index {i} out of range 1..4", t)
        else:
            raise self.error("expected 'd e<i> = ...'")
        self.expect("op", "=")
        terms: list = []
        if self.tok.kind == "num" and self.tok.text in ("0", "0.0") and self.toks[self.i + 1].kind == "end":
            self.advance()
        else:
            terms.append(self.wedge_term())
            while self.at_op("+", "-"):
                terms.append(self.wedge_term())
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")
        return i, terms


# ---------------------------------------------------------------------------
# normalization into scalar backends


def _surd_to_float(s: Surd) -> float:
    return sum(float(c) * math.sqrt(d) for d, c in s.items())


def _val_to_float(v: _Val) -> float:
    if not v.is_constant():
        raise ValueError("symbolic coefficient has no float value; substitute alpha/beta first")
    return _surd_to_float(v.surd())


def _normalize(vals: list[_Val], backend: str = "exact", field: tuple[int, int] | None = None) -> list:
    if backend == "float":
        return [_val_to_float(v) for v in vals]
    if backend != "exact":
        raise ValueError(f"unknown backend {backend!r}")
    symbolic = any(not v.is_constant() for v in vals)
    rads = set().union(*(v.radicands() for v in vals)) if vals else set()
    if symbolic:
        if rads - {1}:
            raise FieldMismatchError("radicals inside symbolic coefficients are not supported")
        return [BiPolynomial({k: s.get(1, 0) for k, s in v.poly.items()}) for v in vals]
    if field is None:
        field = field_of_radicands(rads)
    out = []
    for v in vals:
        s = v.surd()
        if field is None:
            out.append(s.get(1, Fraction(0)))
        else:
            out.append(BiQuadratic.from_surd(field[0], field[1], s))
    return out


def _params_to_vals(params: dict | None) -> dict[str, _Val]:
    out = {}
    for name, val in (params or {}).items():
        if name not in ("alpha", "beta"):
            raise ValueError(f"unknown parameter {name!r}")
        if isinstance(val, str):
            out[name] = _Parser(val).expr()
        elif isinstance(val, BiQuadratic):
            out[name] = _Val({(0, 0): val.surd()})
        elif isinstance(val, float):
            raise TypeError("float parameters: use backend='float' and pass strings or exact values")
        else:
            out[name] = _Val.const(Fraction(val))
    return out


def parse_scalar(text: str, field: tuple[int, int] | None = None):
    """Parse a scalar literal into a Fraction, BiQuadratic or BiPolynomial.

    Square roots are reduced to square-free form (``sqrt(8)`` is ``2*sqrt(2)``).
    Without ``field`` the smallest biquadratic field holding the value is
    chosen; see :func:`bachflat.scalars.field_of_radicands`.
    """
    p = _Parser(text)
    v = p.expr()
    if p.tok.kind != "end":
        raise p.error(f"unexpected {p.tok.text!r}")
    return _normalize([v], "exact", field)[0]


def parse_algebra(text: str, backend: str = "exact", params: dict | None = None):
    """Parse ``.dsys`` text into :class:`~bachflat.lie.StructureConstants`.

    ``backend="exact"`` gives Rational, BiQuadratic (one shared field) or
    BiPolynomial constants; ``backend="float"`` gives a float64 array.
    ``params`` substitutes values (strings or exact scalars) for ``alpha``/``beta``.
    """
    from .lie import StructureConstants

    pvals = _params_to_vals(params)
    entries: dict[tuple[int, int, int], _Val] = {}
    seen_lines: set[int] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        p = _Parser(line, pvals, lineno)
        i, terms = p.dsys_line()
        if i in seen_lines:
            raise ParseError(f"duplicate line for d e{i}", None, lineno)
        seen_lines.add(i)
        for coef, j, k, tok in terms:
            if (i, j, k) in entries:
                raise ParseError(f"duplicate term e{j}^e{k} in d e{i}", tok.pos, lineno)
            entries[(i, j, k)] = coef
    keys = sorted(entries)
    vals = _normalize([entries[k] for k in keys], backend)
    if backend == "float":
        c = np.zeros((4, 4, 4))
    else:
        c = np.full((4, 4, 4), 0, dtype=object)
    for (i, j, k), a in zip(keys, vals):
        # c^i_{jk} = -(coefficient of e^j ^ e^k in de^i)
        c[j - 1, k - 1, i - 1] = -a
        c[k - 1, j - 1, i - 1] = a
    return StructureConstants(c)


# ---------------------------------------------------------------------------
# formatting


def _format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _join_signed(parts: list[tuple[int, str]]) -> str:
    out = ""
    for n, body in parts:
        if not out:
            out = ("-" if n < 0 else "") + body
        else:
            out += ("-" if n < 0 else "+") + body
    return out


def _biquadratic_text(x: BiQuadratic) -> str:
    L = math.lcm(*(c.denominator for c in x.coeffs))
    nums = [int(c * L) for c in x.coeffs]
    radicands = (None, x.a, x.b, x.a * x.b)
    parts = []
    for n, r in zip(nums, radicands):
        if n == 0:
            continue
        if r is None:
            body = str(abs(n))
        elif abs(n) == 1:
            body = f"sqrt({r})"
        else:
            body = f"{abs(n)}*sqrt({r})"
        parts.append((n, body))
    if not parts:
        return "0"
    joined = _join_signed(parts)
    if L == 1:
        return joined
    if len(parts) == 1:
        return f"{joined}/{L}"
    return f"({joined})/{L}"


def _monomial_text(i: int, j: int) -> str:
    fs = []
    for name, e in (("alpha", i), ("beta", j)):
        if e == 1:
            fs.append(name)
        elif e > 1:
            fs.append(f"{name}^{e}")
    return "*".join(fs)


def _poly_text(p: BiPolynomial) -> str:
    if not p.terms:
        return "0"
    parts = []
    for (i, j), c in sorted(p.terms.items(), key=lambda kv: (kv[0][0] + kv[0][1], -kv[0][0])):
        mono = _monomial_text(i, j)
        mag = _format_fraction(abs(c))
        if not mono:
            body = mag
        elif mag == "1":
            body = mono
        else:
            body = f"{mag}*{mono}"
        parts.append((1 if c > 0 else -1, body))
    return _join_signed(parts)


def format_scalar(x) -> str:
    """Canonical text for a scalar; :func:`parse_scalar` maps it back to ``x``."""
    if isinstance(x, BiQuadratic):
        return _biquadratic_text(x)
    if isinstance(x, BiPolynomial):
        return _poly_text(x)
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, (int, Fraction)) or hasattr(x, "denominator"):
        return _format_fraction(Fraction(x))
    return repr(float(x))


def render_algebra(C) -> str:
    """Canonical ``.dsys`` text for structure constants (inverse of :func:`parse_algebra`)."""
    c = C.c
    lines = []
    for i in range(4):
        parts = []
        for j in range(4):
            for k in range(j + 1, 4):
                a = -c[j, k, i]
                if a == 0:
                    continue
                wedge = f"e{j + 1}^e{k + 1}"
                if a == 1:
                    parts.append(("+", wedge))
                elif a == -1:
                    parts.append(("-", wedge))
                else:
                    parts.append(("+", f"({format_scalar(a)}) {wedge}"))
        if not parts:
            lines.append(f"d e{i + 1} = 0")
            continue
        rhs = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for s, body in parts[1:]:
            rhs += f" {s} {body}"
        lines.append(f"d e{i + 1} = {rhs}")
    return "\n".join(lines) + "\n"
