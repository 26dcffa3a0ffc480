"""Text syntax for polynomials and holomorphic vector fields.

Polynomials::

    2*Re((z1^3*z2^2)*conj(z1*z2)) - (1/2+1/3i)*w*zb1 + 3/4i*u

Variables are ``w``, ``wb``, ``u``, ``zK`` and ``zbK`` (``K >= 1``) and the
constant ``i``.  Number literals are integers or ``a/b``, optionally with a
trailing ``i``.  Operators are ``+ - * / ^`` with the usual precedence;
``^`` takes a nonnegative integer literal and ``/`` a nonzero constant.
``Re``, ``Im`` and ``conj`` act on whole expressions.

Vector fields are sums of ``(poly) d/dw`` and ``(poly) d/dzK`` terms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .exactalg import ONE, GaussQ, I, format_gaussq
from .wpoly import MixedPoly, Monomial, WeightSystem, re_part, im_part


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


# ---------------------------------------------------------------------------
# tokens

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<deriv>d/d(?:w|z[0-9]+)\b)
  | (?P<num>[0-9]+(?:/[0-9]+)?i?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    line, col = 1, 1
    while pos < len(text):
        mt = _TOKEN_RE.match(text, pos)
        if mt is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = mt.lastgroup
        s = mt.group()
        if kind != "ws":
            tokens.append(Token(kind, s, line, col))
        for ch in s:
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        pos = mt.end()
    tokens.append(Token("end", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Num:
    value: GaussQ


@dataclass(frozen=True)
class Var:
    name: str  # "w", "wb", "u", "z", "zb"
    index: int = 0


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    line: int = 0
    column: int = 0


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str  # "Re", "Im", "conj"
    arg: "Expr"


Expr = Union[Num, Var, Neg, BinOp, Pow, Call]

_FUNCS = ("Re", "Im", "conj")
_VAR_RE = re.compile(r"(zb|z)([0-9]+)$")


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.column)

    def expect(self, text: str) -> Token:
        if self.tok.text != text:
            found = self.tok.text or "end of input"
            self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def finish(self):
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.text!r}")

    # expr := term (('+' | '-') term)*
    def expr(self) -> Expr:
        node = self.term()
        while self.tok.text in ("+", "-"):
            op = self.advance()
            node = BinOp(op.text, node, self.term(), op.line, op.column)
        return node

    # term := unary (('*' | '/') unary)*
    def term(self) -> Expr:
        node = self.unary()
        while self.tok.text in ("*", "/"):
            op = self.advance()
            node = BinOp(op.text, node, self.unary(), op.line, op.column)
        return node

    def unary(self) -> Expr:
        if self.tok.text == "-":
            self.advance()
            return Neg(self.unary())
        if self.tok.text == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.tok.text == "^":
            self.advance()
            t = self.tok
            if t.kind != "num" or "/" in t.text or t.text.endswith("i"):
                self.error("exponent must be a nonnegative integer literal", t)
            self.advance()
            if self.tok.text == "^":
                self.error("chained exponents are ambiguous; use parentheses")
            return Pow(base, int(t.text))
        return base

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Num(_literal(t))
        if t.kind == "ident":
            self.advance()
            if t.text in _FUNCS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(t.text, arg)
            if t.text == "i":
                return Num(I)
            if t.text in ("w", "wb", "u"):
                return Var(t.text)
            mv = _VAR_RE.match(t.text)
            if mv and int(mv.group(2)) >= 1:
                return Var(mv.group(1), int(mv.group(2)))
            self.error(f"unknown variable {t.text!r}", t)
        if t.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        self.error(f"unexpected {t.text or 'end of input'!r}", t)

    # field := fterm (('+' | '-') fterm)*
    def field(self) -> list[tuple[int, Expr, Token]]:
        out = [self.field_term(False)]
        while self.tok.text in ("+", "-"):
            neg = self.advance().text == "-"
            out.append(self.field_term(neg))
        return out

    def field_term(self, negate: bool):
        while self.tok.text in ("+", "-"):
            negate ^= self.advance().text == "-"
        start = self.tok
        if self.tok.kind == "deriv":
            coef: Expr = Num(ONE)
        else:
            coef = self.power()
        if self.tok.kind != "deriv":
            self.error("expected d/dw or d/dzK after a field coefficient")
        d = self.advance().text[3:]
        idx = 0 if d == "w" else int(d[1:])
        if d != "w" and idx < 1:
            self.error("field components are d/dz1, d/dz2, ...", start)
        return idx, (Neg(coef) if negate else coef), start


def _literal(t: Token) -> GaussQ:
    s = t.text
    imag = s.endswith("i")
    if imag:
        s = s[:-1]
    try:
        v = Fraction(s)
    except ZeroDivisionError:
        raise ParseError("zero denominator in literal", t.line, t.column) from None
    return GaussQ(0, v) if imag else GaussQ(v)


def _max_index(node: Expr) -> int:
    if isinstance(node, Var):
        return node.index
    if isinstance(node, (Neg,)):
        return _max_index(node.operand)
    if isinstance(node, BinOp):
        return max(_max_index(node.left), _max_index(node.right))
    if isinstance(node, Pow):
        return _max_index(node.base)
    if isinstance(node, Call):
        return _max_index(node.arg)
    return 0


def lower(node: Expr, n: int) -> MixedPoly:
    """Expand an AST into its canonical polynomial with ``n`` z-variables."""
    if isinstance(node, Num):
        return MixedPoly.const(node.value, n)
    if isinstance(node, Var):
        if node.name == "w":
            return MixedPoly.monomial(a=1, n=n)
        if node.name == "wb":
            return MixedPoly.monomial(b=1, n=n)
        if node.name == "u":
            return MixedPoly.monomial(c=1, n=n)
        e = tuple(1 if k == node.index - 1 else 0 for k in range(n))
        if node.name == "z":
            return MixedPoly.monomial(J=e, n=n)
        return MixedPoly.monomial(K=e, n=n)
    if isinstance(node, Neg):
        return -lower(node.operand, n)
    if isinstance(node, Pow):
        return lower(node.base, n) ** node.exponent
    if isinstance(node, Call):
        x = lower(node.arg, n)
        if node.func == "conj":
            return x.conj()
        return re_part(x) if node.func == "Re" else im_part(x)
    if isinstance(node, BinOp):
        a, b = lower(node.left, n), lower(node.right, n)
        try:
            if node.op == "+":
                return a + b
            if node.op == "-":
                return a - b
            if node.op == "*":
                return a * b
        except ValueError as exc:
            raise ParseError(str(exc), node.line, node.column) from None
        # division by a constant
        if any(m.degree for m in b.support):
            raise ParseError("can only divide by a constant", node.line, node.column)
        if b.is_zero():
            raise ParseError("division by zero", node.line, node.column)
        return a / b.coeff(Monomial(J=(0,) * n, K=(0,) * n))
    raise TypeError(f"unknown node {node!r}")


def parse_expr(text: str) -> Expr:
    ps = _Parser(text)
    node = ps.expr()
    ps.finish()
    return node


def parse_poly(text: str, n: int | WeightSystem | None = None) -> MixedPoly:
    node = parse_expr(text)
    if isinstance(n, WeightSystem):
        n = n.n
    k = _max_index(node)
    if n is not None and k > n:
        raise ParseError(f"variable index {k} exceeds the {n} available variables")
    return lower(node, max(k, n or 0))


def parse_field(text: str, n: int | WeightSystem | None = None):
    from .vfield import HoloVectorField

    if isinstance(n, WeightSystem):
        n = n.n
    if text.strip() == "0":
        return HoloVectorField.zero(n or 0)
    ps = _Parser(text)
    parts = ps.field()
    ps.finish()
    k = max([idx for idx, _, _ in parts] + [_max_index(e) for _, e, _ in parts])
    if n is not None and k > n:
        raise ParseError(f"variable index {k} exceeds the {n} available variables")
    n = max(k, n or 0)
    comps = [MixedPoly.zero(n) for _ in range(n + 1)]
    for idx, e, tok in parts:
        q = lower(e, n)
        if not (q.is_holomorphic() and not any(m.c for m in q.support)):
            raise ParseError("field coefficients must be holomorphic (no wb, zb or u)", tok.line, tok.column)
        comps[idx] = comps[idx] + q
    return HoloVectorField(comps)


# ---------------------------------------------------------------------------
# printing


def format_monomial(m: Monomial) -> str:
    factors = []

    def emit(name: str, e: int):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")

    emit("w", m.a)
    emit("wb", m.b)
    emit("u", m.c)
    for k, e in enumerate(m.J):
        emit(f"z{k + 1}", e)
    for k, e in enumerate(m.K):
        emit(f"zb{k + 1}", e)
    return "*".join(factors)


def _is_negative(c: GaussQ) -> bool:
    return (c.im == 0 and c.re < 0) or (c.re == 0 and c.im < 0)


def format_poly(p: MixedPoly) -> str:
    """Canonical text; parsing it back gives an equal polynomial."""
    out = []
    for k, (m, c) in enumerate(p.terms()):
        neg = _is_negative(c)
        mag = -c if neg else c
        mono = format_monomial(m)
        if not mono:
            body = format_gaussq(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{format_gaussq(mag)}*{mono}"
        if k == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out) or "0"


def format_field(H) -> str:
    parts = []
    for k, q in enumerate(H.q):
        if q.is_zero():
            continue
        d = "d/dw" if k == 0 else f"d/dz{k}"
        parts.append(f"({format_poly(q)}) {d}")
    return " + ".join(parts) or "0"
