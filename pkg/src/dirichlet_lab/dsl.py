"""Expression language for the test functions f(t).

Grammar (whitespace insensitive)::

    expr      := term (('+' | '-') term)*
    term      := unary (('*' | '/') unary)*
    unary     := '-' unary | power
    power     := atom ('^' INTEGER)?
    atom      := NUMBER | 't' | 'pi' | '(' expr ')'
               | ('sin' | 'cos' | 'exp' | 'abs') '(' expr ')'
               | 'bump' '(' const ',' const ')'
               | 'piecewise' '(' branch (';' branch)* ';' 'else' ':' expr ')'
    branch    := '[' const ',' const ']' ':' expr

``const`` is any expression that folds to a number (no ``t``).  Division is
only allowed by a constant; it becomes a scalar multiple.  Piecewise branches
cover the half-open interval ``[a, b)`` and must be listed in increasing,
non-overlapping order.  ``bump(a, b)`` is the C-infinity bump
``exp(1 - 1/(1 - s^2))`` with ``s`` mapping ``[a, b]`` onto ``[-1, 1]``; it
peaks at 1 in the middle of the interval and vanishes outside ``(a, b)``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np


class DSLError(ValueError):
    """Base class for expression errors."""


class ParseError(DSLError):
    def __init__(self, message: str, offset: int, expected: frozenset = frozenset()):
        self.offset = offset
        self.expected = frozenset(expected)
        detail = f"{message} at byte offset {offset}"
        if self.expected:
            detail += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(detail)


class UnknownIdentifierError(ParseError):
    def __init__(self, name: str, offset: int):
        self.name = name
        super().__init__(f"unknown identifier {name!r}", offset)


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Sum:
    terms: tuple


@dataclass(frozen=True)
class Product:
    factors: tuple


@dataclass(frozen=True)
class Scale:
    factor: float
    child: "Node"


@dataclass(frozen=True)
class Power:
    base: "Node"
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str  # sin, cos, exp, abs
    arg: "Node"


@dataclass(frozen=True)
class Branch:
    lo: float
    hi: float
    body: "Node"


@dataclass(frozen=True)
class Piecewise:
    branches: tuple
    default: "Node"


@dataclass(frozen=True)
class Bump:
    lo: float
    hi: float


Node = Union[Const, Var, Sum, Product, Scale, Power, Call, Piecewise, Bump]

FUNCTIONS = ("sin", "cos", "exp", "abs")
_UFUNCS = {"sin": np.sin, "cos": np.cos, "exp": np.exp, "abs": np.abs}


# ---------------------------------------------------------------------------
# construction helpers; the parser routes everything through these so that
# printing and re-parsing reproduces the same tree


def add(a: Node, b: Node) -> Node:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    terms = []
    for x in (a, b):
        terms.extend(x.terms if isinstance(x, Sum) else (x,))
    return Sum(tuple(terms))


def mul(a: Node, b: Node) -> Node:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    if isinstance(a, Const):
        return Scale(a.value, b)
    if isinstance(b, Const):
        return Scale(b.value, a)
    factors = []
    for x in (a, b):
        factors.extend(x.factors if isinstance(x, Product) else (x,))
    return Product(tuple(factors))


def neg(a: Node) -> Node:
    if isinstance(a, Const):
        return Const(-a.value)
    return Scale(-1.0, a)


# ---------------------------------------------------------------------------
# lexer

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()\[\],;:]))"
)


@dataclass(frozen=True)
class Token:
    kind: str  # num, name, op, end
    text: str
    offset: int


def tokenize(source: str) -> list:
    tokens = []
    pos = 0
    while True:
        m = _TOKEN_RE.match(source, pos)
        if m is None or m.end() == pos:
            rest = source[pos:]
            if not rest.strip():
                break
            bad = pos + (len(rest) - len(rest.lstrip()))
            raise ParseError(f"unexpected character {source[bad]!r}", _byte_offset(source, bad))
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append(Token(kind, m.group(kind), _byte_offset(source, start)))
        pos = m.end()
    tokens.append(Token("end", "", _byte_offset(source, len(source))))
    return tokens


def _byte_offset(source: str, index: int) -> int:
    return len(source[:index].encode("utf-8"))


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, source: str):
        self.tokens = tokenize(source)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind == "end":
            self.fail({repr(text)})
        return self.advance()

    def fail(self, expected, message=None):
        tok = self.tok
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(message or f"unexpected {found}", tok.offset, frozenset(expected))

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            self.fail({"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"})
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            rhs = self.term()
            node = add(node, rhs if op == "+" else neg(rhs))
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance()
            rhs = self.unary()
            if op.text == "*":
                node = mul(node, rhs)
            else:
                if not isinstance(rhs, Const):
                    raise ParseError("divisor must be a constant expression", op.offset)
                if rhs.value == 0.0:
                    raise ParseError("division by zero", op.offset)
                node = mul(node, Const(1.0 / rhs.value))
        return node

    def unary(self) -> Node:
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            return neg(self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            tok = self.tok
            if tok.kind != "num" or not tok.text.isdigit():
                self.fail({"natural-number exponent"})
            self.advance()
            return Power(base, int(tok.text))
        return base

    def atom(self) -> Node:
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return Const(float(tok.text))
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "name":
            self.advance()
            if tok.text == "t":
                return Var()
            if tok.text == "pi":
                return Const(math.pi)
            if tok.text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(tok.text, arg)
            if tok.text == "bump":
                self.expect("(")
                lo = self.const()
                self.expect(",")
                hi = self.const()
                self.expect(")")
                if not lo < hi:
                    raise ParseError("bump requires lo < hi", tok.offset)
                return Bump(lo, hi)
            if tok.text == "piecewise":
                return self.piecewise(tok)
            raise UnknownIdentifierError(tok.text, tok.offset)
        self.fail({"number", "'t'", "'('", "function name"})

    def const(self) -> float:
        start = self.tok
        node = self.expr()
        if not isinstance(node, Const):
            raise ParseError("expected a constant expression", start.offset)
        return node.value

    def piecewise(self, head: Token) -> Piecewise:
        self.expect("(")
        branches = []
        while True:
            tok = self.tok
            if tok.kind == "name" and tok.text == "else":
                self.advance()
                self.expect(":")
                default = self.expr()
                self.expect(")")
                break
            if not (tok.kind == "op" and tok.text == "["):
                self.fail({"'['", "'else'"})
            self.advance()
            lo = self.const()
            self.expect(",")
            hi = self.const()
            self.expect("]")
            self.expect(":")
            body = self.expr()
            self.expect(";")
            if not lo < hi:
                raise ParseError("piecewise interval requires lo < hi", tok.offset)
            if branches and lo < branches[-1].hi:
                raise ParseError("piecewise intervals must be increasing and disjoint", tok.offset)
            branches.append(Branch(lo, hi, body))
        if not branches:
            raise ParseError("piecewise needs at least one interval branch", head.offset)
        return Piecewise(tuple(branches), default)


def parse(source: str) -> Node:
    """Parse DSL source into an AST."""
    if not source or not source.strip():
        raise ParseError("empty expression", 0, frozenset({"expression"}))
    return _Parser(source).parse()


# ---------------------------------------------------------------------------
# printing


def to_source(node: Node) -> str:
    """Render ``node`` as DSL text that parses back to the same tree."""
    if isinstance(node, Const):
        return _num(node.value)
    if isinstance(node, Var):
        return "t"
    if isinstance(node, Sum):
        return " + ".join(f"({to_source(x)})" for x in node.terms)
    if isinstance(node, Product):
        return "*".join(f"({to_source(x)})" for x in node.factors)
    if isinstance(node, Scale):
        return f"{_num(node.factor)}*({to_source(node.child)})"
    if isinstance(node, Power):
        return f"({to_source(node.base)})^{node.exponent}"
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    if isinstance(node, Bump):
        return f"bump({_num(node.lo)}, {_num(node.hi)})"
    if isinstance(node, Piecewise):
        parts = [f"[{_num(b.lo)}, {_num(b.hi)}]: {to_source(b.body)}" for b in node.branches]
        parts.append(f"else: {to_source(node.default)}")
        return "piecewise(" + "; ".join(parts) + ")"
    raise DSLError(f"malformed AST node {node!r}")


def _num(x: float) -> str:
    text = repr(float(x))
    # "-2.0" would lex as unary minus applied to 2.0, which folds back to Const(-2.0)
    return f"({text})" if text.startswith("-") else text


# ---------------------------------------------------------------------------
# evaluation


def evaluate(node: Node, t: np.ndarray) -> np.ndarray:
    """Vectorised evaluation of ``node`` at the points ``t``."""
    if isinstance(node, Const):
        return np.full(t.shape, node.value)
    if isinstance(node, Var):
        return t
    if isinstance(node, Sum):
        out = evaluate(node.terms[0], t).copy()
        for x in node.terms[1:]:
            out += evaluate(x, t)
        return out
    if isinstance(node, Product):
        out = evaluate(node.factors[0], t).copy()
        for x in node.factors[1:]:
            out *= evaluate(x, t)
        return out
    if isinstance(node, Scale):
        return node.factor * evaluate(node.child, t)
    if isinstance(node, Power):
        return evaluate(node.base, t) ** node.exponent
    if isinstance(node, Call):
        return _UFUNCS[node.func](evaluate(node.arg, t))
    if isinstance(node, Bump):
        return _bump(node.lo, node.hi, t)
    if isinstance(node, Piecewise):
        out = evaluate(node.default, t)
        if out is t:
            out = out.copy()
        for br in node.branches:
            mask = (t >= br.lo) & (t < br.hi)
            if mask.any():
                out = np.where(mask, evaluate(br.body, t), out)
        return out
    raise DSLError(f"malformed AST node {node!r}")


def _bump(lo: float, hi: float, t: np.ndarray) -> np.ndarray:
    s = (2.0 * t - (lo + hi)) / (hi - lo)
    inside = np.abs(s) < 1.0
    q = np.where(inside, 1.0 - s * s, 1.0)
    return np.where(inside, np.exp(1.0 - 1.0 / q), 0.0)


# ---------------------------------------------------------------------------
# static analysis used to guide quadrature


def breakpoints(node: Node) -> tuple:
    """Sorted locations where ``node`` may be non-smooth (jumps or kinks)."""
    pts = set()
    _collect_breaks(node, pts)
    return tuple(sorted(pts))


def _collect_breaks(node, pts):
    if isinstance(node, (Sum,)):
        for x in node.terms:
            _collect_breaks(x, pts)
    elif isinstance(node, Product):
        for x in node.factors:
            _collect_breaks(x, pts)
    elif isinstance(node, Scale):
        _collect_breaks(node.child, pts)
    elif isinstance(node, Power):
        _collect_breaks(node.base, pts)
    elif isinstance(node, Call):
        _collect_breaks(node.arg, pts)
        if node.func == "abs":
            aff = affine_coefficients(node.arg)
            if aff is not None and aff[0] != 0.0:
                pts.add(-aff[1] / aff[0])
    elif isinstance(node, Bump):
        pts.update((node.lo, node.hi))
    elif isinstance(node, Piecewise):
        for br in node.branches:
            pts.update((br.lo, br.hi))
            _collect_breaks(br.body, pts)
        _collect_breaks(node.default, pts)


def affine_coefficients(node: Node) -> Optional[tuple]:
    """Return ``(slope, intercept)`` when ``node`` is affine in t, else None."""
    if isinstance(node, Const):
        return (0.0, node.value)
    if isinstance(node, Var):
        return (1.0, 0.0)
    if isinstance(node, Scale):
        inner = affine_coefficients(node.child)
        if inner is None:
            return None
        return (node.factor * inner[0], node.factor * inner[1])
    if isinstance(node, Sum):
        slope = intercept = 0.0
        for x in node.terms:
            c = affine_coefficients(x)
            if c is None:
                return None
            slope += c[0]
            intercept += c[1]
        return (slope, intercept)
    return None


def frequency_bound(node: Node) -> float:
    """Rough upper bound on the angular frequency content of ``node``.

    Used only to size initial quadrature panels; adaptivity covers the rest.
    """
    if isinstance(node, (Const, Var)):
        return 0.0
    if isinstance(node, Sum):
        return max(frequency_bound(x) for x in node.terms)
    if isinstance(node, Product):
        return sum(frequency_bound(x) for x in node.factors)
    if isinstance(node, Scale):
        return frequency_bound(node.child)
    if isinstance(node, Power):
        return node.exponent * frequency_bound(node.base)
    if isinstance(node, Call):
        if node.func in ("sin", "cos"):
            aff = affine_coefficients(node.arg)
            return abs(aff[0]) if aff is not None else max(1.0, frequency_bound(node.arg))
        return frequency_bound(node.arg)
    if isinstance(node, Bump):
        return 4.0 * math.pi / (node.hi - node.lo)
    if isinstance(node, Piecewise):
        return max([frequency_bound(b.body) for b in node.branches] + [frequency_bound(node.default)])
    raise DSLError(f"malformed AST node {node!r}")


def support(node: Node) -> Optional[tuple]:
    """Closed interval outside which ``node`` is identically zero, if derivable."""
    if isinstance(node, Const):
        return (math.inf, -math.inf) if node.value == 0.0 else None
    if isinstance(node, Bump):
        return (node.lo, node.hi)
    if isinstance(node, Scale):
        if node.factor == 0.0:
            return (math.inf, -math.inf)
        return support(node.child)
    if isinstance(node, Product):
        sup = None
        for x in node.factors:
            s = support(x)
            if s is not None:
                sup = s if sup is None else (max(sup[0], s[0]), min(sup[1], s[1]))
        return sup
    if isinstance(node, Power):
        return support(node.base) if node.exponent > 0 else None
    if isinstance(node, Sum):
        parts = [support(x) for x in node.terms]
        if any(p is None for p in parts):
            return None
        return (min(p[0] for p in parts), max(p[1] for p in parts))
    if isinstance(node, Piecewise):
        d = support(node.default)
        if d is None:
            return None
        lo = min([node.branches[0].lo, d[0]])
        hi = max([node.branches[-1].hi, d[1]])
        return (lo, hi)
    if isinstance(node, Call) and node.func in ("sin", "abs"):
        inner = support(node.arg)
        return inner
    return None
