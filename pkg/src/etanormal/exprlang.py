"""Scalar expression language over chart coordinates.

Grammar (whitespace is insignificant)::

    expr    := term { ("+" | "-") term }
    term    := unary { ("*" | "/") unary }
    unary   := ("-" | "+") unary | power
    power   := atom [ ("^" | "**") ["-"] INTEGER ]
    atom    := NUMBER | "pi" | NAME | NAME "[" INTEGER "]"
             | FUNC "(" expr ")" | "(" expr ")"
    FUNC    := exp | log | sin | cos | sinh | cosh | sqrt

``NAME`` must be one of the chart's coordinate names.  ``NAME[k]`` refers to
coordinate ``k`` by position and is accepted for any declared name.  Unary
minus binds looser than ``^``, so ``-x^2`` is ``-(x^2)``.  Exponents are
integer literals only; fractional powers are spelled with ``sqrt`` or
``exp``/``log``.

Expressions evaluate to :class:`~etanormal.jets.Jet` objects carrying exact
first and second derivatives.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .jets import Jet

__all__ = [
    "Expr", "Const", "Coord", "Unary", "Binary", "Pow",
    "ExprSyntaxError", "DomainError", "parse", "to_string", "eval_jet2",
    "default_coord_names", "const", "coord", "FUNCTIONS",
]

FUNCTIONS = ("exp", "log", "sin", "cos", "sinh", "cosh", "sqrt")


class ExprSyntaxError(ValueError):
    """Malformed expression; ``offset`` is a 0-based character position."""

    def __init__(self, message: str, offset: int, text: str = ""):
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset
        self.text = text


class DomainError(ArithmeticError):
    """Evaluation left the domain of a node (division by zero, log of 0, ...)."""

    def __init__(self, message: str, node: "Expr"):
        super().__init__(f"{message} in {to_string(node)!r}")
        self.node = node


# ----------------------------------------------------------------------
# AST


class Expr:
    """Base class for AST nodes.  Nodes are immutable and hashable."""

    def __add__(self, other):
        return _bin("+", self, other)

    def __radd__(self, other):
        return _bin("+", other, self)

    def __sub__(self, other):
        return _bin("-", self, other)

    def __rsub__(self, other):
        return _bin("-", other, self)

    def __mul__(self, other):
        return _bin("*", self, other)

    def __rmul__(self, other):
        return _bin("*", other, self)

    def __truediv__(self, other):
        return _bin("/", self, other)

    def __rtruediv__(self, other):
        return _bin("/", other, self)

    def __neg__(self):
        if isinstance(self, Const):
            return Const(-self.value)
        return Unary("neg", self)

    def __pow__(self, k: int):
        return Pow(self, int(k))

    def __str__(self):
        return to_string(self)


@dataclass(frozen=True, eq=True, repr=True)
class Const(Expr):
    value: float


@dataclass(frozen=True, eq=True, repr=True)
class Coord(Expr):
    index: int
    name: str = ""


@dataclass(frozen=True, eq=True, repr=True)
class Unary(Expr):
    op: str  # "neg" or one of FUNCTIONS
    arg: Expr


@dataclass(frozen=True, eq=True, repr=True)
class Binary(Expr):
    op: str  # + - * /
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True, repr=True)
class Pow(Expr):
    base: Expr
    exponent: int


def const(v: float) -> Const:
    return Const(float(v))


def coord(index: int, name: str = "") -> Coord:
    return Coord(int(index), name)


def _lift(x) -> Expr:
    if isinstance(x, Expr):
        return x
    return Const(float(x))


def _bin(op: str, a, b) -> Expr:
    # builders fold the trivial 0/1 cases so emitted files stay readable
    a, b = _lift(a), _lift(b)
    za = isinstance(a, Const) and a.value == 0.0
    zb = isinstance(b, Const) and b.value == 0.0
    if isinstance(a, Const) and isinstance(b, Const) and op != "/":
        return Const({"+": a.value + b.value, "-": a.value - b.value,
                      "*": a.value * b.value}[op])
    if op == "+":
        if za:
            return b
        if zb:
            return a
    elif op == "-":
        if zb:
            return a
        if za:
            return -b
    elif op == "*":
        if za or zb:
            return Const(0.0)
        if isinstance(a, Const) and a.value == 1.0:
            return b
        if isinstance(b, Const) and b.value == 1.0:
            return a
    elif op == "/":
        if isinstance(b, Const) and b.value == 1.0:
            return a
        if za:
            return Const(0.0)
    return Binary(op, a, b)


def func(name: str, arg) -> Expr:
    if name not in FUNCTIONS:
        raise ValueError(f"unknown function {name!r}")
    return Unary(name, _lift(arg))


# ----------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[-+*/^()\[\]]))"
)


def default_coord_names(dim: int) -> tuple[str, ...]:
    if dim <= 3:
        return ("x", "y", "z")[:dim]
    return tuple(f"u{i}" for i in range(dim))


def _tokenize(text: str):
    pos = 0
    toks = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ExprSyntaxError(f"unexpected character {text[start]!r}", start, text)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, names: Sequence[str]):
        self.text = text
        self.names = list(names)
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ExprSyntaxError(msg, tok[2], self.text)

    def expect(self, value):
        tok = self.take()
        if tok[1] != value or tok[0] == "end":
            raise ExprSyntaxError(f"expected {value!r}", tok[2], self.text)
        return tok

    def parse(self) -> Expr:
        e = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected token {self.peek()[1]!r}")
        return e

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = Binary(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = Binary(op, node, self.unary())
        return node

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.take()
            arg = self.unary()
            # fold negative literals so that rendering and parsing are inverse
            return Const(-arg.value) if isinstance(arg, Const) else Unary("neg", arg)
        if tok[0] == "op" and tok[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("^", "**"):
            self.take()
            sign = 1
            if self.peek()[1] == "-" and self.peek()[0] == "op":
                self.take()
                sign = -1
            num = self.take()
            if num[0] != "num" or not re.fullmatch(r"\d+", num[1]):
                raise ExprSyntaxError("exponent must be an integer literal", num[2], self.text)
            return Pow(base, sign * int(num[1]))
        return base

    def atom(self):
        tok = self.take()
        kind, value, offset = tok
        if kind == "num":
            return Const(float(value))
        if kind == "name":
            if value in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Unary(value, arg)
            if value == "pi" and value not in self.names:
                return Const(math.pi)
            if value not in self.names:
                raise ExprSyntaxError(f"unknown identifier {value!r}", offset, self.text)
            if self.peek()[1] == "[" and self.peek()[0] == "op":
                self.take()
                num = self.take()
                if num[0] != "num" or not re.fullmatch(r"\d+", num[1]):
                    raise ExprSyntaxError("coordinate index must be an integer", num[2], self.text)
                k = int(num[1])
                if k >= len(self.names):
                    raise ExprSyntaxError(
                        f"coordinate index {k} out of range for dimension {len(self.names)}",
                        num[2], self.text)
                self.expect("]")
                return Coord(k, self.names[k])
            return Coord(self.names.index(value), value)
        if kind == "op" and value == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind == "end":
            raise ExprSyntaxError("unexpected end of input", offset, self.text)
        raise ExprSyntaxError(f"unexpected token {value!r}", offset, self.text)


def parse(text: str, coords: int | Sequence[str]) -> Expr:
    """Parse ``text`` into an AST over the given coordinates.

    ``coords`` is either a sequence of coordinate names or a dimension, in
    which case :func:`default_coord_names` supplies the names.
    """
    names = default_coord_names(coords) if isinstance(coords, (int, np.integer)) else tuple(coords)
    if not text or not text.strip():
        raise ExprSyntaxError("empty expression", 0, text)
    return _Parser(text, names).parse()


# ----------------------------------------------------------------------
# printing

def _fmt_num(v: float) -> str:
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(float(v))


def to_string(e: Expr) -> str:
    """Render an AST so that ``parse(to_string(e))`` rebuilds ``e``."""
    if isinstance(e, Const):
        s = _fmt_num(e.value)
        return f"({s})" if e.value < 0 else s
    if isinstance(e, Coord):
        return e.name if e.name else f"u{e.index}"
    if isinstance(e, Pow):
        b = e.base
        atomic = (isinstance(b, Coord) or (isinstance(b, Const) and b.value >= 0)
                  or (isinstance(b, Unary) and b.op != "neg"))
        base = to_string(b) if atomic else f"({to_string(b)})"
        return f"{base}^{e.exponent}"
    if isinstance(e, Unary):
        if e.op == "neg":
            arg = to_string(e.arg)
            return f"-({arg})" if isinstance(e.arg, Binary) else f"-{arg}"
        return f"{e.op}({to_string(e.arg)})"
    if isinstance(e, Binary):
        left, right = to_string(e.left), to_string(e.right)
        if e.op in ("+", "-"):
            if isinstance(e.right, Binary) and e.right.op in ("+", "-"):
                right = f"({right})"
        else:
            if isinstance(e.left, Binary) and e.left.op in ("+", "-"):
                left = f"({left})"
            if isinstance(e.right, Binary):
                right = f"({right})"
        return f"{left} {e.op} {right}"
    raise TypeError(f"not an expression node: {e!r}")


# ----------------------------------------------------------------------
# evaluation


def eval_jet2(e: Expr, points) -> Jet:
    """Value, gradient and Hessian of ``e`` at ``points`` (shape ``(dim,)`` or ``(B, dim)``)."""
    pts = np.asarray(points, dtype=float)
    dim = pts.shape[-1]
    batch = pts.shape[:-1]
    return _eval(e, pts, dim, batch)


def _eval(e: Expr, pts, dim, batch) -> Jet:
    if isinstance(e, Const):
        return Jet(np.full(batch, e.value), np.zeros(batch + (dim,)),
                   np.zeros(batch + (dim, dim)), 0)
    if isinstance(e, Coord):
        if e.index >= dim:
            raise DomainError(f"coordinate index {e.index} out of range", e)
        d1 = np.zeros(batch + (dim,))
        d1[..., e.index] = 1.0
        return Jet(pts[..., e.index].copy(), d1, np.zeros(batch + (dim, dim)), 0)
    if isinstance(e, Binary):
        a = _eval(e.left, pts, dim, batch)
        b = _eval(e.right, pts, dim, batch)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if np.any(b.val == 0.0):
            raise DomainError("division by zero", e)
        return a / b
    if isinstance(e, Pow):
        u = _eval(e.base, pts, dim, batch)
        k = e.exponent
        if k == 0:
            return Jet(np.ones(batch), np.zeros(batch + (dim,)), np.zeros(batch + (dim, dim)), 0)
        if k < 0 and np.any(u.val == 0.0):
            raise DomainError("negative power of zero", e)
        x = u.val
        f0 = x**k if k > 0 else 1.0 / x**(-k)
        f1 = k * _ipow(x, k - 1)
        # k = 1 has no curvature; avoid 0 * x^-1 at the origin
        f2 = k * (k - 1) * _ipow(x, k - 2) if k != 1 else np.zeros_like(x)
        return u.chain(f0, f1, f2)
    if isinstance(e, Unary):
        u = _eval(e.arg, pts, dim, batch)
        x = u.val
        op = e.op
        if op == "neg":
            return -u
        if op == "exp":
            v = np.exp(x)
            return u.chain(v, v, v)
        if op == "log":
            if np.any(x <= 0.0):
                raise DomainError("log of non-positive value", e)
            return u.chain(np.log(x), 1.0 / x, -1.0 / x**2)
        if op == "sin":
            s, c = np.sin(x), np.cos(x)
            return u.chain(s, c, -s)
        if op == "cos":
            s, c = np.sin(x), np.cos(x)
            return u.chain(c, -s, -c)
        if op == "sinh":
            s, c = np.sinh(x), np.cosh(x)
            return u.chain(s, c, s)
        if op == "cosh":
            s, c = np.sinh(x), np.cosh(x)
            return u.chain(c, s, c)
        if op == "sqrt":
            if np.any(x <= 0.0):
                raise DomainError("sqrt of non-positive value", e)
            r = np.sqrt(x)
            return u.chain(r, 0.5 / r, -0.25 / (r * x))
    raise TypeError(f"cannot evaluate {e!r}")


def _ipow(x, k: int):
    if k == 0:
        return np.ones_like(x)
    if k > 0:
        return x**k
    return 1.0 / x**(-k)
