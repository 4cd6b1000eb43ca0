"""Germ expressions: a small recursive-descent parser, renderer and lowering.

Grammar (whitespace insensitive)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | factor
    factor := atom ('^' uint)?
    atom   := NUMBER ['/' NUMBER] | var | 'i' | 'zeta(' uint ')'
            | 'exp(' ['-'] 'i*pi' [('*' | '/') rational] ')'
            | 'root(' uint ',' rational ')' | '(' expr (',' expr)* ')'

``p/q`` is read as one rational literal only at the start of a term, so
``z/2/3`` divides twice while ``1/2*z`` scales by one half.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .coeff import rational_power, root_of_unity
from .series import FormalSeries, GermMap, VectorFieldGerm, _SeriesTuple

__all__ = [
    "BinOp",
    "ExpIPi",
    "Imag",
    "Neg",
    "Num",
    "ParseError",
    "Pow",
    "Root",
    "Tuple",
    "Var",
    "Zeta",
    "lower",
    "parse_germ",
    "render",
]


class ParseError(ValueError):
    """Syntax or lowering error; ``offset`` is a byte offset into the input."""

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        super().__init__(message if offset is None else f"{message} (at byte {offset})")


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Imag:
    pass


@dataclass(frozen=True)
class Zeta:
    k: int


@dataclass(frozen=True)
class ExpIPi:
    """``exp(i*pi*r)`` for rational ``r``."""

    r: Fraction


@dataclass(frozen=True)
class Root:
    """Positive real ``r**(1/n)``."""

    n: int
    r: Fraction


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exp: int


@dataclass(frozen=True)
class Tuple:
    items: tuple


Node = Union[Var, Num, Imag, Zeta, ExpIPi, Root, Neg, BinOp, Pow, Tuple]

VARIABLE_RE = re.compile(r"^(z|zbar|x|y|x[1-9][0-9]*)$")

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>[0-9]+)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^(),]))"
)


# ---------------------------------------------------------------------------
# tokenizer / parser


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []  # (kind, value, char_pos)
        pos = 0
        while True:
            m = _TOKEN_RE.match(text, pos)
            if not m:
                rest = text[pos:]
                if rest.strip() == "":
                    break
                start = pos + (len(rest) - len(rest.lstrip()))
                raise ParseError(f"unexpected character {text[start]!r}", self._bytes(start))
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def _bytes(self, char_pos):
        return len(self.text[:char_pos].encode("utf-8"))

    def peek(self, ahead=0):
        j = self.i + ahead
        return self.tokens[j] if j < len(self.tokens) else (None, None, len(self.text))

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, self._bytes(tok[2]))

    def expect(self, value):
        tok = self.next()
        if tok[1] != value:
            raise self.error(f"expected {value!r}, found {tok[1]!r}" if tok[1] else f"expected {value!r} at end of input", tok)
        return tok

    def at(self, value, ahead=0):
        return self.peek(ahead)[1] == value

    # grammar ----------------------------------------------------------------
    def parse(self):
        node = self.expr()
        if self.peek()[0] is not None:
            raise self.error(f"unexpected token {self.peek()[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.at("+") or self.at("-"):
            op = self.next()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary(first=True)
        while self.at("*") or self.at("/"):
            op = self.next()[1]
            node = BinOp(op, node, self.unary(first=False))
        return node

    def unary(self, first):
        if self.at("-"):
            self.next()
            return Neg(self.unary(first))
        return self.factor(first)

    def factor(self, first):
        node = self.atom(first)
        if self.at("^"):
            self.next()
            tok = self.next()
            if tok[0] != "num":
                raise self.error("exponent must be a non-negative integer", tok)
            node = Pow(node, int(tok[1]))
        return node

    def rational(self):
        tok = self.next()
        if tok[0] != "num":
            raise self.error("expected an integer", tok)
        value = Fraction(int(tok[1]))
        if self.at("/") and self.peek(1)[0] == "num":
            self.next()
            den = int(self.next()[1])
            if den == 0:
                raise self.error("zero denominator", tok)
            value /= den
        return value

    def atom(self, first):
        kind, value, pos = self.peek()
        if kind == "num":
            if first:
                return Num(self.rational())
            self.next()
            return Num(Fraction(int(value)))
        if kind == "ident":
            self.next()
            if value == "i":
                return Imag()
            if value == "zeta":
                self.expect("(")
                tok = self.next()
                if tok[0] != "num" or int(tok[1]) < 1:
                    raise self.error("zeta(k) needs a positive integer k", tok)
                self.expect(")")
                return Zeta(int(tok[1]))
            if value == "root":
                self.expect("(")
                tok = self.next()
                if tok[0] != "num" or int(tok[1]) < 1:
                    raise self.error("root(n, r) needs a positive integer n", tok)
                self.expect(",")
                r = self.rational()
                self.expect(")")
                return Root(int(tok[1]), r)
            if value == "exp":
                return self.exp_ipi()
            if VARIABLE_RE.match(value):
                return Var(value)
            raise ParseError(f"unknown identifier {value!r}", self._bytes(pos))
        if value == "(":
            self.next()
            items = [self.expr()]
            while self.at(","):
                self.next()
                items.append(self.expr())
            self.expect(")")
            return items[0] if len(items) == 1 else Tuple(tuple(items))
        if kind is None:
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected token {value!r}")

    def exp_ipi(self):
        self.expect("(")
        sign = 1
        if self.at("-"):
            self.next()
            sign = -1
        tok = self.next()
        if tok[1] != "i":
            raise self.error("only exp(i*pi*r) with rational r is supported", tok)
        self.expect("*")
        tok = self.next()
        if tok[1] != "pi":
            raise self.error("only exp(i*pi*r) with rational r is supported", tok)
        r = Fraction(1)
        if self.at("*"):
            self.next()
            r = self.rational()
        elif self.at("/"):
            self.next()
            tok = self.next()
            if tok[0] != "num" or int(tok[1]) == 0:
                raise self.error("expected a positive integer denominator", tok)
            r = Fraction(1, int(tok[1]))
        self.expect(")")
        return ExpIPi(sign * r)


def parse_germ(text: str) -> Node:
    """Parse germ syntax into an AST; errors carry byte offsets."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# rendering

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _prec(node):
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow):
        return 4
    if isinstance(node, Num) and node.value.denominator != 1:
        return 0  # always parenthesized
    return 5


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _is_int_lead(node):
    while isinstance(node, Neg):
        node = node.operand
    return isinstance(node, Num) and node.value.denominator == 1


def _starts_with_number(node):
    while isinstance(node, (Pow, BinOp)):
        node = node.base if isinstance(node, Pow) else node.left
    return isinstance(node, Num) and node.value.denominator == 1


def render(node: Node) -> str:
    """Text form that parses back to an equal AST."""
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Num):
        return _frac(node.value) if node.value.denominator == 1 else f"({_frac(node.value)})"
    if isinstance(node, Imag):
        return "i"
    if isinstance(node, Zeta):
        return f"zeta({node.k})"
    if isinstance(node, Root):
        return f"root({node.n}, {_frac(node.r)})"
    if isinstance(node, ExpIPi):
        r = node.r
        sign = "-" if r < 0 else ""
        r = abs(r)
        if r == 1:
            tail = ""
        elif r.numerator == 1:
            tail = f"/{r.denominator}"
        else:
            tail = f"*{_frac(r)}"
        return f"exp({sign}i*pi{tail})"
    if isinstance(node, Tuple):
        return "(" + ", ".join(render(x) for x in node.items) + ")"
    if isinstance(node, Neg):
        inner = render(node.operand)
        if _prec(node.operand) in (1, 2):
            inner = f"({inner})"
        return "-" + inner
    if isinstance(node, Pow):
        base = render(node.base)
        if 0 < _prec(node.base) < 5:
            base = f"({base})"
        return f"{base}^{node.exp}"
    if isinstance(node, BinOp):
        p = _PREC[node.op]
        left = render(node.left)
        if 0 < _prec(node.left) < p:
            left = f"({left})"
        elif node.op == "/" and _is_int_lead(node.left) and _starts_with_number(node.right):
            left = f"({left})"
        right = render(node.right)
        if 0 < _prec(node.right) <= p:
            right = f"({right})"
        if node.op in "+-":
            return f"{left} {node.op} {right}"
        return f"{left}{node.op}{right}"
    raise TypeError(f"not an expression node: {node!r}")


# ---------------------------------------------------------------------------
# lowering to series


def _variables(node, acc):
    if isinstance(node, Var):
        acc.add(node.name)
    elif isinstance(node, Neg):
        _variables(node.operand, acc)
    elif isinstance(node, BinOp):
        _variables(node.left, acc)
        _variables(node.right, acc)
    elif isinstance(node, Pow):
        _variables(node.base, acc)
    elif isinstance(node, Tuple):
        for x in node.items:
            _variables(x, acc)
    return acc


def _constant(node):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Imag):
        return root_of_unity(4, 1)
    if isinstance(node, Zeta):
        return root_of_unity(node.k, 1)
    if isinstance(node, ExpIPi):
        r = node.r
        return root_of_unity(2 * r.denominator, r.numerator)
    if isinstance(node, Root):
        if node.r <= 0:
            raise ParseError("root(n, r) needs r > 0")
        return rational_power(node.r, Fraction(1, node.n))
    return None


def _eval(node, names, order):
    n = len(names)
    c = _constant(node)
    if c is not None:
        return FormalSeries.constant(n, order, c)
    if isinstance(node, Var):
        if node.name not in names:
            raise ParseError(f"variable {node.name!r} is not allowed here")
        return FormalSeries.variable(n, names.index(node.name), order)
    if isinstance(node, Neg):
        return -_eval(node.operand, names, order)
    if isinstance(node, Pow):
        return _eval(node.base, names, order) ** node.exp
    if isinstance(node, BinOp):
        a = _eval(node.left, names, order)
        b = _eval(node.right, names, order)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if any(sum(e) for e in b.terms):
            raise ParseError("division is only allowed by a constant")
        d = b.constant_term()
        if d == 0:
            raise ParseError("division by zero")
        return a / d
    if isinstance(node, Tuple):
        raise ParseError("component tuples are only allowed at the top level")
    raise TypeError(f"not an expression node: {node!r}")


def chart_for(node: Node) -> tuple[list[str], bool]:
    """Variable names and whether the (z, zbar) conjugate-pair chart is used."""
    names = _variables(node, set())
    comps = len(node.items) if isinstance(node, Tuple) else 1
    if "zbar" in names:
        if comps != 1 or not names <= {"z", "zbar"}:
            raise ParseError("zbar is only allowed in a single expression over z and zbar")
        return ["z", "zbar"], True
    if comps == 1:
        if len(names) > 1:
            raise ParseError(f"a single component must use one variable, found {sorted(names)}")
        return [names.pop() if names else "z"], False
    numbered = [f"x{i + 1}" for i in range(comps)]
    if names <= set(numbered):
        return numbered, False
    if comps == 2 and names <= {"x", "y"}:
        return ["x", "y"], False
    raise ParseError(f"{comps} components need variables x1..x{comps}, found {sorted(names)}")


def is_constant(node: Node) -> bool:
    return not _variables(node, set())


def lower_constants(node: Node) -> list:
    """Scalars of a variable-free expression or tuple of expressions."""
    items = node.items if isinstance(node, Tuple) else (node,)
    out = []
    for x in items:
        if isinstance(x, Tuple):
            out.append(lower_constants(x))
        else:
            out.append(_eval(x, ["z"], 0).constant_term())
    return out


def lower(node: Node, order: int, kind: str = "germ") -> _SeriesTuple:
    """Lower an AST to a :class:`GermMap` (``kind="germ"``) or :class:`VectorFieldGerm`."""
    names, pair = chart_for(node)
    items = node.items if isinstance(node, Tuple) else (node,)
    comps = []
    for idx, x in enumerate(items):
        s = _eval(x, names, order)
        if s.constant_term() != 0:
            where = f" in component {idx + 1}" if len(items) > 1 else ""
            raise ParseError(f"nonzero constant term{where}: germs must fix the origin")
        comps.append(s)
    cls = GermMap if kind == "germ" else VectorFieldGerm
    if pair:
        from .flow import involution

        comps.append(involution(comps[0]))
    return cls(comps)


def names_for(node: Node) -> list[str]:
    return chart_for(node)[0]

