"""Small arithmetic expression language for config files.

Grammar (``^`` is right-associative and binds tighter than unary minus)::

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := '-' factor | power
    power   := primary ('^' factor)?
    primary := number | 'pi' | var | func '(' args ')' | '(' expr ')'

Variables are ``x``, ``y`` and ``t``.  Evaluation works on Python floats as
well as numpy arrays, so a parsed expression can be sampled on a whole grid
in one call.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np
import scipy.special

__all__ = [
    "ArityError",
    "BinOp",
    "Call",
    "Const",
    "EvaluationError",
    "Expr",
    "ExpressionError",
    "Neg",
    "Num",
    "ParseError",
    "UnknownIdentifierError",
    "Var",
    "evaluate",
    "parse",
    "to_source",
]


class ExpressionError(ValueError):
    pass


class ParseError(ExpressionError):
    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} at offset {offset}")


class UnknownIdentifierError(ParseError):
    pass


class ArityError(ParseError):
    pass


class EvaluationError(ExpressionError):
    pass


# {{{ ast


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: Expr


@dataclass(frozen=True)
class BinOp:
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple


Expr = Union[Num, Var, Const, Neg, BinOp, Call]

VARIABLES = ("x", "y", "t")
CONSTANTS = {"pi": math.pi}


def _gamma(z):
    return scipy.special.gamma(z)


FUNCTIONS = {
    "sin": (1, np.sin),
    "cos": (1, np.cos),
    "exp": (1, np.exp),
    "log": (1, np.log),
    "sqrt": (1, np.sqrt),
    "abs": (1, np.abs),
    "pow": (2, np.power),
    "tgamma": (1, _gamma),
}

# }}}


# {{{ parser

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),])"
    r")"
)


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(source)
    while pos < n:
        if source[pos:].strip() == "":
            break
        m = _TOKEN.match(source, pos)
        if m is None or m.end() == pos:
            start = pos + (len(source[pos:]) - len(source[pos:].lstrip()))
            raise ParseError(f"unexpected character {source[start]!r}", start)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str):
        kind, value, offset = self.advance()
        if value != text or kind != "op":
            what = "end of input" if kind == "end" else repr(value)
            raise ParseError(f"expected {text!r}, found {what}", offset)

    def parse(self) -> Expr:
        node = self.expr()
        kind, value, offset = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {value!r}", offset)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.advance()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Expr:
        if self.peek()[:2] == ("op", "-"):
            self.advance()
            return Neg(self.factor())
        return self.power()

    def power(self) -> Expr:
        node = self.primary()
        if self.peek()[:2] == ("op", "^"):
            self.advance()
            node = BinOp("^", node, self.factor())
        return node

    def primary(self) -> Expr:
        kind, value, offset = self.advance()
        if kind == "num":
            v = float(value)
            if not math.isfinite(v):
                raise ParseError(f"numeric literal {value!r} overflows", offset)
            return Num(v)
        if kind == "ident":
            if self.peek()[:2] == ("op", "("):
                return self.call(value, offset)
            if value in VARIABLES:
                return Var(value)
            if value in CONSTANTS:
                return Const(value)
            if value in FUNCTIONS:
                raise ParseError(f"function {value!r} needs arguments", offset)
            raise UnknownIdentifierError(f"unknown identifier {value!r}", offset)
        if (kind, value) == ("op", "("):
            node = self.expr()
            self.expect(")")
            return node
        what = "end of input" if kind == "end" else repr(value)
        raise ParseError(f"unexpected {what}", offset)

    def call(self, name: str, offset: int) -> Expr:
        if name not in FUNCTIONS:
            raise UnknownIdentifierError(f"unknown function {name!r}", offset)
        self.expect("(")
        args = [self.expr()]
        while self.peek()[:2] == ("op", ","):
            self.advance()
            args.append(self.expr())
        self.expect(")")
        arity = FUNCTIONS[name][0]
        if len(args) != arity:
            raise ArityError(
                f"{name} takes {arity} argument(s), got {len(args)}", offset)
        return Call(name, tuple(args))


def parse(source: str) -> Expr:
    if not source or not source.strip():
        raise ParseError("empty expression", 0)
    return _Parser(source).parse()


# }}}


def to_source(e: Expr) -> str:
    """Fully parenthesized source text; ``parse(to_source(e)) == e``."""
    if isinstance(e, Num):
        return repr(e.value)
    if isinstance(e, (Var, Const)):
        return e.name
    if isinstance(e, Neg):
        return f"(-{to_source(e.operand)})"
    if isinstance(e, BinOp):
        return f"({to_source(e.left)} {e.op} {to_source(e.right)})"
    if isinstance(e, Call):
        return f"{e.func}({', '.join(to_source(a) for a in e.args)})"
    raise TypeError(f"not an expression node: {e!r}")


# {{{ evaluation


def _check(value, e: Expr):
    if not np.all(np.isfinite(value)):
        raise EvaluationError(f"non-finite value from {to_source(e)}")
    return value


def _eval(e: Expr, env: dict):
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return env[e.name]
    if isinstance(e, Const):
        return CONSTANTS[e.name]
    if isinstance(e, Neg):
        return -_eval(e.operand, env)
    if isinstance(e, BinOp):
        a = _eval(e.left, env)
        b = _eval(e.right, env)
        if e.op == "+":
            r = np.add(a, b)
        elif e.op == "-":
            r = np.subtract(a, b)
        elif e.op == "*":
            r = np.multiply(a, b)
        elif e.op == "/":
            r = np.divide(a, b)
        else:
            r = np.power(a, b)
        return _check(r, e)
    if isinstance(e, Call):
        fn = FUNCTIONS[e.func][1]
        return _check(fn(*(_eval(a, env) for a in e.args)), e)
    raise TypeError(f"not an expression node: {e!r}")


def evaluate(e: Expr, x=0.0, y=0.0, t=0.0):
    """Evaluate at ``(x, y, t)``; arrays broadcast.

    Returns a float for scalar inputs.  Raises :class:`EvaluationError` as
    soon as any subexpression is NaN or infinite (``log`` of a negative,
    division by zero, negative base with a fractional exponent, ...).
    """
    env = {
        "x": np.asarray(x, dtype=np.float64),
        "y": np.asarray(y, dtype=np.float64),
        "t": np.asarray(t, dtype=np.float64),
    }
    with np.errstate(all="ignore"):
        r = _check(np.asarray(_eval(e, env), dtype=np.float64), e)
    return float(r) if r.ndim == 0 else r


# }}}
