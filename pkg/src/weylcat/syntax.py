"""Expression syntax shared by every text format.

Grammar (``^`` binds tighter than unary minus, which binds tighter than ``*``)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' INT)?
    atom   := INT | 'x' | 'd' | NAME | 'op' '(' expr ',' NAME ')' | '(' expr ')'

``x`` and ``d`` are reserved; ``NAME`` only occurs in algebra expressions.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .ore import D, ONE, X, OreOperator

__all__ = ["ParseError", "parse_expr", "parse_operator", "Node"]


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        self.msg, self.line, self.col = msg, line, col
        where = f"line {line}, col {col}: " if line else (f"col {col}: " if col else "")
        super().__init__(where + msg)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_.']*)|(\S))")


@dataclass(frozen=True)
class Node:
    kind: str
    args: tuple
    col: int


def _tokenize(text: str, line: int, col0: int):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex)
        col = col0 + start + 1
        if m.group(1) is not None:
            toks.append(("int", int(m.group(1)), col))
        elif m.group(2) is not None:
            toks.append(("name", m.group(2), col))
        else:
            ch = m.group(3)
            if ch not in "+-*/^(),":
                raise ParseError(f"unexpected character {ch!r}", line, col)
            toks.append((ch, ch, col))
        pos = m.end()
    toks.append(("end", None, col0 + len(text) + 1))
    return toks


class _Parser:
    def __init__(self, text: str, line: int, col0: int, allow_names: bool):
        self.toks = _tokenize(text, line, col0)
        self.i = 0
        self.line = line
        self.allow_names = allow_names

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        t = self.toks[self.i]
        if kind is not None and t[0] != kind:
            want = "end of expression" if kind == "end" else repr(kind)
            got = "end of expression" if t[0] == "end" else repr(t[1])
            raise ParseError(f"expected {want}, got {got}", self.line, t[2])
        self.i += 1
        return t

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op, _, col = self.take()
            rhs = self.term()
            node = Node("add" if op == "+" else "sub", (node, rhs), col)
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.peek()[0] in ("*", "/"):
            op, _, col = self.take()
            rhs = self.unary()
            node = Node("mul" if op == "*" else "div", (node, rhs), col)
        return node

    def unary(self) -> Node:
        if self.peek()[0] == "-":
            _, _, col = self.take()
            return Node("neg", (self.unary(),), col)
        if self.peek()[0] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Node:
        node = self.atom()
        if self.peek()[0] == "^":
            _, _, col = self.take()
            _, k, _ = self.take("int")
            node = Node("pow", (node, k), col)
        return node

    def atom(self) -> Node:
        kind, val, col = self.peek()
        if kind == "int":
            self.take()
            return Node("int", (val,), col)
        if kind == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        if kind == "name":
            self.take()
            if val == "x":
                return Node("x", (), col)
            if val == "d":
                return Node("d", (), col)
            if val == "op" and self.peek()[0] == "(":
                self.take("(")
                opnode = self.expr()
                self.take(",")
                _, name, ncol = self.take("name")
                self.take(")")
                if not self.allow_names:
                    raise ParseError("op(...) is not allowed in operator syntax", self.line, col)
                return Node("op", (opnode, name), col)
            if not self.allow_names:
                raise ParseError(f"unknown symbol {val!r}", self.line, col)
            return Node("name", (val,), col)
        what = "end of expression" if kind == "end" else repr(val)
        raise ParseError(f"unexpected {what}", self.line, col)


def parse_expr(text: str, line: int = 0, col0: int = 0, allow_names: bool = True) -> Node:
    p = _Parser(text, line, col0, allow_names)
    node = p.expr()
    p.take("end")
    return node


def eval_operator(node: Node, line: int = 0) -> OreOperator:
    k = node.kind
    if k == "int":
        return OreOperator.coerce(node.args[0])
    if k == "x":
        return X
    if k == "d":
        return D
    if k == "add":
        return eval_operator(node.args[0], line) + eval_operator(node.args[1], line)
    if k == "sub":
        return eval_operator(node.args[0], line) - eval_operator(node.args[1], line)
    if k == "neg":
        return -eval_operator(node.args[0], line)
    if k == "mul":
        return eval_operator(node.args[0], line) * eval_operator(node.args[1], line)
    if k == "div":
        num = eval_operator(node.args[0], line)
        den = eval_operator(node.args[1], line)
        if den.degree != 0:
            raise ParseError("divisor must be a nonzero function of x", line, node.col)
        return OreOperator({i: c / den.terms[0] for i, c in num.terms.items()})
    if k == "pow":
        base = eval_operator(node.args[0], line)
        out = ONE
        for _ in range(node.args[1]):
            out = out * base
        return out
    raise ParseError(f"{k} not allowed in operator syntax", line, node.col)


def parse_operator(text: str, line: int = 0, col0: int = 0) -> OreOperator:
    """Parse operator syntax such as ``x*d^2 + (x+1)/(x-1)*d - 3``."""
    return eval_operator(parse_expr(text, line, col0, allow_names=False), line)


def parse_rational(text: str) -> Fraction:
    op = parse_operator(text)
    if op.is_zero():
        return Fraction(0)
    if op.degree != 0 or not op.terms[0].is_constant():
        raise ParseError(f"{text!r} is not a rational constant")
    return op.terms[0].constant
