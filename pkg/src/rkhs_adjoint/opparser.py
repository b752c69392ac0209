"""Parsers for the operator language and the kernel-PDE language.

Operator grammar (juxtaposition is composition)::

    expr     := ['-'] term (('+' | '-') term)*
    term     := power power*
    power    := factor ('^' integer)?
    factor   := 'Mz' | 'D' | rational | ident | '(' expr ')'
    rational := integer ('/' integer)?

e.g. ``Mz D Mz - (1 - alpha) Mz`` with ``alpha`` supplied as a parameter.

PDE grammar::

    equation := side '=' side
    side     := '0' | ['-'] pterm (('+' | '-') pterm)*
    pterm    := [rational | ident] (('v' | 'w' | 'dv' | 'dw') ('^' integer)?)* 'k'

e.g. ``dv^2 k = w^2 dv dw k``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .pde import KernelPDE
from .scalar import format_scalar, to_scalar
from .weyl import MZ, Atom, Compose, Const, D, Scale, Sum


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.line, self.col, self.pos = line, col, pos
        super().__init__(f"{message} at line {line}, column {col}")


@dataclass
class SourceText:
    text: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.params = {k: to_scalar(v) for k, v in self.params.items()}


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+/^()=]))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", text, start)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Cursor:
    def __init__(self, src: SourceText):
        self.src = src
        self.text = src.text
        self.tokens = _tokenize(src.text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def at(self, value) -> bool:
        kind, val, _ = self.peek()
        return kind != "end" and val == value

    def expect(self, value):
        kind, val, pos = self.next()
        if val != value or kind == "end":
            got = "end of input" if kind == "end" else repr(val)
            raise ParseError(f"expected {value!r}, got {got}", self.text, pos)

    def error(self, message):
        raise ParseError(message, self.text, self.peek()[2])

    def integer(self) -> int:
        kind, val, pos = self.next()
        if kind != "int":
            raise ParseError("expected an integer", self.text, pos)
        return int(val)

    def rational(self) -> Fraction:
        p = self.integer()
        if self.at("/"):
            self.next()
            kind, val, pos = self.peek()
            if kind != "int":
                raise ParseError("malformed rational: expected a denominator", self.text, pos)
            q = self.integer()
            if q == 0:
                raise ParseError("malformed rational: zero denominator", self.text, pos)
            return Fraction(p, q)
        return Fraction(p)

    def param(self) -> Fraction:
        _, name, pos = self.next()
        if name not in self.src.params:
            raise ParseError(f"unresolved identifier {name!r}", self.text, pos)
        return self.src.params[name]


# -- operators ---------------------------------------------------------------

def parse_operator(src) -> "OperatorExpr":
    if isinstance(src, str):
        src = SourceText(src)
    cur = _Cursor(src)
    if cur.peek()[0] == "end":
        cur.error("empty expression")
    e = _op_expr(cur)
    if cur.peek()[0] != "end":
        cur.error(f"unexpected {cur.peek()[1]!r}")
    return e


def _op_expr(cur: _Cursor):
    if cur.at("-"):
        cur.next()
        first = _op_term(cur)
        # a negated bare number is just a negative constant
        items = [Const(-first.value) if isinstance(first, Const) else Scale(Fraction(-1), first)]
    else:
        items = [_op_term(cur)]
    while cur.at("+") or cur.at("-"):
        sign = cur.next()[1]
        t = _op_term(cur)
        items.append(t if sign == "+" else Scale(Fraction(-1), t))
    return items[0] if len(items) == 1 else Sum(tuple(items))


def _starts_factor(cur: _Cursor) -> bool:
    kind, val, _ = cur.peek()
    return kind in ("int", "ident") or val == "("


def _op_term(cur: _Cursor):
    if not _starts_factor(cur):
        kind, val, _ = cur.peek()
        cur.error("unexpected end of input" if kind == "end" else f"unexpected {val!r}")
    e = _op_power(cur)
    while _starts_factor(cur):
        e = Compose(e, _op_power(cur))
    return e


def _op_power(cur: _Cursor):
    f = _op_factor(cur)
    if cur.at("^"):
        cur.next()
        n = cur.integer()
        if n == 0:
            return Const(Fraction(1))
        e = f
        for _ in range(n - 1):
            e = Compose(e, f)
        return e
    return f


def _op_factor(cur: _Cursor):
    kind, val, pos = cur.peek()
    if kind == "int":
        return Const(cur.rational())
    if kind == "ident":
        if val == "Mz":
            cur.next()
            return MZ
        if val == "D":
            cur.next()
            return D
        return Const(cur.param())
    if val == "(":
        cur.next()
        e = _op_expr(cur)
        cur.expect(")")
        return e
    cur.error(f"unexpected {val!r}")


def render_operator(e) -> str:
    """Text that parses back to the same tree."""
    if isinstance(e, Atom):
        return e.name
    if isinstance(e, Const):
        s = format_scalar(e.value)
        return f"({s})" if e.value < 0 else s
    if isinstance(e, Sum):
        out = _render_sum_item(e.items[0], first=True)
        for item in e.items[1:]:
            out += " " + _render_sum_item(item, first=False)
        return out
    if isinstance(e, Compose):
        left = render_operator(e.left)
        if isinstance(e.left, (Sum, Scale)):
            left = f"({left})"
        right = render_operator(e.right)
        if isinstance(e.right, (Sum, Scale, Compose)):
            right = f"({right})"
        return f"{left} {right}"
    if isinstance(e, Scale):
        if e.factor == -1:
            inner = e.expr
            body = render_operator(inner)
            if isinstance(inner, (Sum, Scale)) or (isinstance(inner, Const) and inner.value >= 0):
                body = f"({body})"
            return f"-{body}"
        return f"{render_operator(Const(e.factor))} ({render_operator(e.expr)})"
    raise TypeError(f"not an operator expression: {e!r}")


def _render_sum_item(item, first: bool) -> str:
    if isinstance(item, Scale) and item.factor == -1 and not first:
        body = render_operator(item.expr)
        if isinstance(item.expr, (Sum, Scale)):
            body = f"({body})"
        return f"- {body}"
    body = render_operator(item)
    if isinstance(item, Sum) or (isinstance(item, Scale) and first):
        body = f"({body})"
    return body if first else f"+ {body}"


# -- kernel PDEs -------------------------------------------------------------

_PDE_ATOMS = {"v": 0, "w": 1, "dv": 2, "dw": 3}


def parse_pde(src) -> KernelPDE:
    if isinstance(src, str):
        src = SourceText(src)
    cur = _Cursor(src)
    lhs = _pde_side(cur)
    cur.expect("=")
    rhs = _pde_side(cur)
    if cur.peek()[0] != "end":
        cur.error(f"unexpected {cur.peek()[1]!r}")
    terms = dict(lhs)
    for key, q in rhs.items():
        terms[key] = terms.get(key, 0) - q
    return KernelPDE(terms)


def _pde_side(cur: _Cursor) -> dict:
    kind, val, _ = cur.peek()
    if kind == "int" and val == "0":
        # a lone zero, not a coefficient
        nxt = cur.tokens[cur.i + 1]
        if nxt[1] in ("=",) or nxt[0] == "end":
            cur.next()
            return {}
    out: dict = {}
    sign = 1
    if cur.at("-"):
        cur.next()
        sign = -1
    while True:
        key, q = _pde_term(cur)
        out[key] = out.get(key, 0) + sign * q
        if cur.at("+") or cur.at("-"):
            sign = 1 if cur.next()[1] == "+" else -1
        else:
            return out


def _pde_term(cur: _Cursor):
    q = Fraction(1)
    kind, val, pos = cur.peek()
    if kind == "int":
        q = cur.rational()
    elif kind == "ident" and val not in _PDE_ATOMS and val != "k":
        q = cur.param()
    exps = [0, 0, 0, 0]
    while True:
        kind, val, pos = cur.peek()
        if kind == "ident" and val in _PDE_ATOMS:
            cur.next()
            e = 1
            if cur.at("^"):
                cur.next()
                e = cur.integer()
            exps[_PDE_ATOMS[val]] += e
        elif kind == "ident" and val == "k":
            cur.next()
            return tuple(exps), q
        else:
            cur.error("term must end with 'k'")
