"""Words in Mz (multiplication by z) and D (d/dz), and their normal ordering.

Every such word can be written uniquely as sum p[a, b] Mz^a D^b using the
commutation rule D Mz = Mz D + I. The normal form is what the rest of the
package works with: it acts on monomials z^n and on kernels in their first
variable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .scalar import ONE, format_scalar, to_scalar
from .series import CoeffMatrix, d_nu, mul_mono


@dataclass(frozen=True)
class Atom:
    name: str  # "Mz" or "D"

    def __post_init__(self):
        if self.name not in ("Mz", "D"):
            raise ValueError(f"unknown atom {self.name!r}")


@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class Sum:
    items: tuple


@dataclass(frozen=True)
class Compose:
    """``left`` applied after ``right``."""
    left: "OperatorExpr"
    right: "OperatorExpr"


@dataclass(frozen=True)
class Scale:
    factor: Fraction
    expr: "OperatorExpr"


OperatorExpr = Union[Atom, Const, Sum, Compose, Scale]

MZ = Atom("Mz")
D = Atom("D")


class NormalForm:
    """sum p[a, b] Mz^a D^b with exact coefficients; zero terms are never stored."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for (a, b), c in (terms or {}).items():
            if a < 0 or b < 0:
                raise ValueError(f"negative exponent in term {(a, b)}")
            c = to_scalar(c)
            if c:
                clean[(a, b)] = c
        self.terms = clean

    @classmethod
    def const(cls, c) -> "NormalForm":
        return cls({(0, 0): c})

    def __eq__(self, other):
        if isinstance(other, dict):
            other = NormalForm(other)
        return isinstance(other, NormalForm) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"NormalForm({self.render()})"

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other: "NormalForm") -> "NormalForm":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return NormalForm(out)

    def scale(self, c) -> "NormalForm":
        c = to_scalar(c)
        return NormalForm({k: c * v for k, v in self.terms.items()})

    def __matmul__(self, other: "NormalForm") -> "NormalForm":
        return weyl_product(self, other)

    def degree_shift(self) -> int:
        """Largest a - b over the terms: how far the operator can raise a degree."""
        return max((a - b for a, b in self.terms), default=0)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in sorted(self.terms.items(), reverse=True):
            factors = []
            if a:
                factors.append(f"Mz^{a}")
            if b:
                factors.append(f"D^{b}")
            body = " ".join(factors) or "I"
            sign = "-" if c < 0 else "+"
            parts.append((sign, f"{format_scalar(abs(c))}·{body}"))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, chunk in parts[1:]:
            text += f" {sign} {chunk}"
        return text


@lru_cache(maxsize=None)
def _d_past_mz(b: int, c: int) -> tuple:
    """Normal form of D^b Mz^c as a tuple of ((i, j), coeff), by local rewriting.

    D^b Mz^c = (D^(b-1) Mz^c) D + c D^(b-1) Mz^(c-1)
    """
    if b == 0:
        return (((c, 0), ONE),)
    if c == 0:
        return (((0, b), ONE),)
    out: dict = {}
    for (i, j), v in _d_past_mz(b - 1, c):
        out[(i, j + 1)] = out.get((i, j + 1), 0) + v
    for (i, j), v in _d_past_mz(b - 1, c - 1):
        out[(i, j)] = out.get((i, j), 0) + c * v
    return tuple(sorted(out.items()))


def weyl_product(left: NormalForm, right: NormalForm) -> NormalForm:
    """Normal form of the composition left . right."""
    out: dict = {}
    for (a, b), p in left.terms.items():
        for (c, d), q in right.terms.items():
            for (i, j), v in _d_past_mz(b, c):
                key = (a + i, j + d)
                out[key] = out.get(key, 0) + p * q * v
    return NormalForm(out)


def normalize(e: OperatorExpr) -> NormalForm:
    if isinstance(e, Atom):
        return NormalForm({(1, 0): 1} if e.name == "Mz" else {(0, 1): 1})
    if isinstance(e, Const):
        return NormalForm.const(e.value)
    if isinstance(e, Sum):
        out = NormalForm()
        for item in e.items:
            out = out + normalize(item)
        return out
    if isinstance(e, Compose):
        return weyl_product(normalize(e.left), normalize(e.right))
    if isinstance(e, Scale):
        return normalize(e.expr).scale(e.factor)
    raise TypeError(f"not an operator expression: {e!r}")


def apply_op(nf: NormalForm, n: int) -> list[tuple[int, Fraction]]:
    """Image of z^n as sorted (degree, coefficient) pairs, zeros dropped."""
    if n < 0:
        raise ValueError("monomial degree must be >= 0")
    out: dict = {}
    for (a, b), p in nf.terms.items():
        if b > n:
            continue
        deg = n - b + a
        out[deg] = out.get(deg, 0) + p * (math.factorial(n) // math.factorial(n - b))
    return sorted((deg, c) for deg, c in out.items() if c)


def apply_to_kernel(nf: NormalForm, k: CoeffMatrix) -> CoeffMatrix:
    """sum p[a, b] v^a d_v^b k, i.e. the operator acting in the kernel's first slot."""
    out = CoeffMatrix.zeros(k.order)
    for (a, b), p in sorted(nf.terms.items()):
        term = k
        for _ in range(b):
            term = d_nu(term)
        out = out + mul_mono(term, a, 0).scale(p)
    return out
