"""Linear kernel PDEs  sum q * v^a w^b dv^c dw^d k = 0, and the adjoint-to-PDE rule."""
from __future__ import annotations

from fractions import Fraction

from .scalar import ZERO, format_scalar, to_scalar
from .series import CoeffMatrix, d_nu, d_omegabar, max_abs_on_window, mul_mono
from .weyl import NormalForm


class KernelPDE:
    """Terms keyed by (a, b, c, d) for the monomial v^a w^b dv^c dw^d k."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for key, q in (terms or {}).items():
            key = tuple(int(x) for x in key)
            if len(key) != 4 or min(key) < 0:
                raise ValueError(f"bad PDE term key {key}")
            q = to_scalar(q)
            if q:
                clean[key] = clean.get(key, 0) + q
        self.terms = {k: v for k, v in clean.items() if v}

    def __eq__(self, other):
        if isinstance(other, dict):
            other = KernelPDE(other)
        return isinstance(other, KernelPDE) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"KernelPDE({render_pde(self)})"

    def scale(self, c) -> "KernelPDE":
        c = to_scalar(c)
        return KernelPDE({k: c * v for k, v in self.terms.items()})

    def apply(self, k: CoeffMatrix) -> CoeffMatrix:
        """Left-hand side evaluated on a truncated kernel; trust only its window."""
        out = CoeffMatrix.zeros(k.order)
        for (a, b, c, d), q in sorted(self.terms.items()):
            term = k
            for _ in range(c):
                term = d_nu(term)
            for _ in range(d):
                term = d_omegabar(term)
            out = out + mul_mono(term, a, b).scale(q)
        return out

    def residual(self, k: CoeffMatrix) -> Fraction:
        return max_abs_on_window(self.apply(k))


def adjoint_to_pde(nf: NormalForm) -> KernelPDE:
    """PDE on the kernel implied by  D* = sum p[a, b] Mz^a D^b.

    <D k_w, k_v> is dv k(v, w); <k_w, P k_v> is the conjugate of (P k_v)(w),
    which for real coefficients is sum p[a, b] w^a dw^b k(v, w). Equating gives
    dv k - sum p[a, b] w^a dw^b k = 0.
    """
    terms = {(0, 0, 1, 0): Fraction(1)}
    for (a, b), p in nf.terms.items():
        key = (0, a, 0, b)
        terms[key] = terms.get(key, ZERO) - p
    return KernelPDE(terms)


def _render_term(key, q) -> str:
    a, b, c, d = key
    parts = [] if q == 1 else [format_scalar(q)]
    for name, e in (("v", a), ("w", b), ("dv", c), ("dw", d)):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    parts.append("k")
    return " ".join(parts)


def _render_side(items) -> str:
    if not items:
        return "0"
    chunks = []
    for i, (key, q) in enumerate(items):
        body = _render_term(key, abs(q))
        if i == 0:
            chunks.append(("-" if q < 0 else "") + body)
        else:
            chunks.append(("- " if q < 0 else "+ ") + body)
    return " ".join(chunks)


def _order_key(key):
    a, b, c, d = key
    return (c, d, a, b)


def render_pde(pde: KernelPDE) -> str:
    """Text like "dv k = w^2 dw k + w k", parseable by :func:`parse_pde`.

    The term with the highest derivative order (dv first) goes on the left with
    a positive sign; terms of the opposite sign move right.
    """
    if not pde.terms:
        return "k = k"
    lead = max(pde.terms, key=_order_key)
    sign = 1 if pde.terms[lead] > 0 else -1
    terms = {k: sign * v for k, v in pde.terms.items()}
    ordered = sorted(terms.items(), key=lambda kv: _order_key(kv[0]), reverse=True)
    lhs = [(k, v) for k, v in ordered if v > 0]
    rhs = [(k, -v) for k, v in ordered if v < 0]
    return f"{_render_side(lhs)} = {_render_side(rhs)}"
