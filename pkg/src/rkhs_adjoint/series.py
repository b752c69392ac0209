"""Truncated bivariate power series k(v, w) = sum c[n][m] v^n w^m.

``v`` stands for the first kernel variable and ``w`` for the conjugated second
one. A :class:`CoeffMatrix` is a dense (N+1)x(N+1) grid of exact rationals plus
a *valid window*: the rectangle ``n <= rows, m <= cols`` on which the entries
agree with the untruncated series. Differentiation shrinks the window, monomial
shifts widen it back (capped at N), and every comparison is restricted to the
intersection of windows so truncation never shows up as a fake mismatch.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .scalar import ZERO, format_scalar, parse_scalar, to_scalar

FAMILIES = ("hardy", "h_alpha", "fock", "dirichlet", "weights")


@dataclass(frozen=True)
class CoeffMatrix:
    order: int
    entries: tuple[tuple[Fraction, ...], ...]
    window: tuple[int, int] | None = None

    def __post_init__(self):
        n = self.order
        if n < 0:
            raise ValueError("order must be >= 0")
        if len(self.entries) != n + 1 or any(len(r) != n + 1 for r in self.entries):
            raise ValueError(f"entries must be a {n + 1}x{n + 1} grid")
        if self.window is None:
            object.__setattr__(self, "window", (n, n))

    @classmethod
    def zeros(cls, order: int) -> "CoeffMatrix":
        row = (ZERO,) * (order + 1)
        return cls(order, (row,) * (order + 1))

    @classmethod
    def from_rows(cls, rows, window=None) -> "CoeffMatrix":
        entries = tuple(tuple(to_scalar(x) for x in r) for r in rows)
        return cls(len(entries) - 1, entries, window)

    @classmethod
    def from_dict(cls, order: int, coeffs: dict) -> "CoeffMatrix":
        grid = [[ZERO] * (order + 1) for _ in range(order + 1)]
        for (n, m), v in coeffs.items():
            grid[n][m] = to_scalar(v)
        return cls(order, tuple(map(tuple, grid)))

    @classmethod
    def diagonal(cls, diag: Sequence) -> "CoeffMatrix":
        return cls.from_dict(len(diag) - 1, {(i, i): d for i, d in enumerate(diag)})

    def __getitem__(self, idx) -> Fraction:
        n, m = idx
        return self.entries[n][m]

    @property
    def empty(self) -> bool:
        return self.window[0] < 0 or self.window[1] < 0

    def window_indices(self):
        rows, cols = self.window
        for n in range(rows + 1):
            for m in range(cols + 1):
                yield n, m

    def diag(self) -> list[Fraction]:
        return [self.entries[i][i] for i in range(self.order + 1)]

    def is_diagonal(self) -> bool:
        return all(
            self.entries[n][m] == 0
            for n in range(self.order + 1)
            for m in range(self.order + 1)
            if n != m
        )

    def is_hermitian(self) -> bool:
        # real coefficients: conjugate symmetry is plain symmetry
        e = self.entries
        return all(e[n][m] == e[m][n] for n in range(self.order + 1) for m in range(n))

    def nonzero(self) -> dict[tuple[int, int], Fraction]:
        return {
            (n, m): v
            for n, row in enumerate(self.entries)
            for m, v in enumerate(row)
            if v != 0
        }

    def with_window(self, window) -> "CoeffMatrix":
        return CoeffMatrix(self.order, self.entries, tuple(window))

    def __add__(self, other: "CoeffMatrix") -> "CoeffMatrix":
        _check_order(self, other)
        entries = tuple(
            tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.entries, other.entries)
        )
        return CoeffMatrix(self.order, entries, _meet(self.window, other.window))

    def __sub__(self, other: "CoeffMatrix") -> "CoeffMatrix":
        return self + other.scale(-1)

    def scale(self, c) -> "CoeffMatrix":
        c = to_scalar(c)
        entries = tuple(tuple(c * x for x in r) for r in self.entries)
        return CoeffMatrix(self.order, entries, self.window)

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "entries": [[format_scalar(x) for x in r] for r in self.entries],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CoeffMatrix":
        entries = tuple(tuple(parse_scalar(x) for x in r) for r in data["entries"])
        k = cls(len(entries) - 1, entries)
        if data.get("order", k.order) != k.order:
            raise ValueError("order does not match the entries grid")
        return k


def _check_order(a: CoeffMatrix, b: CoeffMatrix):
    if a.order != b.order:
        raise ValueError(f"order mismatch: {a.order} vs {b.order}")


def _meet(w1, w2):
    return (min(w1[0], w2[0]), min(w1[1], w2[1]))


def d_nu(k: CoeffMatrix) -> CoeffMatrix:
    """Derivative in the first variable: entry (n, m) becomes (n+1) c[n+1][m]."""
    N = k.order
    e = k.entries
    grid = [[(n + 1) * e[n + 1][m] if n < N else ZERO for m in range(N + 1)] for n in range(N + 1)]
    return CoeffMatrix(N, tuple(map(tuple, grid)), (k.window[0] - 1, k.window[1]))


def d_omegabar(k: CoeffMatrix) -> CoeffMatrix:
    N = k.order
    e = k.entries
    grid = [[(m + 1) * e[n][m + 1] if m < N else ZERO for m in range(N + 1)] for n in range(N + 1)]
    return CoeffMatrix(N, tuple(map(tuple, grid)), (k.window[0], k.window[1] - 1))


def mul_mono(k: CoeffMatrix, a: int, b: int) -> CoeffMatrix:
    """Multiply by v^a w^b; whatever is pushed past N is dropped."""
    if a < 0 or b < 0:
        raise ValueError("monomial exponents must be non-negative")
    N = k.order
    e = k.entries
    grid = [
        [e[n - a][m - b] if n >= a and m >= b else ZERO for m in range(N + 1)]
        for n in range(N + 1)
    ]
    rows, cols = k.window
    window = (min(N, rows + a) if rows >= 0 else rows, min(N, cols + b) if cols >= 0 else cols)
    return CoeffMatrix(N, tuple(map(tuple, grid)), window)


def equal_on_window(k1: CoeffMatrix, k2: CoeffMatrix) -> bool:
    _check_order(k1, k2)
    rows, cols = _meet(k1.window, k2.window)
    return all(
        k1.entries[n][m] == k2.entries[n][m] for n in range(rows + 1) for m in range(cols + 1)
    )


def max_abs_on_window(k: CoeffMatrix) -> Fraction:
    return max((abs(k.entries[n][m]) for n, m in k.window_indices()), default=ZERO)


def eval_at(k: CoeffMatrix, nu, omega_bar):
    """Sum of every stored term at (nu, omega_bar).

    Exact when both points are rationals; floats are accepted for spot checks.
    """
    if not isinstance(nu, float):
        nu = to_scalar(nu)
    if not isinstance(omega_bar, float):
        omega_bar = to_scalar(omega_bar)
    total = 0
    nu_pow = 1
    for row in k.entries:
        inner = 0
        w_pow = 1
        for c in row:
            if c:
                inner += c * w_pow
            w_pow *= omega_bar
        total += inner * nu_pow
        nu_pow *= nu
    return total


def oracle_family(family: str, order: int, alpha=None, weights=None) -> CoeffMatrix:
    """Diagonal Taylor coefficients of the named closed-form kernel.

    hardy      1/(1 - t)
    h_alpha    (1 - t)^(-alpha)
    fock       exp(t)
    dirichlet  -log(1 - t)
    weights    sum (a_n ... a_1 / n!) t^n with a_1..a_N given
    where t = v w.
    """
    N = order
    if family == "hardy":
        diag = [Fraction(1)] * (N + 1)
    elif family == "h_alpha":
        if alpha is None:
            raise ValueError("h_alpha needs alpha")
        alpha = to_scalar(alpha)
        diag = [Fraction(1)]
        for n in range(N):
            diag.append(diag[-1] * (alpha + n) / (n + 1))
    elif family == "fock":
        diag = [Fraction(1, math.factorial(n)) for n in range(N + 1)]
    elif family == "dirichlet":
        diag = [ZERO] + [Fraction(1, n) for n in range(1, N + 1)]
    elif family == "weights":
        if weights is None or len(weights) < N:
            raise ValueError(f"need at least {N} weights, got {0 if weights is None else len(weights)}")
        diag = [Fraction(1)]
        for n in range(1, N + 1):
            diag.append(diag[-1] * to_scalar(weights[n - 1]) / n)
    else:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    return CoeffMatrix.diagonal(diag)
