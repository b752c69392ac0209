"""Exact sparse Gauss-Jordan elimination over the rationals.

Rows are ``{column: coefficient}`` dicts with a separate right-hand side. The
systems built by the kernel solver have two or three nonzeros per row, so a
sparse reduced row echelon form stays small.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .scalar import ZERO


class LinearSystem:
    def __init__(self, nvars: int):
        self.nvars = nvars
        self.rows: list[dict[int, Fraction]] = []
        self.rhs: list[Fraction] = []
        self.labels: list = []

    def add(self, coeffs: dict, rhs=ZERO, label=None):
        row = {c: Fraction(v) for c, v in coeffs.items() if v}
        self.rows.append(row)
        self.rhs.append(Fraction(rhs))
        self.labels.append(label)

    def __len__(self):
        return len(self.rows)

    def dense(self) -> tuple[list[list[Fraction]], list[Fraction]]:
        A = [[row.get(j, ZERO) for j in range(self.nvars)] for row in self.rows]
        return A, list(self.rhs)


@dataclass
class Solution:
    consistent: bool
    particular: list[Fraction] | None
    nullspace: list[list[Fraction]]
    pivots: dict[int, dict[int, Fraction]]
    rank: int

    @property
    def dim(self) -> int:
        return len(self.nullspace)


def rref(system: LinearSystem):
    """Reduced row echelon form as ``{pivot column: (row, rhs)}``.

    Each stored row has coefficient 1 at its pivot and no entries in other
    pivot columns. Returns ``(pivots, consistent)``.
    """
    pivots: dict[int, tuple[dict[int, Fraction], Fraction]] = {}
    # column -> pivot columns whose rows mention it, to keep back-substitution cheap
    users: dict[int, set[int]] = {}
    consistent = True
    for coeffs, b in zip(system.rows, system.rhs):
        row = dict(coeffs)
        for col in [c for c in row if c in pivots]:
            f = row.pop(col, ZERO)
            if not f:
                continue
            prow, pb = pivots[col]
            for j, v in prow.items():
                if j == col:
                    continue
                nv = row.get(j, ZERO) - f * v
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)
            b = b - f * pb
        if not row:
            if b:
                consistent = False
            continue
        p = min(row)
        inv = 1 / row[p]
        row = {j: v * inv for j, v in row.items()}
        b = b * inv
        for other in list(users.get(p, ())):
            orow, ob = pivots[other]
            f = orow.pop(p)
            for j, v in row.items():
                if j == p:
                    continue
                nv = orow.get(j, ZERO) - f * v
                if nv:
                    if j not in orow:
                        users.setdefault(j, set()).add(other)
                    orow[j] = nv
                else:
                    orow.pop(j, None)
                    users.get(j, set()).discard(other)
            pivots[other] = (orow, ob - f * b)
        users.pop(p, None)
        pivots[p] = (row, b)
        for j in row:
            if j != p:
                users.setdefault(j, set()).add(p)
    return pivots, consistent


def solve(system: LinearSystem) -> Solution:
    """Affine solution set: particular solution plus homogeneous basis."""
    pivots, consistent = rref(system)
    n = system.nvars
    free = [j for j in range(n) if j not in pivots]
    rows = {p: r for p, (r, _) in pivots.items()}
    if not consistent:
        return Solution(False, None, [], rows, len(pivots))
    particular = [ZERO] * n
    for p, (_, b) in pivots.items():
        particular[p] = b
    basis = []
    for f in free:
        v = [ZERO] * n
        v[f] = Fraction(1)
        for p, (r, _) in pivots.items():
            if f in r:
                v[p] = -r[f]
        basis.append(v)
    return Solution(True, particular, basis, rows, len(pivots))


def forced_zero(system: LinearSystem, col: int) -> bool:
    """True when every solution of the homogeneous system has x[col] == 0."""
    homog = LinearSystem(system.nvars)
    homog.rows = system.rows
    homog.rhs = [ZERO] * len(system.rows)
    pivots, _ = rref(homog)
    return col in pivots and len(pivots[col][0]) == 1


def only_trivial(system: LinearSystem) -> bool:
    """True when the homogeneous version of the system has only x = 0."""
    homog = LinearSystem(system.nvars)
    homog.rows = system.rows
    homog.rhs = [ZERO] * len(system.rows)
    pivots, _ = rref(homog)
    return len(pivots) == system.nvars
