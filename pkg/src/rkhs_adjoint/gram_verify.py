"""Monomial Gram matrices, and the adjoint identity checked on monomials.

This path does not touch kernels or PDEs. From D* = P it reads off
<P z^n, z^m> = <z^n, D z^m> = m <z^n, z^(m-1)> and propagates it from <1, 1>.
For a diagonal kernel sum d_n t^n the monomials are orthogonal with
<z^n, z^n> = 1/d_n, so the identity can also be tested directly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import linalg
from .scalar import ONE, ZERO, format_scalar, to_scalar
from .series import CoeffMatrix
from .weyl import NormalForm, apply_op

Action = Callable[[int], list]


class GramInconsistent(ValueError):
    """The operator does not define any inner product on the monomials."""


@dataclass(frozen=True)
class GramRep:
    order: int
    gram: tuple  # gram[n][m] = <z^m, z^n>
    undetermined: tuple = ()

    def diag(self) -> list[Fraction]:
        return [self.gram[i][i] for i in range(self.order + 1)]

    def is_symmetric(self) -> bool:
        g = self.gram
        return all(g[n][m] == g[m][n] for n in range(self.order + 1) for m in range(n))


def weights_action(weights) -> Action:
    """z^n -> a_(n+1) z^(n+1): the operator (diagonal) . Mz, with a_1.. given."""
    weights = [to_scalar(a) for a in weights]

    def act(n):
        return [(n + 1, weights[n])] if n < len(weights) else None

    return act


def gram_from_action(action: Action, N: int, norm0=1) -> GramRep:
    """Solve the monomial recurrence for the Gram matrix up to degree N.

    One equation per (n, m) whose monomials all stay within degree N:
        sum_j q_j G[m][j] = m G[m-1][n]    where P z^n = sum_j q_j z^j.
    G is symmetric and G[0][0] = norm0. Entries left free by the recurrence
    are set to zero and listed in ``undetermined``.
    """
    norm0 = to_scalar(norm0)
    if norm0 <= 0:
        raise ValueError("<1, 1> must be positive")
    idx = lambda i, j: i * (N + 1) + j  # noqa: E731
    system = linalg.LinearSystem((N + 1) ** 2)
    for n in range(N + 1):
        image = action(n)
        if image is None or any(deg > N for deg, _ in image):
            continue
        for m in range(N + 1):
            row: dict = {}
            for deg, q in image:
                row[idx(m, deg)] = row.get(idx(m, deg), ZERO) + q
            if m:
                row[idx(m - 1, n)] = row.get(idx(m - 1, n), ZERO) - m
            system.add(row, ZERO, (n, m))
    for i in range(N + 1):
        for j in range(i + 1, N + 1):
            system.add({idx(i, j): ONE, idx(j, i): -ONE})
    system.add({idx(0, 0): ONE}, norm0)
    sol = linalg.solve(system)
    if not sol.consistent:
        raise GramInconsistent("the monomial recurrence has no solution with <1, 1> > 0")
    free = [j for j in range(system.nvars) if j not in sol.pivots]
    g = sol.particular
    gram = tuple(tuple(g[idx(i, j)] for j in range(N + 1)) for i in range(N + 1))
    undetermined = tuple(sorted({tuple(sorted(divmod(f, N + 1))) for f in free}))
    return GramRep(N, gram, undetermined)


def gram_from_adjoint(nf: NormalForm, N: int, norm0=1) -> GramRep:
    return gram_from_action(lambda n: apply_op(nf, n), N, norm0)


@dataclass(frozen=True)
class AdjointCheck:
    residual: Fraction
    first_violation: tuple | None
    window: int
    checked: int

    def to_json(self) -> dict:
        return {
            "residual": format_scalar(self.residual),
            "first_violation": None if self.first_violation is None else list(self.first_violation),
            "window": self.window,
        }


def adjoint_check(k: CoeffMatrix, nf: NormalForm, N: int | None = None) -> AdjointCheck:
    """Compare <D z^m, z^n> with <z^m, P z^n> in the inner product of a diagonal kernel.

    Pairs are scanned by n, then m; a pair is used only when every monomial
    produced stays within degree N. With d_0 = 0 (Dirichlet-type kernels) the
    constant is excluded, since it has no finite norm.
    """
    if not k.is_diagonal():
        raise ValueError("the monomial check needs a diagonal kernel")
    N = k.order if N is None else min(N, k.order)
    d = k.diag()
    start = 1 if d[0] == 0 else 0
    for i in range(start, N + 1):
        if d[i] <= 0:
            raise ValueError(f"kernel coefficient d_{i} = {format_scalar(d[i])} is not positive")

    def ip(i, j):
        # <z^i, z^j>
        return 1 / d[i] if i == j else ZERO

    worst = ZERO
    first = None
    checked = 0
    for n in range(start, N + 1):
        image = apply_op(nf, n)
        if any(deg > N or deg < start for deg, _ in image):
            continue
        for m in range(start, N + 1):
            if m - 1 < start and m > 0:
                # D z^m would leave the space spanned by the admissible monomials
                continue
            lhs = m * ip(m - 1, n) if m else ZERO
            rhs = sum((q * ip(m, deg) for deg, q in image), ZERO)
            checked += 1
            diff = abs(lhs - rhs)
            if diff and first is None:
                first = (n, m)
            worst = max(worst, diff)
    return AdjointCheck(worst, first, N, checked)


def adjoint_residual(k: CoeffMatrix, nf: NormalForm, N: int | None = None) -> Fraction:
    return adjoint_check(k, nf, N).residual
