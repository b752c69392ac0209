"""From a kernel PDE to the kernel: exact coefficient matching and identification.

The PDE is turned into one homogeneous linear equation per coefficient of
v^n w^m, emitted only when every coefficient it references lies inside the
truncation grid. Symmetry c[n][m] = c[m][n], zero pins and one normalization
are added as further rows, and the affine solution set is computed exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg
from .pde import KernelPDE
from .scalar import ONE, ZERO, format_scalar, to_scalar
from .series import CoeffMatrix

UNIQUE = "unique"
FAMILY = "family"
INCONSISTENT = "inconsistent"
DEGENERATE = "degenerate"

DEFAULT_PIN = (0, 0)
FALLBACK_PIN = (1, 1)


@dataclass
class Constraints:
    """Side conditions for a solve.

    ``pins`` maps (n, m) to a fixed value. When no pin is nonzero the solve
    pins c[0][0] = 1, or c[1][1] = 1 if the equations force c[0][0] = 0.
    ``zero_unconstrained`` sets to zero every coefficient that no PDE equation
    mentions (with symmetry: neither it nor its mirror); those are exactly the
    terms the PDE annihilates identically, e.g. c[0][0] and v + w for
    dv^2 k = w^2 dv dw k.
    """
    hermitian: bool = True
    pins: dict = field(default_factory=dict)
    extra_zeros: tuple = ()
    zero_unconstrained: bool = True

    def __post_init__(self):
        self.pins = {tuple(k): to_scalar(v) for k, v in self.pins.items()}
        self.extra_zeros = tuple(tuple(z) for z in self.extra_zeros)

    @property
    def normalization(self):
        """First nonzero pin as (n, m, value), or None."""
        for (n, m), v in sorted(self.pins.items()):
            if v:
                return (n, m, v)
        return None


@dataclass(frozen=True)
class FamilyMatch:
    family: str
    scale: Fraction
    alpha: Fraction | None = None

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "alpha": None if self.alpha is None else format_scalar(self.alpha),
            "scale": format_scalar(self.scale),
        }


@dataclass
class SolveReport:
    order: int
    status: str
    kernel: CoeffMatrix | None
    basis: list = field(default_factory=list)
    identified: FamilyMatch | None = None
    residual: Fraction | None = None
    normalization: tuple | None = None
    unconstrained_zeroed: list = field(default_factory=list)
    positive: bool | None = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "status": self.status,
            "dim": self.dim,
            "kernel": None if self.kernel is None else self.kernel.to_json(),
            "identified": None if self.identified is None else self.identified.to_json(),
            "residual": None if self.residual is None else format_scalar(self.residual),
            "normalization": None if self.normalization is None else {
                "index": list(self.normalization[:2]),
                "value": format_scalar(self.normalization[2]),
            },
            "unconstrained_zeroed": [list(ix) for ix in self.unconstrained_zeroed],
            "basis": [b.to_json() for b in self.basis],
        }


def _index(N):
    return lambda n, m: n * (N + 1) + m


def pde_rows(pde: KernelPDE, N: int) -> list[tuple[tuple[int, int], dict]]:
    """Coefficient-matching equations on the safe window.

    Term (a, b, c, d) sends c[n-a+c][m-b+d] to target (n, m) with factor
    (n-a+c)!/(n-a)! * (m-b+d)!/(m-b)!, and contributes nothing when n < a or
    m < b. A target is kept only if all its source indices are <= N.
    """
    idx = _index(N)
    rows = []
    for n in range(N + 1):
        for m in range(N + 1):
            row: dict[int, Fraction] = {}
            safe = True
            for (a, b, c, d), q in pde.terms.items():
                if n < a or m < b:
                    continue
                sn, sm = n - a + c, m - b + d
                if sn > N or sm > N:
                    safe = False
                    break
                f = q * (math.factorial(sn) // math.factorial(n - a)) * (
                    math.factorial(sm) // math.factorial(m - b)
                )
                j = idx(sn, sm)
                row[j] = row.get(j, ZERO) + f
            if not safe:
                continue
            row = {j: v for j, v in row.items() if v}
            if row:
                rows.append(((n, m), row))
    return rows


def _unconstrained(pde: KernelPDE, N: int, hermitian: bool) -> list[tuple[int, int]]:
    seen = set()
    for _, row in pde_rows(pde, N):
        seen.update(row)
    idx = _index(N)
    out = []
    for n in range(N + 1):
        for m in range(N + 1):
            if idx(n, m) in seen or (hermitian and idx(m, n) in seen):
                continue
            out.append((n, m))
    return out


def assemble_system(pde: KernelPDE, cons: Constraints, N: int) -> linalg.LinearSystem:
    """Linear system over c[n][m], variable n*(N+1) + m."""
    if N < 0:
        raise ValueError("truncation order must be >= 0")
    for (n, m) in list(cons.pins) + list(cons.extra_zeros):
        if not (0 <= n <= N and 0 <= m <= N):
            raise ValueError(f"pinned index {(n, m)} lies outside the order-{N} grid")
    idx = _index(N)
    system = linalg.LinearSystem((N + 1) ** 2)
    for target, row in pde_rows(pde, N):
        system.add(row, ZERO, ("pde", target))
    if cons.hermitian:
        for n in range(N + 1):
            for m in range(n + 1, N + 1):
                system.add({idx(n, m): ONE, idx(m, n): -ONE}, ZERO, ("sym", (n, m)))
    for (n, m) in cons.extra_zeros:
        system.add({idx(n, m): ONE}, ZERO, ("zero", (n, m)))
    if cons.zero_unconstrained:
        for (n, m) in _unconstrained(pde, N, cons.hermitian):
            if (n, m) not in cons.pins and (m, n) not in cons.pins:
                system.add({idx(n, m): ONE}, ZERO, ("unconstrained", (n, m)))
    for (n, m), v in sorted(cons.pins.items()):
        system.add({idx(n, m): ONE}, v, ("pin", (n, m)))
    return system


def _to_matrix(vec, N) -> CoeffMatrix:
    return CoeffMatrix(N, tuple(tuple(vec[n * (N + 1): (n + 1) * (N + 1)]) for n in range(N + 1)))


def _homogeneous_probe(pde: KernelPDE, cons: Constraints, N: int) -> linalg.LinearSystem:
    """The system with every nonzero pin dropped (pinned entries stay unzeroed)."""
    zero_pins = {ix: v for ix, v in cons.pins.items() if not v}
    system = assemble_system(
        pde, Constraints(cons.hermitian, zero_pins, cons.extra_zeros, cons.zero_unconstrained), N
    )
    keep = [
        i for i, lab in enumerate(system.labels)
        if not (lab[0] == "unconstrained" and (lab[1] in cons.pins or lab[1][::-1] in cons.pins))
    ]
    probe = linalg.LinearSystem(system.nvars)
    for i in keep:
        probe.add(system.rows[i], ZERO, system.labels[i])
    return probe


def solve_kernel(pde: KernelPDE, N: int, cons: Constraints | None = None) -> SolveReport:
    """Assemble, pick the normalization, solve, certify and identify."""
    cons = cons or Constraints()
    pins = dict(cons.pins)
    probe = _homogeneous_probe(pde, cons, N)
    if cons.normalization is None:
        pin = DEFAULT_PIN
        if linalg.forced_zero(probe, _index(N)(*DEFAULT_PIN)):
            pin = FALLBACK_PIN
        pins[pin] = ONE
    cons = Constraints(cons.hermitian, pins, cons.extra_zeros, cons.zero_unconstrained)
    system = assemble_system(pde, cons, N)
    zeroed = [lab[1] for lab in system.labels if lab and lab[0] == "unconstrained"]
    report = SolveReport(N, INCONSISTENT, None, normalization=cons.normalization,
                         unconstrained_zeroed=zeroed)
    if linalg.only_trivial(probe):
        # the equations alone force k = 0: no normalization can succeed
        report.status = DEGENERATE
        report.normalization = None
        report.kernel = CoeffMatrix.zeros(N)
        report.residual = pde.residual(report.kernel)
        report.identified = FamilyMatch("degenerate", ZERO)
        return report
    sol = linalg.solve(system)
    if not sol.consistent:
        return report
    kernel = _to_matrix(sol.particular, N)
    report.kernel = kernel
    report.basis = [_to_matrix(v, N) for v in sol.nullspace]
    report.residual = certify(pde, kernel, cons)
    if report.dim:
        report.status = FAMILY
        return report
    diag = kernel.diag()
    report.status = DEGENERATE if all(d == 0 for d in diag[1:]) else UNIQUE
    report.positive = all(d >= 0 for d in diag)
    match = identify(kernel)
    if match is not None and not report.positive:
        match = FamilyMatch("degenerate", match.scale, None)
    report.identified = match
    return report


def certify(pde: KernelPDE, k: CoeffMatrix, cons: Constraints) -> Fraction:
    """Largest violation of the PDE (on its window), symmetry and pins.

    The PDE part goes through the series operations, not through the linear
    system, so it checks the assembly as well as the elimination.
    """
    worst = pde.residual(k)
    N = k.order
    if cons.hermitian:
        for n in range(N + 1):
            for m in range(n):
                worst = max(worst, abs(k[n, m] - k[m, n]))
    for (n, m), v in cons.pins.items():
        worst = max(worst, abs(k[n, m] - v))
    for (n, m) in cons.extra_zeros:
        worst = max(worst, abs(k[n, m]))
    return worst


def identify(k: CoeffMatrix) -> FamilyMatch | None:
    """Match a diagonal kernel against the closed-form families."""
    if not k.is_hermitian() or not k.is_diagonal():
        return None
    d = k.diag()
    N = k.order
    if all(x == 0 for x in d[1:]):
        return FamilyMatch("degenerate", d[0])
    if d[0] != 0:
        if all(d[n] * math.factorial(n) == d[0] for n in range(N + 1)):
            return FamilyMatch("fock", d[0])
        alpha = d[1] / d[0]
        if all(d[n + 1] * (n + 1) == d[n] * (alpha + n) for n in range(N)):
            if alpha == 1:
                return FamilyMatch("hardy", d[0])
            return FamilyMatch("h_alpha", d[0], alpha)
        return FamilyMatch("weights", d[0])
    if d[1] != 0 and all(n * d[n] == d[1] for n in range(1, N + 1)):
        return FamilyMatch("dirichlet", d[1])
    return FamilyMatch("weights", d[1])


def kernel_from_weights(weights, c=1) -> CoeffMatrix:
    """Diagonal kernel sum c (a_n ... a_1 / n!) t^n of a diagonal operator z^n -> a_n z^n."""
    c = to_scalar(c)
    diag = [c]
    for n, a in enumerate(weights, start=1):
        a = to_scalar(a)
        if a <= 0:
            raise ValueError(f"weight a_{n} = {format_scalar(a)} is not positive")
        diag.append(diag[-1] * a / n)
    return CoeffMatrix.diagonal(diag)


@dataclass(frozen=True)
class RadiusEstimate:
    radius: float
    infinite: bool

    def to_json(self):
        return {"radius": "inf" if self.infinite else self.radius, "infinite": self.infinite}


def _log(x: Fraction) -> float:
    return math.log(x.numerator) - math.log(x.denominator)


def radius_estimate(k: CoeffMatrix, cap: float = 3.0) -> RadiusEstimate:
    """Radius in |z| of sum d_n (z w)^n, from the root test on the diagonal.

    Fits log(d_n)/(2n) against 1/n over the top quarter of the positive
    coefficients and reads off the intercept, which is exact for geometric
    growth and has O(1/n) bias for polynomial growth.
    """
    d = k.diag()
    pts = [(n, d[n]) for n in range(1, len(d)) if d[n] > 0]
    if not pts:
        raise ValueError("diagonal has no positive coefficients past the constant term")
    top = pts[-max(3, len(pts) // 4):]
    if len(top) == 1:
        n, dn = top[0]
        intercept = _log(dn) / (2 * n)
    else:
        x = np.array([1.0 / n for n, _ in top])
        y = np.array([_log(dn) / (2 * n) for n, dn in top])
        _, intercept = np.polyfit(x, y, 1)
    radius = math.exp(-intercept) if intercept > -700 else math.inf
    if radius > cap:
        return RadiusEstimate(math.inf, True)
    return RadiusEstimate(radius, False)


def diagonal_ratios(pde: KernelPDE, N: int) -> dict[int, Fraction]:
    """Ratios d[i+1]/d[i] that single equations of the system impose.

    Picks the safe-window equations involving only c[i][i] and c[i+1][i+1]
    (the diagonal chain). For the Hardy PDE this is the chain d[i+1] = d[i].
    """
    idx = _index(N)
    out = {}
    for _, row in pde_rows(pde, N):
        for i in range(N):
            lo, hi = idx(i, i), idx(i + 1, i + 1)
            if hi in row and set(row) <= {lo, hi}:
                out[i] = -row.get(lo, ZERO) / row[hi]
    return out
