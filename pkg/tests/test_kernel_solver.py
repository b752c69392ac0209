from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rkhs_adjoint import linalg
from rkhs_adjoint.kernel_solver import (
    Constraints, assemble_system, diagonal_ratios, identify, kernel_from_weights, pde_rows,
    radius_estimate, solve_kernel,
)
from rkhs_adjoint.opparser import parse_pde
from rkhs_adjoint.pde import KernelPDE, adjoint_to_pde, render_pde
from rkhs_adjoint.series import CoeffMatrix, oracle_family
from rkhs_adjoint.weyl import NormalForm
from oracles import affine_solution_set, same_affine_set

HARDY = NormalForm({(2, 1): 1, (1, 0): 1})
FOCK = NormalForm({(1, 0): 1})
DIRICHLET = parse_pde("dv^2 k = w^2 dv dw k")


def h_alpha(alpha):
    return NormalForm({(2, 1): 1, (1, 0): alpha})


def family(name, N, alpha=None):
    return oracle_family(name, N, alpha=alpha)


CASES = [
    (HARDY, "hardy", None),
    (FOCK, "fock", None),
    (h_alpha(1), "h_alpha", Fraction(1)),
    (h_alpha(Fraction(3, 2)), "h_alpha", Fraction(3, 2)),
    (h_alpha(2), "h_alpha", Fraction(2)),
    (h_alpha(3), "h_alpha", Fraction(3)),
]


def test_adjoint_to_pde_examples():
    assert adjoint_to_pde(HARDY) == parse_pde("dv k = w^2 dw k + w k")
    assert adjoint_to_pde(FOCK) == parse_pde("dv k = w k")
    assert adjoint_to_pde(h_alpha(2)) == parse_pde("dv k = w^2 dw k + 2 w k")
    assert render_pde(adjoint_to_pde(NormalForm({(1, 1): 1, (0, 0): 1}))) == "dv k = w dw k + k"


def rows_by_target(pde, N):
    return {t: row for t, row in pde_rows(pde, N)}


def ix(N, n, m):
    return n * (N + 1) + m


def test_hardy_rows():
    N = 6
    rows = rows_by_target(adjoint_to_pde(HARDY), N)
    for n in range(N):
        assert rows[(n, 0)] == {ix(N, n + 1, 0): n + 1}
        for m in range(2, N + 1):
            assert rows[(n, m)] == {ix(N, n + 1, m): n + 1, ix(N, n, m - 1): -m}
    # the top row would need c[N+1][m]
    assert all(t[0] < N for t in rows)


def test_dirichlet_diagonal_rows():
    N = 8
    ratios = diagonal_ratios(DIRICHLET, N)
    # (j+2) c[j+2][j+2] = (j+1) c[j+1][j+1]
    for j in range(N - 1):
        assert ratios[j + 1] == Fraction(j + 1, j + 2)


def test_hardy_diagonal_chain():
    assert set(diagonal_ratios(adjoint_to_pde(HARDY), 8).values()) == {1}


@pytest.mark.parametrize("nf, name, alpha", CASES)
def test_oracle_residual_zero(nf, name, alpha):
    for N in (4, 9, 16):
        assert adjoint_to_pde(nf).residual(family(name, N, alpha)) == 0


def test_dirichlet_oracle_residual_zero():
    for N in (4, 9, 16):
        assert DIRICHLET.residual(family("dirichlet", N)) == 0


@pytest.mark.parametrize("nf, name, alpha", CASES)
def test_uniqueness_at_truncation(nf, name, alpha):
    for N in range(4, 17):
        r = solve_kernel(adjoint_to_pde(nf), N)
        assert r.status == "unique" and r.residual == 0
        assert r.kernel == family(name, N, alpha)


def test_dirichlet_unique_with_pins():
    for N in range(4, 17):
        r = solve_kernel(DIRICHLET, N, Constraints(pins={(0, 0): 0, (1, 1): 1}))
        assert r.status == "unique"
        assert r.kernel == family("dirichlet", N)
        assert r.identified.family == "dirichlet"


def test_dirichlet_default_normalization_falls_back():
    r = solve_kernel(DIRICHLET, 8)
    assert r.normalization == (1, 1, 1)
    assert r.kernel == family("dirichlet", 8)
    assert set(r.unconstrained_zeroed) == {(0, 0), (0, 1), (1, 0)}


def test_dirichlet_without_zeroing_leaves_v_plus_w_free():
    r = solve_kernel(DIRICHLET, 6, Constraints(pins={(0, 0): 0, (1, 1): 1}, zero_unconstrained=False))
    assert r.status == "family" and r.dim == 1
    assert r.basis[0].nonzero() == {(0, 1): 1, (1, 0): 1}


def test_degenerate_operator():
    pde = adjoint_to_pde(NormalForm({(2, 0): 1}))
    r = solve_kernel(pde, 8)
    assert r.status == "degenerate"
    assert r.kernel.nonzero() == {}
    # the constant kernel is not a solution: target (0, 2) reads c[1][2] = c[0][0]
    assert pde.residual(CoeffMatrix.from_dict(8, {(0, 0): 1})) != 0


def test_inconsistent_pins():
    r = solve_kernel(adjoint_to_pde(HARDY), 6, Constraints(pins={(0, 0): 1, (2, 2): 2}))
    assert r.status == "inconsistent" and r.kernel is None


def test_no_hermitian_gives_a_family():
    r = solve_kernel(adjoint_to_pde(HARDY), 6, Constraints(hermitian=False, zero_unconstrained=False))
    assert r.status == "family" and r.dim > 0
    assert r.residual == 0


def test_pin_outside_grid():
    with pytest.raises(ValueError):
        assemble_system(adjoint_to_pde(HARDY), Constraints(pins={(9, 0): 1}), 4)


def test_negative_alpha_fails_positivity():
    r = solve_kernel(adjoint_to_pde(h_alpha(-1)), 6)
    assert r.status == "unique" and r.positive is False
    assert r.identified.family == "degenerate"


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(CASES), st.fractions(min_value=Fraction(1, 50), max_value=100, max_denominator=50))
def test_scale_equivariance(case, c):
    nf, name, alpha = case
    pde = adjoint_to_pde(nf)
    base = solve_kernel(pde, 6)
    scaled = solve_kernel(pde, 6, Constraints(pins={(0, 0): c}))
    assert scaled.kernel == base.kernel.scale(c)
    assert scaled.identified.family == base.identified.family
    assert scaled.identified.scale == c


def test_hardy_solution_satisfies_recurrence():
    N = 10
    k = solve_kernel(adjoint_to_pde(HARDY), N).kernel
    for n in range(N):
        for m in range(2, N + 1):
            assert (n + 1) * k[n + 1, m] == m * k[n, m - 1]


@pytest.mark.parametrize("N", [2, 3, 4])
@pytest.mark.parametrize("pde, cons", [
    (adjoint_to_pde(HARDY), Constraints(pins={(0, 0): 1})),
    (adjoint_to_pde(FOCK), Constraints(pins={(0, 0): 1})),
    (adjoint_to_pde(h_alpha(2)), Constraints(pins={(0, 0): 1})),
    (DIRICHLET, Constraints(pins={(0, 0): 0, (1, 1): 1})),
    (DIRICHLET, Constraints(pins={(1, 1): 1}, zero_unconstrained=False)),
    (adjoint_to_pde(HARDY), Constraints(hermitian=False, pins={(0, 0): 1})),
    (adjoint_to_pde(NormalForm({(2, 0): 1})), Constraints(pins={(0, 0): 1})),
])
def test_elimination_matches_brute_force(N, pde, cons):
    system = assemble_system(pde, cons, N)
    sol = linalg.solve(system)
    A, b = system.dense()
    p, h = affine_solution_set(A, b)
    assert sol.consistent == (p is not None)
    assert same_affine_set(sol.particular, sol.nullspace, p, h)


def test_identify_examples():
    assert identify(CoeffMatrix.diagonal([1, 2, 3, 4, 5])).__dict__ == {
        "family": "h_alpha", "scale": 1, "alpha": 2}
    m = identify(CoeffMatrix.diagonal([Fraction(7, 3)] * 6))
    assert (m.family, m.scale) == ("hardy", Fraction(7, 3))
    m = identify(CoeffMatrix.diagonal([0, 1, Fraction(1, 2), Fraction(1, 3)]))
    assert (m.family, m.scale) == ("dirichlet", 1)
    assert identify(oracle_family("fock", 6).scale(5)).family == "fock"
    assert identify(CoeffMatrix.diagonal([1, 1, 3, 1])).family == "weights"
    assert identify(CoeffMatrix.from_dict(3, {(0, 0): 1, (0, 1): 1, (1, 0): 1})) is None
    assert identify(CoeffMatrix.diagonal([1, 0, 0])).family == "degenerate"


def test_kernel_from_weights():
    N = 12
    assert kernel_from_weights(range(1, N + 1)) == oracle_family("hardy", N)
    assert kernel_from_weights([1] * N) == oracle_family("fock", N)
    assert kernel_from_weights(range(2, N + 2)) == oracle_family("h_alpha", N, alpha=2)
    assert kernel_from_weights([1] * 3, c=4).diag() == [4, 4, 2, Fraction(2, 3)]
    with pytest.raises(ValueError):
        kernel_from_weights([1, 0, 2])


def test_radius_estimates():
    assert radius_estimate(oracle_family("hardy", 32)).radius == pytest.approx(1.0, abs=0.01)
    assert radius_estimate(oracle_family("fock", 32)).infinite
    assert radius_estimate(oracle_family("h_alpha", 32, alpha=3)).radius == pytest.approx(1.0, abs=0.05)
    # geometric growth 4^n: sum 4^n (z w)^n converges for |z| < 1/2
    geo = CoeffMatrix.diagonal([Fraction(4) ** n for n in range(33)])
    assert radius_estimate(geo).radius == pytest.approx(0.5, abs=1e-9)
    assert not radius_estimate(oracle_family("fock", 32), cap=1e9).infinite
    with pytest.raises(ValueError):
        radius_estimate(CoeffMatrix.zeros(5))
