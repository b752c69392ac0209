"""Enumerate small adjoint identities D* = p(Mz, D) and tabulate what the solver finds.

p ranges over sums of the monomials Mz^a D^b (a, b <= 2) with coefficients in
{-1, 0, 1, 2}, at most --terms nonzero. For each p it reports the status, the
dimension of the solution space and the identified family.

    python3 scripts/explore_polynomials.py --terms 2 -N 8
"""
import argparse
import itertools
from collections import Counter
from dataclasses import dataclass

from rkhs_adjoint.kernel_solver import solve_kernel
from rkhs_adjoint.pde import adjoint_to_pde
from rkhs_adjoint.weyl import NormalForm


@dataclass
class Config:
    terms: int = 2
    order: int = 8
    coeffs: tuple = (-1, 1, 2)
    max_degree: int = 2
    show_all: bool = False


def candidates(cfg: Config):
    monos = [(a, b) for a in range(cfg.max_degree + 1) for b in range(cfg.max_degree + 1)]
    for r in range(1, cfg.terms + 1):
        for chosen in itertools.combinations(monos, r):
            for cs in itertools.product(cfg.coeffs, repeat=r):
                yield NormalForm(dict(zip(chosen, cs)))


def main(cfg: Config):
    tally = Counter()
    for nf in candidates(cfg):
        r = solve_kernel(adjoint_to_pde(nf), cfg.order)
        fam = r.identified.family if r.identified else "-"
        tally[(r.status, fam)] += 1
        if cfg.show_all or r.status in ("unique", "family"):
            alpha = f" alpha={r.identified.alpha}" if r.identified and r.identified.alpha is not None else ""
            print(f"{nf.render():<36} {r.status:<12} dim={r.dim:<3} {fam}{alpha}")
    print()
    for (status, fam), n in sorted(tally.items()):
        print(f"{status:<12} {fam:<10} {n}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--terms", type=int, default=2)
    ap.add_argument("-N", "--order", type=int, default=8)
    ap.add_argument("--all", action="store_true", help="also list degenerate and inconsistent cases")
    args = ap.parse_args()
    main(Config(terms=args.terms, order=args.order, show_all=args.all))
