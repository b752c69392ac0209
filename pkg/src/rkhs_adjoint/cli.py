"""Command line: ``rkhs-adjoint {solve,verify,pde,weights}``.

Operator language: words in ``Mz`` and ``D``, juxtaposition = composition,
rationals and named parameters as scalars, ``^`` for powers. Example:
``"Mz D Mz - (1 - alpha) Mz" --param alpha=2``.

PDE language: ``lhs = rhs`` with terms ``[q] [v^a] [w^b] [dv^c] [dw^d] k``,
where ``v`` is the first kernel variable and ``w`` the conjugated second one.
Example: ``"dv^2 k = w^2 dv dw k"``.

Exit codes: 0 success (solve: unique or family; verify: all residuals zero),
1 input error, 2 solve degenerate/inconsistent or verify found a violation.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .gram_verify import adjoint_check
from .kernel_solver import (
    DEGENERATE, INCONSISTENT, Constraints, SolveReport, identify, kernel_from_weights,
    radius_estimate, solve_kernel,
)
from .opparser import ParseError, SourceText, parse_operator, parse_pde
from .pde import adjoint_to_pde, render_pde
from .scalar import format_scalar, parse_scalar
from .series import CoeffMatrix, oracle_family
from .weyl import normalize

ENV_ORDER = "RKHS_ADJOINT_N"
DEFAULT_ORDER = 8


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    op: str | None = None
    pde: str | None = None
    params: dict = field(default_factory=dict)
    order: int = DEFAULT_ORDER
    pins: dict = field(default_factory=dict)
    hermitian: bool = True
    zero_unconstrained: bool = True
    fmt: str = "text"
    output: str | None = None

    def __post_init__(self):
        if self.order < 2:
            raise InputError("truncation order must be >= 2")


def _default_order() -> int:
    raw = os.environ.get(ENV_ORDER)
    if raw is None:
        return DEFAULT_ORDER
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{ENV_ORDER}={raw!r} is not an integer") from None


def _parse_param(text: str) -> tuple[str, Fraction]:
    name, sep, value = text.partition("=")
    if not sep or not name.strip():
        raise InputError(f"parameter {text!r} must look like name=p/q")
    try:
        return name.strip(), parse_scalar(value)
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"parameter {name.strip()}: {e}") from None


_PIN = re.compile(r"^c(?:(\d)(\d)|(\d+),(\d+))=(.+)$")


def _parse_pin(text: str) -> tuple[tuple[int, int], Fraction]:
    m = _PIN.match(text.replace(" ", ""))
    if not m:
        raise InputError(f"pin {text!r} must look like c11=1 or c10,12=1/2")
    n, mm = (m.group(1), m.group(2)) if m.group(1) else (m.group(3), m.group(4))
    try:
        return (int(n), int(mm)), parse_scalar(m.group(5))
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"pin {text!r}: {e}") from None


_AFFINE = re.compile(
    r"^(?:(?P<a>[-+]?\d+(?:/\d+)?)\s*\*?\s*)?n\s*(?:(?P<sign>[-+])\s*(?P<b>\d+(?:/\d+)?))?$"
)


def weight_sequence(text: str, count: int) -> list[Fraction]:
    """Weights a_1..a_count from "n", "n+1", "2n-1", a constant, or "1,2,3"."""
    text = text.strip()
    if "," in text:
        vals = [parse_scalar(x) for x in text.split(",") if x.strip()]
        if len(vals) < count:
            raise InputError(f"need {count} weights, got {len(vals)}")
        return vals[:count]
    m = _AFFINE.match(text)
    if m:
        a = parse_scalar(m.group("a")) if m.group("a") else Fraction(1)
        b = parse_scalar(m.group("b")) if m.group("b") else Fraction(0)
        if m.group("sign") == "-":
            b = -b
        return [a * n + b for n in range(1, count + 1)]
    try:
        c = parse_scalar(text)
    except ValueError:
        raise InputError(f"unknown weight generator {text!r}") from None
    return [c] * count


def read_weights_file(path: str, count: int) -> list[Fraction]:
    with open(path) as fh:
        vals = [parse_scalar(line) for line in fh if line.strip() and not line.startswith("#")]
    if len(vals) < count:
        raise InputError(f"{path}: need {count} weights, got {len(vals)}")
    return vals[:count]


# -- pipeline ----------------------------------------------------------------

def operator_normal_form(text: str, params: dict):
    return normalize(parse_operator(SourceText(text, params)))


def kernel_pde(cfg: RunConfig):
    """(normal form or None, KernelPDE) for either input mode."""
    if cfg.op is not None:
        nf = operator_normal_form(cfg.op, cfg.params)
        return nf, adjoint_to_pde(nf)
    return None, parse_pde(SourceText(cfg.pde, cfg.params))


def run_solve(cfg: RunConfig) -> tuple[SolveReport, dict]:
    nf, pde = kernel_pde(cfg)
    cons = Constraints(cfg.hermitian, cfg.pins, (), cfg.zero_unconstrained)
    report = solve_kernel(pde, cfg.order, cons)
    payload = report.to_json()
    payload["normal_form"] = None if nf is None else nf.render()
    payload["pde"] = render_pde(pde)
    payload["params"] = {k: format_scalar(v) for k, v in cfg.params.items()}
    return report, payload


def solve_exit_code(report: SolveReport) -> int:
    return 2 if report.status in (DEGENERATE, INCONSISTENT) else 0


def load_kernel(path: str) -> CoeffMatrix:
    with open(path) as fh:
        data = json.load(fh)
    if "kernel" in data:
        data = data["kernel"]
    if data is None:
        raise InputError(f"{path}: report has no kernel")
    return CoeffMatrix.from_json(data)


def family_kernel(name: str, order: int, params: dict) -> CoeffMatrix:
    alpha = params.get("alpha")
    if name == "bergman":
        name, alpha = "h_alpha", Fraction(2)
    if name == "h_alpha" and alpha is None:
        raise InputError("family h_alpha needs --param alpha=...")
    return oracle_family(name, order, alpha=alpha)


def run_verify(cfg: RunConfig, family: str | None, kernel_path: str | None) -> dict:
    if kernel_path:
        k = load_kernel(kernel_path)
    else:
        k = family_kernel(family, cfg.order, cfg.params)
    nf, pde = kernel_pde(cfg)
    out = {
        "order": k.order,
        "normal_form": None if nf is None else nf.render(),
        "pde": render_pde(pde),
        "pde_residual": format_scalar(pde.residual(k)),
    }
    if nf is None:
        out["adjoint"] = None
    elif not k.is_diagonal():
        out["adjoint"] = {"skipped": "kernel is not diagonal"}
    else:
        try:
            out["adjoint"] = adjoint_check(k, nf, cfg.order).to_json()
        except ValueError as e:
            out["adjoint"] = {"skipped": str(e)}
    return out


def verify_exit_code(out: dict) -> int:
    bad = out["pde_residual"] != "0"
    adj = out.get("adjoint")
    if adj and "residual" in adj and adj["residual"] != "0":
        bad = True
    return 2 if bad else 0


def run_weights(cfg: RunConfig, text: str | None, path: str | None, cap: float) -> dict:
    N = cfg.order
    weights = read_weights_file(path, N) if path else weight_sequence(text, N)
    k = kernel_from_weights(weights)
    match = identify(k)
    est = radius_estimate(k, cap=cap)
    return {
        "order": N,
        "weights": [format_scalar(a) for a in weights],
        "kernel": k.to_json(),
        "diagonal": [format_scalar(d) for d in k.diag()],
        "radius": est.to_json(),
        "identified": None if match is None else match.to_json(),
    }


# -- rendering ---------------------------------------------------------------

def _fmt_match(m: dict | None) -> str:
    if m is None:
        return "none"
    s = m["family"]
    if m.get("alpha") is not None:
        s += f" (alpha={m['alpha']})"
    return s + f", scale {m['scale']}"


def _diag_line(kernel_json: dict | None, limit: int = 12) -> str:
    if kernel_json is None:
        return "-"
    e = kernel_json["entries"]
    diag = [e[i][i] for i in range(len(e))]
    more = " ..." if len(diag) > limit else ""
    return ", ".join(diag[:limit]) + more


def text_solve(p: dict) -> str:
    lines = []
    if p["params"]:
        lines.append("params:       " + ", ".join(f"{k}={v}" for k, v in p["params"].items()))
    if p["normal_form"] is not None:
        lines.append(f"normal form:  {p['normal_form']}")
    lines.append(f"pde:          {p['pde']}")
    lines.append(f"order:        {p['order']}")
    lines.append(f"status:       {p['status']}" + (f" (dim {p['dim']})" if p["dim"] else ""))
    if p["normalization"]:
        n, m = p["normalization"]["index"]
        lines.append(f"normalized:   c{n}{m} = {p['normalization']['value']}")
    if p["unconstrained_zeroed"]:
        lines.append("zeroed (not in any equation): "
                     + " ".join(f"c{n},{m}" for n, m in p["unconstrained_zeroed"]))
    lines.append(f"diagonal:     {_diag_line(p['kernel'])}")
    if p["kernel"] is not None:
        e = p["kernel"]["entries"]
        off = all(e[i][j] == "0" for i in range(len(e)) for j in range(len(e)) if i != j)
        lines.append(f"off-diagonal: {'all zero' if off else 'nonzero entries present'}")
    lines.append(f"identified:   {_fmt_match(p['identified'])}")
    lines.append(f"residual:     {p['residual'] if p['residual'] is not None else '-'}")
    return "\n".join(lines)


def text_verify(out: dict) -> str:
    lines = []
    if out["normal_form"] is not None:
        lines.append(f"normal form:      {out['normal_form']}")
    lines.append(f"pde:              {out['pde']}")
    lines.append(f"pde residual:     {out['pde_residual']}")
    adj = out["adjoint"]
    if adj is None:
        lines.append("adjoint residual: n/a (no operator given)")
    elif "skipped" in adj:
        lines.append(f"adjoint residual: skipped ({adj['skipped']})")
    else:
        fv = adj["first_violation"]
        tail = "" if fv is None else f"  first violation at (n, m) = ({fv[0]}, {fv[1]})"
        lines.append(f"adjoint residual: {adj['residual']}{tail}")
    return "\n".join(lines)


def text_weights(out: dict) -> str:
    r = out["radius"]
    radius = "infinite (above cap)" if r["infinite"] else f"{r['radius']:.6f}"
    return "\n".join([
        f"order:      {out['order']}",
        f"diagonal:   {', '.join(out['diagonal'][:12])}{' ...' if len(out['diagonal']) > 12 else ''}",
        f"radius:     {radius}",
        f"identified: {_fmt_match(out['identified'])}",
    ])


# -- argparse ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rkhs-adjoint",
        description="Derive, solve and check reproducing-kernel PDEs from adjoint identities D* = p(Mz, D).",
        epilog=__doc__.split("\n\n", 1)[1],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, source=True, source_required=True):
        p.add_argument("-N", "--order", type=int, default=None,
                       help=f"truncation order (default ${ENV_ORDER} or {DEFAULT_ORDER})")
        p.add_argument("--param", action="append", default=[], metavar="NAME=P/Q")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("-o", "--output", help="write the report here instead of stdout")
        if source:
            g = p.add_mutually_exclusive_group(required=source_required)
            g.add_argument("--op", help="operator p(Mz, D) in D* = p(Mz, D)")
            g.add_argument("--pde", help="kernel PDE, e.g. 'dv^2 k = w^2 dv dw k'")

    p = sub.add_parser("solve", help="solve for the kernel's Taylor coefficients")
    common(p)
    p.add_argument("--pin", action="append", default=[], metavar="cNM=P/Q",
                   help="fix a coefficient (repeatable); replaces the default c00=1")
    p.add_argument("--no-hermitian", action="store_true", help="drop c[n][m] = c[m][n]")
    p.add_argument("--keep-unconstrained", action="store_true",
                   help="leave coefficients no equation mentions free instead of zero")
    p.add_argument("--sweep", metavar="NAME=V1,V2,...",
                   help="repeat the solve for each value of one parameter")

    p = sub.add_parser("verify", help="residuals of a kernel against an operator or PDE")
    common(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--family", choices=("hardy", "h_alpha", "bergman", "fock", "dirichlet"))
    g.add_argument("--kernel", help="CoeffMatrix or solve-report JSON file")

    p = sub.add_parser("pde", help="print the normal form and the kernel PDE of an operator")
    common(p, source=False)
    p.add_argument("--op", required=True)

    p = sub.add_parser("weights", help="kernel of a diagonal operator z^n -> a_n z^n")
    common(p, source=False)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--weights", help='"n", "n+1", "2n-1", a constant, or "a1,a2,..."')
    g.add_argument("--weights-file", help="one rational per line, a_1 first")
    p.add_argument("--cap", type=float, default=3.0,
                   help="report an infinite radius above this value (default 3)")
    return ap


def _config(args) -> RunConfig:
    params = dict(_parse_param(s) for s in args.param)
    pins = dict(_parse_pin(s) for s in getattr(args, "pin", []))
    order = args.order if args.order is not None else _default_order()
    return RunConfig(
        command=args.command,
        op=getattr(args, "op", None),
        pde=getattr(args, "pde", None),
        params=params,
        order=order,
        pins=pins,
        hermitian=not getattr(args, "no_hermitian", False),
        zero_unconstrained=not getattr(args, "keep_unconstrained", False),
        fmt=args.format,
        output=args.output,
    )


def _emit(cfg: RunConfig, payload, text: str):
    body = json.dumps(payload, indent=2) if cfg.fmt == "json" else text
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(body + "\n")
    else:
        print(body)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        if cfg.command == "solve":
            if args.sweep:
                name, _, values = args.sweep.partition("=")
                payloads, codes = [], []
                for v in values.split(","):
                    cfg.params[name.strip()] = parse_scalar(v)
                    report, payload = run_solve(cfg)
                    payloads.append(payload)
                    codes.append(solve_exit_code(report))
                _emit(cfg, payloads, "\n\n".join(text_solve(p) for p in payloads))
                return max(codes)
            report, payload = run_solve(cfg)
            _emit(cfg, payload, text_solve(payload))
            return solve_exit_code(report)
        if cfg.command == "verify":
            out = run_verify(cfg, args.family, args.kernel)
            _emit(cfg, out, text_verify(out))
            return verify_exit_code(out)
        if cfg.command == "pde":
            nf = operator_normal_form(cfg.op, cfg.params)
            pde = adjoint_to_pde(nf)
            out = {"normal_form": nf.render(), "pde": render_pde(pde)}
            _emit(cfg, out, f"normal form: {out['normal_form']}\n{out['pde']}")
            return 0
        if cfg.command == "weights":
            out = run_weights(cfg, args.weights, args.weights_file, args.cap)
            _emit(cfg, out, text_weights(out))
            return 0
    except (InputError, ParseError, ValueError, ZeroDivisionError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 1


if __name__ == "__main__":
    sys.exit(main())
