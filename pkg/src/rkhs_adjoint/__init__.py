"""Reproducing kernels from adjoint identities D* = p(Mz, D), computed exactly."""
from .kernel_solver import Constraints, identify, kernel_from_weights, radius_estimate, solve_kernel
from .opparser import SourceText, parse_operator, parse_pde
from .pde import KernelPDE, adjoint_to_pde, render_pde
from .series import CoeffMatrix, oracle_family
from .weyl import NormalForm, apply_op, apply_to_kernel, normalize

__all__ = [
    "CoeffMatrix", "Constraints", "KernelPDE", "NormalForm", "SourceText",
    "adjoint_to_pde", "apply_op", "apply_to_kernel", "identify", "kernel_from_weights",
    "normalize", "oracle_family", "parse_operator", "parse_pde", "radius_estimate",
    "render_pde", "solve_kernel",
]
