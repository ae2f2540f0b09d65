"""A dependent type theory with an embedded linear logic of supplies."""

from .diagnostics import Diagnostic, LinDepError
from .kernel import Context, Env, check, conv, infer, nf, whnf
from .solver import brute_force_reachable, normalize_supply, solve, symmetrize
from .supply import check_production, endpoints

__all__ = [
    "Context",
    "Diagnostic",
    "Env",
    "LinDepError",
    "brute_force_reachable",
    "check",
    "check_production",
    "conv",
    "endpoints",
    "infer",
    "nf",
    "normalize_supply",
    "solve",
    "symmetrize",
    "whnf",
]
