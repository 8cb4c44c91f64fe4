"""Mollified coefficients, a flux-form solver and diagnostics for u_tt = (a u_x)_x in 1-D."""

from .coefficients import CoefficientSpec, LowerOrderTerms, RegularizedCoefficient, regularize
from .exact import InitialData, default_initial_data, exact_u, exact_ut
from .grid import Grid1D
from .solver import SolveConfig, WaveState, evolve

__all__ = [
    "CoefficientSpec",
    "LowerOrderTerms",
    "RegularizedCoefficient",
    "regularize",
    "InitialData",
    "default_initial_data",
    "exact_u",
    "exact_ut",
    "Grid1D",
    "SolveConfig",
    "WaveState",
    "evolve",
]
