"""Norms, energies and growth-rate estimates for solution nets."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .coefficients import RegularizedCoefficient
from .exact import InitialData, exact_u
from .grid import Grid1D
from .solver import WaveState


def _weights(grid: Grid1D) -> np.ndarray:
    w = np.full(grid.nx, grid.dx)
    w[[0, -1]] *= 0.5
    return w


def l2_norm(field, grid: Grid1D) -> float:
    """Discrete L2 norm, endpoints weighted by one half."""
    f = np.asarray(field, dtype=float)
    if f.shape != (grid.nx,):
        raise ValueError(f"field has shape {f.shape}, grid has {grid.nx} nodes")
    return float(np.sqrt(_weights(grid) @ (f * f)))


def l2_error_vs_exact(state: WaveState, data: InitialData, grid: Grid1D) -> float:
    return l2_norm(state.u - exact_u(state.t, grid.x, data), grid)


def symmetriser_energy(state: WaveState, a: RegularizedCoefficient, grid: Grid1D) -> float:
    """(QU, U) with Q = diag(1, a, 1): ||u||^2 + (a w, w) + ||v||^2."""
    w = _weights(grid)
    return float(w @ (state.u**2 + a.samples * state.w**2 + state.v**2))


def physical_energy(state: WaveState, a: RegularizedCoefficient, grid: Grid1D) -> float:
    """1/2 sum dx (v^2 + a w^2), the quantity conserved by the continuous problem."""
    return 0.5 * grid.dx * float(np.sum(state.v**2 + a.samples * state.w**2))


def moderateness_exponent(rows: Sequence[tuple[float, float]]) -> float:
    """Least-squares slope N of log(value) against log(1/eps).

    N close to 0 means the net stays bounded; N > 0 means growth like eps^-N.
    """
    if len(rows) < 3:
        raise ValueError("need at least 3 rows to fit an exponent")
    eps = np.array([r[0] for r in rows], dtype=float)
    vals = np.array([r[1] for r in rows], dtype=float)
    if np.any(vals <= 0):
        raise ValueError("values must be positive")
    if np.any(eps <= 0) or np.any(np.diff(eps) >= 0):
        raise ValueError("eps must be positive and strictly decreasing")
    slope, _ = np.polyfit(np.log(1.0 / eps), np.log(vals), 1)
    return float(slope)


@dataclass(frozen=True)
class SweepRow:
    eps: float
    value: float
    kind: str
    alpha: Optional[float] = None
    dt: Optional[float] = None
    failed: bool = False
    note: str = ""


@dataclass
class SweepReport:
    rows: list[SweepRow]
    t_final: float
    dx: float
    cfl: float
    coefficient: str
    fitted_exponent: Optional[float] = None
    notes: list[str] = field(default_factory=list)
    # worst per-step relative gain of the physical energy, keyed by eps
    energy_gains: dict[float, float] = field(default_factory=dict)

    def __post_init__(self):
        self.rows = sorted(self.rows, key=lambda r: -r.eps)
        good = [(r.eps, r.value) for r in self.rows if not r.failed]
        if self.fitted_exponent is None and len(good) >= 3 and all(v > 0 for _, v in good):
            self.fitted_exponent = moderateness_exponent(good)

    @property
    def ok(self) -> bool:
        return not any(r.failed for r in self.rows)

    @property
    def eps(self) -> np.ndarray:
        return np.array([r.eps for r in self.rows])

    @property
    def values(self) -> np.ndarray:
        return np.array([r.value for r in self.rows])
