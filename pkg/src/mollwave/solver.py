"""Lax-Friedrichs solver for the regularized wave equation.

The second-order problem

    u_tt - a u_xx + b1 u_x + b2 u_t + b3 u = f

is carried as (u, w, v) = (u, u_x, u_t). The pair (v, w) is advanced in flux
form, v_t = (a w)_x + s, w_t = v_x, where the source

    s = -(b1 + a') w - b2 v - b3 u + f

vanishes for the conservative problem u_tt = (a u_x)_x. The displacement u
has no flux and is integrated from v with the trapezoidal rule.

Two dissipation choices share one update

    q_j <- q_j + dt/(2 dx) (F_{j+1} - F_{j-1}) + dt/dx (D_{j+1/2} - D_{j-1/2})

with interface dissipation D = s (q_{j+1} - q_j) / 2:

* ``classical``: s = dx/dt everywhere, which is the textbook Lax-Friedrichs
  average 0.5 (q_{j+1} + q_{j-1}).
* ``local`` (default): s = max(sqrt(a_j), sqrt(a_{j+1})). The w-dissipation
  reaching node j is scaled by min(a_j, a_{j+1}) / a_j so that it is
  non-positive in the a-weighted energy sum(v^2 + a w^2). Where a = 0 nothing
  propagates and nothing is smeared.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from .coefficients import LowerOrderTerms, RegularizedCoefficient
from .exact import InitialData
from .grid import Grid1D

log = logging.getLogger(__name__)

__all__ = [
    "Grid1D",
    "WaveState",
    "SolveConfig",
    "SystemCoefficients",
    "SolveResult",
    "StabilityError",
    "DivergenceError",
    "InvalidCoefficientError",
    "BoundaryContaminationWarning",
    "build_system",
    "cfl_dt",
    "lax_friedrichs_step",
    "evolve",
    "write_snapshot",
]

_CFL_SLACK = 1e-12
SCHEMES = ("local", "classical")


class StabilityError(ValueError):
    pass


class DivergenceError(ArithmeticError):
    def __init__(self, step: int, t: float):
        super().__init__(f"non-finite values after step {step} (t={t:.6g})")
        self.step = step
        self.t = t


class InvalidCoefficientError(ValueError):
    pass


class BoundaryContaminationWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class WaveState:
    t: float
    u: np.ndarray
    w: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        if not (self.u.shape == self.w.shape == self.v.shape) or self.u.ndim != 1:
            raise ValueError("u, w and v must be 1-D arrays of equal length")

    @classmethod
    def zeros(cls, grid: Grid1D, t: float = 0.0) -> "WaveState":
        z = np.zeros(grid.nx)
        return cls(t, z, z.copy(), z.copy())

    @classmethod
    def initial(cls, data: InitialData, grid: Grid1D) -> "WaveState":
        x = grid.x
        as_arr = lambda f: np.asarray(f(x), dtype=float).copy()  # noqa: E731
        return cls(0.0, as_arr(data.g0), as_arr(data.g0_prime), as_arr(data.g1))


@dataclass(frozen=True)
class SolveConfig:
    t_final: float
    dt: Optional[float] = None
    cfl_target: float = 0.9
    boundary: str = "constant-extrapolation"
    record_every: int = 0
    track_energy: bool = False
    scheme: str = "local"

    def __post_init__(self):
        if self.t_final < 0:
            raise ValueError("t_final must be non-negative")
        if not 0.0 < self.cfl_target <= 1.0:
            raise ValueError(f"cfl_target must lie in (0, 1], got {self.cfl_target}")
        if self.boundary != "constant-extrapolation":
            raise ValueError(f"unsupported boundary handling {self.boundary!r}")
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")


@dataclass(frozen=True)
class SystemCoefficients:
    """Per-node data of dU/dt = A dU/dx + B U + F for U = (u, u_x, u_t)."""

    a: np.ndarray
    a_prime: np.ndarray
    b1: np.ndarray
    b2: np.ndarray
    b3: np.ndarray
    forcing: Optional[Callable[[float, np.ndarray], np.ndarray]] = None
    grid: Optional[Grid1D] = field(default=None, repr=False)

    @property
    def max_speed(self) -> float:
        return math.sqrt(max(float(self.a.max()), 0.0))

    @property
    def flux_correction(self) -> np.ndarray:
        """Coefficient of w in the v-source once a u_xx is written as (a u_x)_x - a' u_x."""
        return self.b1 + self.a_prime

    @property
    def has_source(self) -> bool:
        return bool(
            np.any(self.flux_correction) or np.any(self.b2) or np.any(self.b3)
        ) or self.forcing is not None

    @cached_property
    def _padded(self):
        a = np.pad(self.a, 1, mode="edge")
        c = np.sqrt(a)
        speed = np.maximum(c[1:], c[:-1])
        low = np.minimum(a[1:], a[:-1])
        with np.errstate(divide="ignore", invalid="ignore"):
            left = np.where(a[:-1] > 0, low / a[:-1], 1.0)
            right = np.where(a[1:] > 0, low / a[1:], 1.0)
        return a, speed, left, right

    @property
    def A(self) -> np.ndarray:
        out = np.zeros((self.a.size, 3, 3))
        out[:, 1, 2] = 1.0
        out[:, 2, 1] = self.a
        return out

    @property
    def B(self) -> np.ndarray:
        out = np.zeros((self.a.size, 3, 3))
        out[:, 0, 2] = 1.0
        out[:, 2, 0] = -self.b3
        out[:, 2, 1] = -self.b1
        out[:, 2, 2] = -self.b2
        return out

    @property
    def Q(self) -> np.ndarray:
        """Symmetriser diag(1, a, 1)."""
        out = np.zeros((self.a.size, 3, 3))
        out[:, 0, 0] = 1.0
        out[:, 1, 1] = self.a
        out[:, 2, 2] = 1.0
        return out


def _lower(term, nx: int) -> np.ndarray:
    if term is None:
        return np.zeros(nx)
    if isinstance(term, RegularizedCoefficient):
        return np.asarray(term.samples, dtype=float)
    arr = np.asarray(term, dtype=float)
    if arr.ndim == 0:
        return np.full(nx, float(arr))
    if arr.shape != (nx,):
        raise ValueError("lower-order samples must match the grid")
    return arr


def build_system(a: RegularizedCoefficient, lot: Optional[LowerOrderTerms] = None) -> SystemCoefficients:
    lot = lot or LowerOrderTerms()
    samples = np.asarray(a.samples, dtype=float)
    if samples.min() < -1e-14:
        raise InvalidCoefficientError(
            f"principal coefficient is negative (min {samples.min():.3e})"
        )
    nx = samples.size
    a_prime = np.asarray(a.d1_samples, dtype=float)
    if lot.conservative:
        if lot.b1 is not None:
            raise ValueError("conservative form fixes b1 = -a'; pass conservative=False")
        b1 = -a_prime
    else:
        b1 = _lower(lot.b1, nx)
    return SystemCoefficients(
        a=np.clip(samples, 0.0, None),
        a_prime=a_prime,
        b1=b1,
        b2=_lower(lot.b2, nx),
        b3=_lower(lot.b3, nx),
        forcing=lot.f,
        grid=a.grid,
    )


def cfl_dt(grid: Grid1D, a, cfl_target: float = 0.9) -> float:
    if not 0.0 < cfl_target <= 1.0:
        raise ValueError(f"cfl_target must lie in (0, 1], got {cfl_target}")
    speed = a.max_speed
    return cfl_target * grid.dx / max(1.0, speed)


def _check_stability(grid: Grid1D, dt: float, sys: SystemCoefficients) -> None:
    courant = dt * sys.max_speed / grid.dx
    if courant > 1.0 + _CFL_SLACK:
        raise StabilityError(f"Courant number {courant:.6g} exceeds 1 (dt={dt:g})")


def lax_friedrichs_step(
    state: WaveState,
    grid: Grid1D,
    dt: float,
    sys: SystemCoefficients,
    scheme: str = "local",
    *,
    _checked: bool = False,
) -> WaveState:
    if not _checked:
        _check_stability(grid, dt, sys)
    u, w, v = state.u, state.w, state.v
    lam = dt / grid.dx
    a_pad, speed, left, right = sys._padded
    # one ghost node on each side, constant extrapolation
    vp = np.pad(v, 1, mode="edge")
    wp = np.pad(w, 1, mode="edge")
    fp = a_pad * wp
    dv = np.diff(vp)
    dw = np.diff(wp)
    if scheme == "local":
        diss_v = 0.5 * speed * dv
        diss_w = 0.5 * speed * dw
        # interface i sits between padded nodes i and i+1; node j is padded j+1
        w_from_right = left[1:] * diss_w[1:]
        w_from_left = right[:-1] * diss_w[:-1]
    elif scheme == "classical":
        diss_v = 0.5 * (grid.dx / dt) * dv
        diss_w = 0.5 * (grid.dx / dt) * dw
        w_from_right = diss_w[1:]
        w_from_left = diss_w[:-1]
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    v_new = v + lam * (0.5 * (fp[2:] - fp[:-2]) + diss_v[1:] - diss_v[:-1])
    w_new = w + lam * (0.5 * (vp[2:] - vp[:-2]) + w_from_right - w_from_left)
    if sys.has_source:
        src = -sys.flux_correction * w - sys.b2 * v - sys.b3 * u
        if sys.forcing is not None:
            src = src + np.asarray(sys.forcing(state.t, grid.x), dtype=float)
        v_new = v_new + dt * src
    u_new = u + 0.5 * dt * (v + v_new)
    return WaveState(state.t + dt, u_new, w_new, v_new)


@dataclass
class SolveResult:
    state: WaveState
    dt: float
    steps: int
    snapshots: list[WaveState] = field(default_factory=list)
    energies: Optional[np.ndarray] = None


def _physical_energy(state: WaveState, a: np.ndarray, dx: float) -> float:
    return 0.5 * dx * float(np.sum(state.v**2 + a * state.w**2))


def evolve(
    ic: InitialData,
    a: RegularizedCoefficient,
    lot: Optional[LowerOrderTerms],
    grid: Grid1D,
    cfg: SolveConfig,
) -> SolveResult:
    sys = build_system(a, lot)
    dt = cfg.dt if cfg.dt is not None else cfl_dt(grid, a, cfg.cfl_target)
    _check_stability(grid, dt, sys)
    state = WaveState.initial(ic, grid)
    snapshots = [state] if cfg.record_every else []
    energies = [_physical_energy(state, sys.a, grid.dx)] if cfg.track_energy else None
    steps = 0
    # integer step count keeps the final time free of accumulated round-off
    n_full = int(math.floor(cfg.t_final / dt * (1 + 1e-14)))
    remainder = cfg.t_final - n_full * dt
    plan = [dt] * n_full
    if remainder > 1e-14 * max(cfg.t_final, 1.0):
        plan.append(remainder)
    for k, h in enumerate(plan, start=1):
        state = lax_friedrichs_step(state, grid, h, sys, cfg.scheme, _checked=True)
        if not (np.isfinite(state.v).all() and np.isfinite(state.w).all()):
            raise DivergenceError(k, state.t)
        steps = k
        if energies is not None:
            energies.append(_physical_energy(state, sys.a, grid.dx))
        if cfg.record_every and k % cfg.record_every == 0:
            snapshots.append(state)
    if plan:
        state = WaveState(cfg.t_final, state.u, state.w, state.v)
        if cfg.record_every and steps % cfg.record_every == 0:
            snapshots[-1] = state
    edge = max(
        float(np.max(np.abs(f[[0, 1, -2, -1]]))) for f in (state.u, state.w, state.v)
    )
    if edge > 1e-12:
        warnings.warn(
            f"solution reaches the boundary (|value| {edge:.2e} on the outer nodes)",
            BoundaryContaminationWarning,
            stacklevel=2,
        )
    if cfg.record_every and (not snapshots or snapshots[-1].t != state.t):
        snapshots.append(state)
    log.debug("evolved %s to t=%g in %d steps (dt=%g)", a.label, state.t, steps, dt)
    return SolveResult(
        state, dt, steps, snapshots, None if energies is None else np.asarray(energies)
    )


def write_snapshot(path, grid: Grid1D, values: np.ndarray, t: float) -> None:
    """Plain-text dump: '# t=<time>' header then one 'x value' line per node."""
    lines = [f"# t={t:.17g}"]
    lines += [f"{x:.17g} {y:.17g}" for x, y in zip(grid.x, values)]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
