"""Experiment configuration and epsilon/alpha sweeps."""

from __future__ import annotations

import dataclasses
import logging
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .coefficients import SCALES, CoefficientSpec, DomainCoverageError, regularize
from .diagnostics import SweepReport, SweepRow, l2_error_vs_exact, l2_norm
from .exact import default_initial_data
from .grid import Grid1D
from .solver import SCHEMES, SolveConfig, StabilityError, DivergenceError, evolve

log = logging.getLogger(__name__)

EPS_LIST = (0.1, 0.05, 0.01, 0.005, 0.001, 0.0005)
ALPHA_LIST = (0.0, -0.1, -0.25, -0.5, -0.75, -0.9, -1.0)
PRESET_DX = {"desk": 0.002, "fine": 0.0005}
EXPERIMENTS = ("convergence", "blowup", "alpha_sweep", "solve", "check")
COEFFICIENTS = ("heaviside", "delta", "chi_alpha")

_DEFAULTS = {
    "convergence": dict(coefficient="heaviside", t_final=2.0, cfl_target=1.0),
    "blowup": dict(coefficient="delta", t_final=0.05, cfl_target=0.9),
    "alpha_sweep": dict(
        coefficient="chi_alpha", t_final=0.05, cfl_target=0.9, alpha_list=ALPHA_LIST
    ),
    "solve": dict(coefficient="heaviside", t_final=2.0, cfl_target=1.0, eps_list=(0.1,)),
    "check": dict(coefficient="heaviside", t_final=0.0, cfl_target=0.9, eps_list=(0.1, 0.01)),
}


class ConfigError(ValueError):
    """Malformed config text; carries the offending line number when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str = "convergence"
    coefficient: str = "heaviside"
    alpha: Optional[float] = None
    eps_list: tuple[float, ...] = EPS_LIST
    alpha_list: Optional[tuple[float, ...]] = None
    t_final: float = 2.0
    x_min: float = -4.0
    x_max: float = 4.0
    dx: float = PRESET_DX["desk"]
    cfl_target: float = 1.0
    scale: str = "identity"
    scheme: str = "local"
    output_csv: Optional[str] = None
    output_svg: Optional[str] = None
    resolution_preset: str = "desk"
    record_every: int = 0

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if self.coefficient not in COEFFICIENTS:
            raise ConfigError(f"unknown coefficient {self.coefficient!r}")
        eps = self.eps_list
        if not eps or any(not 0 < e <= 1 for e in eps):
            raise ConfigError("eps_list entries must lie in (0, 1]")
        if any(b >= a for a, b in zip(eps, eps[1:])):
            raise ConfigError("eps_list must be strictly decreasing")
        if self.alpha_list is not None and any(not -1 <= a <= 0 for a in self.alpha_list):
            raise ConfigError("alpha_list entries must lie in [-1, 0]")
        if self.alpha is not None and not -1 <= self.alpha <= 0:
            raise ConfigError("alpha must lie in [-1, 0]")
        if self.coefficient == "chi_alpha" and self.alpha is None and not self.alpha_list:
            raise ConfigError("chi_alpha needs alpha or alpha_list")
        if self.t_final < 0:
            raise ConfigError("t_final must be non-negative")
        if not self.x_max > self.x_min:
            raise ConfigError("x_max must exceed x_min")
        if not self.dx > 0:
            raise ConfigError("dx must be positive")
        if not 0 < self.cfl_target <= 1:
            raise ConfigError("cfl_target must lie in (0, 1]")
        if self.scale not in SCALES:
            raise ConfigError(f"scale must be one of {sorted(SCALES)}")
        if self.scheme not in SCHEMES:
            raise ConfigError(f"scheme must be one of {SCHEMES}")
        if self.resolution_preset not in PRESET_DX:
            raise ConfigError(f"resolution_preset must be one of {sorted(PRESET_DX)}")
        try:
            self.grid()
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def grid(self) -> Grid1D:
        return Grid1D.from_spacing(self.x_min, self.x_max, self.dx)

    def spec(self, alpha: Optional[float] = None) -> CoefficientSpec:
        if self.coefficient == "heaviside":
            return CoefficientSpec.heaviside()
        if self.coefficient == "delta":
            return CoefficientSpec.delta()
        return CoefficientSpec.chi_alpha(self.alpha if alpha is None else alpha)

    def omega(self, eps: float) -> float:
        return SCALES[self.scale](eps)


def _parse_value(key: str, raw: str, line: int):
    floats = {"alpha", "t_final", "x_min", "x_max", "dx", "cfl_target"}
    lists = {"eps_list", "alpha_list"}
    try:
        if key in floats:
            return float(raw)
        if key in lists:
            return tuple(float(tok) for tok in raw.replace(",", " ").split())
        if key == "record_every":
            return int(raw)
    except ValueError:
        raise ConfigError(f"cannot parse {key} = {raw!r}", line) from None
    return raw


_KEYS = {f.name for f in dataclasses.fields(ExperimentConfig)} | {"preset"}


def parse_config(
    text: str, experiment: Optional[str] = None, preset: Optional[str] = None
) -> ExperimentConfig:
    """Parse flat ``key = value`` lines; '#' starts a comment.

    Unset fields take the defaults of the chosen experiment and resolution
    preset. ``experiment`` and ``preset`` arguments act as command-line
    overrides of the corresponding keys in the text.
    """
    values: dict = {}
    for no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw_line.strip()!r}", no)
        key, raw = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _KEYS:
            raise ConfigError(f"unknown key {key!r}", no)
        if key == "preset":
            key = "resolution_preset"
        if not raw:
            raise ConfigError(f"missing value for {key!r}", no)
        values[key] = _parse_value(key, raw, no)
    if experiment is not None:
        values["experiment"] = experiment.replace("-", "_")
    if preset is not None:
        values["resolution_preset"] = preset
    exp = values.get("experiment", "convergence")
    if exp not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {exp!r}")
    merged = dict(_DEFAULTS[exp])
    merged["experiment"] = exp
    res = values.get("resolution_preset", "desk")
    if res not in PRESET_DX:
        raise ConfigError(f"resolution_preset must be one of {sorted(PRESET_DX)}")
    merged["dx"] = PRESET_DX[res]
    merged.update(values)
    return ExperimentConfig(**merged)


def default_config(experiment: str, preset: str = "desk") -> ExperimentConfig:
    return parse_config("", experiment=experiment, preset=preset)


@dataclass(frozen=True)
class _RowTask:
    cfg: ExperimentConfig
    eps: float
    alpha: Optional[float]
    kind: str


def _run_row(task: _RowTask) -> tuple[SweepRow, float]:
    """Run one regularized problem; returns the row and its worst relative energy gain."""
    cfg = task.cfg
    grid = cfg.grid()
    data = default_initial_data()
    try:
        a = regularize(cfg.spec(task.alpha), task.eps, cfg.omega(task.eps), grid)
        solve_cfg = SolveConfig(
            cfg.t_final, cfl_target=cfg.cfl_target, track_energy=True, scheme=cfg.scheme
        )
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            result = evolve(data, a, None, grid, solve_cfg)
    except (DomainCoverageError, StabilityError, DivergenceError) as exc:
        log.warning("row eps=%g alpha=%s failed: %s", task.eps, task.alpha, exc)
        return SweepRow(task.eps, math.nan, task.kind, task.alpha, None, True, str(exc)), math.nan
    if task.kind == "error":
        value = l2_error_vs_exact(result.state, data, grid)
    else:
        value = l2_norm(result.state.u, grid)
    e = result.energies
    gain = float(np.max(np.diff(e)) / e[0]) if e.size > 1 and e[0] > 0 else 0.0
    return SweepRow(task.eps, value, task.kind, task.alpha, result.dt), gain


def _sweep(cfg: ExperimentConfig, kind: str, alpha: Optional[float], jobs: int):
    tasks = [_RowTask(cfg, e, alpha, kind) for e in cfg.eps_list]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_row, tasks))
    else:
        results = [_run_row(t) for t in tasks]
    rows = [r for r, _ in results]
    gains = {r.eps: g for r, g in results}
    return rows, gains


def _label(cfg: ExperimentConfig, alpha: Optional[float]) -> str:
    return cfg.spec(alpha).label


def run_convergence(cfg: ExperimentConfig, jobs: int = 1) -> SweepReport:
    """L2 distance between u_eps(t_final) and the piecewise exact solution."""
    if cfg.coefficient != "heaviside":
        raise ConfigError("the convergence experiment needs the heaviside coefficient")
    rows, gains = _sweep(cfg, "error", None, jobs)
    report = SweepReport(rows, cfg.t_final, cfg.dx, cfg.cfl_target, _label(cfg, None))
    report.energy_gains = gains
    return report


def run_blowup(cfg: ExperimentConfig, jobs: int = 1) -> SweepReport:
    """L2 norm of u_eps(t_final) for the regularized delta coefficient."""
    if cfg.coefficient != "delta":
        raise ConfigError("the blow-up experiment needs the delta coefficient")
    rows, gains = _sweep(cfg, "norm", None, jobs)
    report = SweepReport(rows, cfg.t_final, cfg.dx, cfg.cfl_target, _label(cfg, None))
    report.notes.append("exponent fitted at a single report time, no time derivatives")
    report.energy_gains = gains
    return report


def run_alpha_sweep(cfg: ExperimentConfig, jobs: int = 1) -> list[SweepReport]:
    """One norm sweep per alpha; alpha = -1 is computed as the delta coefficient."""
    if cfg.coefficient != "chi_alpha" or not cfg.alpha_list:
        raise ConfigError("the alpha sweep needs coefficient chi_alpha and an alpha_list")
    reports = []
    for alpha in cfg.alpha_list:
        rows, gains = _sweep(cfg, "norm", alpha, jobs)
        report = SweepReport(rows, cfg.t_final, cfg.dx, cfg.cfl_target, _label(cfg, alpha))
        if alpha == -1.0:
            report.notes.append("alpha=-1 dispatched to the delta coefficient")
        elif alpha == 0.0:
            report.notes.append("alpha=0 dispatched to the heaviside coefficient")
        report.energy_gains = gains
        reports.append(report)
    return reports


def exponent_summary(reports: list[SweepReport]) -> list[tuple[float, Optional[float]]]:
    return [(r.rows[0].alpha, r.fitted_exponent) for r in reports]
