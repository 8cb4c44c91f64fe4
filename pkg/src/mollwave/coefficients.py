"""Singular coefficients and their mollifier regularizations."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import PchipInterpolator

from .mollifier import (
    BUMP_INTEGRAL,
    BUMP_INTEGRAL_COMPUTED,
    bump_value,
    gauss_legendre,
    mollifier_derivative,
    mollifier_value,
)
from .grid import Grid1D

Evaluator = Callable[[np.ndarray], np.ndarray]

# quadrature mass of the bump with the rounded constant (1 - 4e-7); function
# convolutions divide by it so that H * phi reaches exactly 1
KERNEL_MASS = BUMP_INTEGRAL_COMPUTED / BUMP_INTEGRAL


class DomainCoverageError(ValueError):
    """The grid does not contain the full support of a regularization."""


class Kind(str, enum.Enum):
    HEAVISIDE = "heaviside"
    DELTA = "delta"
    CHI_ALPHA = "chi_alpha"
    SMOOTH = "smooth"


@dataclass(frozen=True)
class CoefficientSpec:
    """A coefficient a(x): one of the singular families or a smooth function.

    ``ChiAlpha`` with alpha == 0 and alpha == -1 dispatches to Heaviside and
    Delta respectively, see :meth:`effective_kind`.
    """

    kind: Kind
    alpha: Optional[float] = None
    jump_location: float = 0.0
    func: Optional[Evaluator] = None
    d1: Optional[Evaluator] = None
    d2: Optional[Evaluator] = None
    support_bound: float = math.inf

    def __post_init__(self):
        if self.kind is Kind.CHI_ALPHA:
            if self.alpha is None or not -1.0 <= self.alpha <= 0.0:
                raise ValueError(f"ChiAlpha needs alpha in [-1, 0], got {self.alpha!r}")
        if self.kind is Kind.SMOOTH and self.func is None:
            raise ValueError("Smooth coefficient needs an evaluator")

    @classmethod
    def heaviside(cls, jump_location: float = 0.0) -> "CoefficientSpec":
        return cls(Kind.HEAVISIDE, jump_location=jump_location)

    @classmethod
    def delta(cls, jump_location: float = 0.0) -> "CoefficientSpec":
        return cls(Kind.DELTA, jump_location=jump_location)

    @classmethod
    def chi_alpha(cls, alpha: float, jump_location: float = 0.0) -> "CoefficientSpec":
        return cls(Kind.CHI_ALPHA, alpha=float(alpha), jump_location=jump_location)

    @classmethod
    def smooth(cls, func, d1=None, d2=None, support_bound=math.inf) -> "CoefficientSpec":
        return cls(Kind.SMOOTH, func=func, d1=d1, d2=d2, support_bound=support_bound)

    @classmethod
    def constant(cls, value: float) -> "CoefficientSpec":
        return cls.smooth(
            lambda x: np.full_like(np.asarray(x, dtype=float), value),
            lambda x: np.zeros_like(np.asarray(x, dtype=float)),
            lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        )

    @property
    def effective_kind(self) -> Kind:
        if self.kind is Kind.CHI_ALPHA:
            if self.alpha == 0.0:
                return Kind.HEAVISIDE
            if self.alpha == -1.0:
                return Kind.DELTA
        return self.kind

    @property
    def label(self) -> str:
        if self.kind is Kind.CHI_ALPHA:
            return f"chi_alpha({self.alpha:g})"
        return self.kind.value


@dataclass(frozen=True)
class LowerOrderTerms:
    """b1 u_x + b2 u_t + b3 u on the left-hand side and forcing f(t, x) on the right."""

    b1: Optional[np.ndarray] = None
    b2: Optional[np.ndarray] = None
    b3: Optional[np.ndarray] = None
    f: Optional[Callable[[float, np.ndarray], np.ndarray]] = None
    conservative: bool = True


@dataclass(frozen=True)
class RegularizedCoefficient:
    samples: np.ndarray
    d1_samples: np.ndarray
    d2_samples: np.ndarray
    eps: float
    omega_eps: float
    grid: Grid1D = field(repr=False)
    label: str = ""

    def __post_init__(self):
        for arr in (self.samples, self.d1_samples, self.d2_samples):
            if arr.shape != (self.grid.nx,):
                raise ValueError("samples must live on the grid")
            arr.setflags(write=False)

    @property
    def max_speed(self) -> float:
        return float(np.sqrt(max(self.samples.max(), 0.0)))

    def negated_derivative(self) -> "RegularizedCoefficient":
        """b1 = -a' as used by the conservative form."""
        return RegularizedCoefficient(
            -self.d1_samples,
            -self.d2_samples,
            np.gradient(-self.d2_samples, self.grid.dx),
            self.eps,
            self.omega_eps,
            self.grid,
            f"-d({self.label})",
        )


def identity_scale(eps: float) -> float:
    return eps


def logarithmic_scale(eps: float) -> float:
    """omega(eps) = 1 / ln(1/eps + e): decays slower than any power of eps."""
    return 1.0 / math.log(1.0 / eps + math.e)


SCALES = {"identity": identity_scale, "logarithmic": logarithmic_scale}


def gamma_function(z: float) -> float:
    if not 0.0 < z <= 2.0:
        raise ValueError(f"gamma_function is defined here for z in (0, 2], got {z!r}")
    return math.gamma(z)


def chi_alpha_value(alpha: float, x):
    """x_+^alpha / Gamma(alpha + 1) for alpha in (-1, 0]."""
    if not -1.0 < alpha <= 0.0:
        raise ValueError(f"alpha must lie in (-1, 0], got {alpha!r}")
    xa = np.asarray(x, dtype=float)
    pos = xa > 0
    out = np.zeros_like(xa)
    out[pos] = xa[pos] ** alpha / gamma_function(alpha + 1.0)
    return float(out) if np.ndim(x) == 0 else out


_CDF_NODES = 4001


@lru_cache(maxsize=1)
def _bump_cdf() -> PchipInterpolator:
    """Cumulative integral of the bump on [-1, 1], normalized to end at exactly 1.

    Built from 8-point Gauss-Legendre on each of the 4000 table cells.
    """
    knots = np.linspace(-1.0, 1.0, _CDF_NODES)
    t, w = np.polynomial.legendre.leggauss(8)
    half = 0.5 * np.diff(knots)
    mid = 0.5 * (knots[1:] + knots[:-1])
    pts = mid[:, None] + half[:, None] * t[None, :]
    pieces = (half[:, None] * w[None, :] * bump_value(pts)).sum(axis=1)
    cdf = np.concatenate([[0.0], np.cumsum(pieces)])
    # symmetrize so the midpoint is exactly one half
    cdf = 0.5 * (cdf + (cdf[-1] - cdf[::-1]))
    cdf /= cdf[-1]
    return PchipInterpolator(knots, cdf, extrapolate=False)


def heaviside_cdf(z) -> np.ndarray:
    """(H * phi)(z) for the unscaled bump: 0 for z <= -1, 1 for z >= 1."""
    z = np.asarray(z, dtype=float)
    out = np.where(z >= 1.0, 1.0, 0.0)
    inside = np.abs(z) < 1.0
    out[inside] = _bump_cdf()(z[inside])
    out[z == 0.0] = 0.5
    return out


_CHI_NODES = 200


def _chi_convolution(alpha: float, omega: float, x: np.ndarray, order: int) -> np.ndarray:
    """(chi_+^alpha * d^order phi_omega)(x) by substituted Gauss-Legendre quadrature.

    With s = (x - y)^(1+alpha) the algebraic singularity at y = x disappears:
        int (x-y)^alpha k(y) dy = 1/(1+alpha) int k(x - s^(1/(1+alpha))) ds.
    The y-range [-omega, min(x, omega)] is split at the kernel centre y = 0.
    """
    p = 1.0 + alpha
    t, w = np.polynomial.legendre.leggauss(_CHI_NODES)
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    live = x > -omega
    xl = x[live][:, None]
    top = np.minimum(xl, omega)
    total = np.zeros(xl.shape[0])
    for lo, hi in ((-omega, np.minimum(top, 0.0)), (np.minimum(top, 0.0), top)):
        lo = np.broadcast_to(lo, xl.shape)
        # s decreases as y increases
        s_lo, s_hi = (xl - hi) ** p, (xl - lo) ** p
        half = 0.5 * (s_hi - s_lo)
        s = 0.5 * (s_hi + s_lo) + half * t[None, :]
        y = xl - s ** (1.0 / p)
        k = mollifier_value(omega, y) if order == 0 else mollifier_derivative(omega, y, order)
        total += (half * (k @ w[:, None]))[:, 0]
    out[live] = total / p
    return out / (gamma_function(p) * KERNEL_MASS)


def _check_coverage(spec: CoefficientSpec, omega: float, grid: Grid1D) -> None:
    if spec.effective_kind is Kind.SMOOTH:
        return
    lo, hi = spec.jump_location - omega, spec.jump_location + omega
    if not (grid.x_min < lo and hi < grid.x_max):
        raise DomainCoverageError(
            f"grid [{grid.x_min}, {grid.x_max}] does not cover [{lo}, {hi}]"
        )


def regularize(
    spec: CoefficientSpec, eps: float, omega_eps: float, grid: Grid1D
) -> RegularizedCoefficient:
    """Sample a_eps = a * phi_{omega_eps} and its first two derivatives on the grid."""
    if not eps > 0 or not omega_eps > 0:
        raise ValueError("eps and omega_eps must be positive")
    _check_coverage(spec, omega_eps, grid)
    x = grid.x
    xs = x - spec.jump_location
    kind = spec.effective_kind
    if kind is Kind.HEAVISIDE:
        a = heaviside_cdf(xs / omega_eps)
        d1 = mollifier_value(omega_eps, xs) / KERNEL_MASS
        d2 = mollifier_derivative(omega_eps, xs, 1) / KERNEL_MASS
    elif kind is Kind.DELTA:
        a = mollifier_value(omega_eps, xs)
        d1 = mollifier_derivative(omega_eps, xs, 1)
        d2 = mollifier_derivative(omega_eps, xs, 2)
    elif kind is Kind.CHI_ALPHA:
        a, d1, d2 = (_chi_convolution(spec.alpha, omega_eps, xs, k) for k in range(3))
    else:
        a, d1, d2 = _smooth_convolution(spec, omega_eps, x)
    return RegularizedCoefficient(a, d1, d2, eps, omega_eps, grid, spec.label)


def _smooth_convolution(spec: CoefficientSpec, omega: float, x: np.ndarray):
    y, w = gauss_legendre(-omega, omega)
    kernels = [mollifier_value(omega, y)] + [
        mollifier_derivative(omega, y, k) for k in (1, 2)
    ]
    vals = spec.func(x[:, None] - y[None, :])
    return tuple((vals * (w * k)[None, :]).sum(axis=1) / KERNEL_MASS for k in kernels)


def sample(spec: CoefficientSpec, grid: Grid1D) -> RegularizedCoefficient:
    """Sample a smooth coefficient without mollification."""
    if spec.kind is not Kind.SMOOTH:
        raise ValueError("only smooth coefficients can be sampled without mollification")
    x = grid.x
    a = np.asarray(spec.func(x), dtype=float)
    d1 = np.asarray(spec.d1(x), dtype=float) if spec.d1 else np.gradient(a, grid.dx)
    d2 = np.asarray(spec.d2(x), dtype=float) if spec.d2 else np.gradient(d1, grid.dx)
    return RegularizedCoefficient(a, d1, d2, 0.0, 0.0, grid, spec.label)


def levi_constant(
    b1: RegularizedCoefficient, a: RegularizedCoefficient, floor: Optional[float] = None
) -> float:
    """Smallest M2 with b1^2 <= M2 * a on nodes where a exceeds ``floor``."""
    if b1.grid != a.grid:
        raise ValueError("b1 and a must be sampled on the same grid")
    if floor is None:
        floor = 1e-12 * float(np.max(a.samples))
    if not floor > 0:
        raise ValueError("floor must be positive")
    if not np.any(b1.samples):
        return 0.0
    mask = a.samples > floor
    if not np.any(mask):
        return 0.0
    return float(np.max(b1.samples[mask] ** 2 / a.samples[mask]))


def glaeser_report(a: RegularizedCoefficient) -> tuple[float, float]:
    """(M1, worst ratio of a'^2 / (2 M1 a)) with M1 = max |a''| over the grid."""
    m1 = float(np.max(np.abs(a.d2_samples)))
    if m1 == 0.0:
        return 0.0, 0.0
    mask = a.samples > 1e-12
    if not np.any(mask):
        return m1, 0.0
    ratio = a.d1_samples[mask] ** 2 / (2.0 * m1 * a.samples[mask])
    return m1, float(np.max(ratio))
