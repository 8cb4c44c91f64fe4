"""Piecewise distributional solution of u_tt = (H(x) u_x)_x with a unit jump at 0.

Left of the jump nothing propagates, so u = g0 + t g1. Right of it the data
travel as in the free wave equation, glued at x = 0 through continuity of
u, u_t and H u_x. The gluing only closes when

    g1(t) + g0'(t) - g1(0) = 0,

and evaluation is refused for data violating it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad

Evaluator = Callable[[np.ndarray], np.ndarray]


class IncompatibleDataError(ValueError):
    pass


def _poly_factor(x):
    x = np.asarray(x, dtype=float)
    return x, np.abs(x) < 1.0


def default_g0(x):
    x, inside = _poly_factor(x)
    out = np.where(inside, -(x**4) * (x - 1) ** 4 * (x + 1) ** 4, 0.0)
    return out if out.ndim else float(out)


def default_g0_prime(x):
    # d/dx of -x^4 (x^2-1)^4
    x, inside = _poly_factor(x)
    out = np.where(inside, -4 * x**3 * (x**2 - 1) ** 3 * (3 * x**2 - 1), 0.0)
    return out if out.ndim else float(out)


def default_g1(x):
    x, inside = _poly_factor(x)
    poly = (
        4 * x**3 * (x - 1) ** 4 * (x + 1) ** 4
        + 4 * x**4 * (x - 1) ** 3 * (x + 1) ** 4
        + 4 * x**4 * (x - 1) ** 4 * (x + 1) ** 3
    )
    out = np.where(inside, poly, 0.0)
    return out if out.ndim else float(out)


def _default_g1_antiderivative(x):
    # g1 = -g0' and g0(0) = 0
    out = -np.asarray(default_g0(x))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class InitialData:
    g0: Evaluator
    g1: Evaluator
    g0_prime: Evaluator
    g1_antiderivative: Optional[Evaluator] = None
    support_radius: float = 1.0

    def G1(self, x):
        """Antiderivative of g1 vanishing at 0."""
        if self.g1_antiderivative is not None:
            return np.asarray(self.g1_antiderivative(x), dtype=float)
        return _quadrature_antiderivative(self.g1, x, self.support_radius)


def _quadrature_antiderivative(g1: Evaluator, x, support_radius: float) -> np.ndarray:
    cached = _antiderivative_cache(g1, support_radius)
    x = np.asarray(x, dtype=float)
    return np.vectorize(cached, otypes=[float])(x)


@lru_cache(maxsize=32)
def _antiderivative_cache(g1: Evaluator, support_radius: float):
    scalar = lambda s: float(g1(np.asarray(s)))  # noqa: E731

    @lru_cache(maxsize=None)
    def G1(x: float) -> float:
        # g1 vanishes outside the support, clip so quad sees the whole bump
        r = support_radius
        xc = min(max(x, -r), r)
        if xc == 0.0:
            return 0.0
        val, _ = quad(scalar, 0.0, xc, epsabs=1e-10, epsrel=1e-10, limit=200)
        return val

    return G1


def default_initial_data() -> InitialData:
    return InitialData(
        default_g0, default_g1, default_g0_prime, _default_g1_antiderivative, 1.0
    )


def check_compatibility(data: InitialData, T: float, dt: float = 1e-3) -> float:
    """sup over t in [0, T] of |g1(t) + g0'(t) - g1(0)|."""
    if not T > 0:
        raise ValueError("T must be positive")
    n = max(int(np.ceil(10 * T / dt)), 2) + 1
    t = np.linspace(0.0, T, n)
    g10 = float(np.asarray(data.g1(np.asarray(0.0))))
    res = np.asarray(data.g1(t)) + np.asarray(data.g0_prime(t)) - g10
    return float(np.max(np.abs(res)))


def _require_compatible(data: InitialData, t: float, tol: float = 1e-8) -> None:
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    if t == 0:
        return
    residual = check_compatibility(data, t)
    if residual > tol:
        raise IncompatibleDataError(
            f"initial data violate the gluing condition (residual {residual:.3e})"
        )


def _regions(t: float, x: np.ndarray):
    left = x < 0
    middle = (x >= 0) & (x < t)
    right = x >= t
    return left, middle, right


def exact_u(t: float, x, data: InitialData):
    _require_compatible(data, t)
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    g0, G1 = data.g0, data.G1
    g00 = float(np.asarray(g0(np.asarray(0.0))))
    g10 = float(np.asarray(data.g1(np.asarray(0.0))))
    left, middle, right = _regions(t, xa)
    out = np.empty_like(xa)
    xl = xa[left]
    out[left] = g0(xl) + t * data.g1(xl)
    xm = xa[middle]
    out[middle] = (
        0.5 * (g0(xm + t) - g0(t - xm))
        + 0.5 * (G1(xm + t) - G1(t - xm))
        + g00
        + (t - xm) * g10
    )
    xr = xa[right]
    out[right] = 0.5 * (g0(xr + t) + g0(xr - t)) + 0.5 * (G1(xr + t) - G1(xr - t))
    return float(out[0]) if np.ndim(x) == 0 else out


def exact_ut(t: float, x, data: InitialData):
    _require_compatible(data, t)
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    dg0, g1 = data.g0_prime, data.g1
    g10 = float(np.asarray(g1(np.asarray(0.0))))
    left, middle, right = _regions(t, xa)
    out = np.empty_like(xa)
    out[left] = g1(xa[left])
    xm = xa[middle]
    out[middle] = (
        0.5 * (dg0(xm + t) - dg0(t - xm)) + 0.5 * (g1(xm + t) - g1(t - xm)) + g10
    )
    xr = xa[right]
    out[right] = 0.5 * (dg0(xr + t) - dg0(xr - t)) + 0.5 * (g1(xr + t) + g1(xr - t))
    return float(out[0]) if np.ndim(x) == 0 else out
