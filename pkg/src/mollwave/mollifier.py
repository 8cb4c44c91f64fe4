"""Compactly supported bump mollifier and its scalings.

    phi(x) = exp(1 / (x**2 - 1)) / 0.443994   for |x| < 1, else 0
    phi_eps(x) = phi(x / eps) / eps

All evaluators accept scalars or numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

BUMP_INTEGRAL = 0.443994
# below this exponent exp() is treated as exactly zero
_EXP_CUTOFF = -700.0


@dataclass(frozen=True)
class MollifierSpec:
    normalization: float = 1.0 / BUMP_INTEGRAL
    support_radius: float = 1.0


DEFAULT = MollifierSpec()


def _check_eps(eps: float) -> None:
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps!r}")


def _unnormalized(x, order: int = 0):
    """exp(1/(x^2-1)) and its first two derivatives on (-1, 1), zero elsewhere."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = np.abs(x) < 1.0
    xi = x[inside]
    s = xi * xi - 1.0
    expo = 1.0 / s
    live = expo >= _EXP_CUTOFF
    xi, s, expo = xi[live], s[live], expo[live]
    psi = np.exp(expo)
    if order == 0:
        val = psi
    elif order == 1:
        val = psi * (-2.0 * xi / s**2)
    elif order == 2:
        val = psi * (4.0 * xi**2 / s**4 - 2.0 / s**2 + 8.0 * xi**2 / s**3)
    else:
        raise ValueError(f"order must be 0, 1 or 2, got {order!r}")
    idx = np.flatnonzero(inside)[live]
    out.flat[idx] = val
    return out


def _maybe_scalar(x_in, out):
    return float(out) if np.ndim(x_in) == 0 else out


def bump_value(x, spec: MollifierSpec = DEFAULT):
    """Unscaled bump phi(x); exactly zero for |x| >= support radius."""
    r = spec.support_radius
    out = spec.normalization * _unnormalized(np.asarray(x, dtype=float) / r) / r
    return _maybe_scalar(x, out)


def mollifier_value(eps: float, x, spec: MollifierSpec = DEFAULT):
    _check_eps(eps)
    out = bump_value(np.asarray(x, dtype=float) / eps, spec) / eps
    return _maybe_scalar(x, out)


def mollifier_derivative(eps: float, x, order: int, spec: MollifierSpec = DEFAULT):
    """d^order/dx^order of phi_eps, order in {1, 2}."""
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order!r}")
    _check_eps(eps)
    r = spec.support_radius
    scale = eps * r
    z = np.asarray(x, dtype=float) / scale
    out = spec.normalization * _unnormalized(z, order) / scale ** (1 + order)
    return _maybe_scalar(x, out)


def gauss_legendre(a: float, b: float, n_nodes: int = 2000, panels: int = 100):
    """Composite Gauss-Legendre nodes and weights on [a, b] with n_nodes in total."""
    per_panel = n_nodes // panels
    t, w = np.polynomial.legendre.leggauss(per_panel)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def mollifier_mass(eps: float, spec: MollifierSpec = DEFAULT) -> float:
    _check_eps(eps)
    half = eps * spec.support_radius
    nodes, weights = gauss_legendre(-half, half)
    return float(weights @ mollifier_value(eps, nodes, spec))


def derivative_l1_norm(order: int, spec: MollifierSpec = DEFAULT) -> float:
    """||d^order phi||_{L^1} of the unscaled bump."""
    r = spec.support_radius
    nodes, weights = gauss_legendre(-r, r, n_nodes=4000, panels=200)
    if order == 0:
        vals = bump_value(nodes, spec)
    else:
        vals = mollifier_derivative(1.0, nodes, order, spec)
    return float(weights @ np.abs(vals))


def self_check(tol: float = 1e-4) -> float:
    """Recompute the integral of exp(1/(x^2-1)) and compare with the stored constant."""
    nodes, weights = gauss_legendre(-1.0, 1.0)
    integral = float(weights @ _unnormalized(nodes))
    if abs(integral - BUMP_INTEGRAL) > tol:
        raise RuntimeError(
            f"bump integral {integral:.8f} disagrees with {BUMP_INTEGRAL} beyond {tol}"
        )
    return integral


BUMP_INTEGRAL_COMPUTED = self_check()
