"""Acceptance gate: every criterion at its stated tolerance.

Each check records one PASS/FAIL line, printed in the terminal summary.
Sweeps are shared between criteria through module-scoped fixtures, so the
energy criterion reads the traces of the very runs used for criteria 1-3.
"""

import math

import numpy as np
import pytest

from mollwave.coefficients import CoefficientSpec, glaeser_report, regularize, sample
from mollwave.diagnostics import l2_norm
from mollwave.exact import (
    InitialData,
    check_compatibility,
    default_g0,
    default_g0_prime,
    default_g1,
    default_initial_data,
    exact_u,
    exact_ut,
)
from mollwave.grid import Grid1D
from mollwave.harness import (
    ALPHA_LIST,
    EPS_LIST,
    default_config,
    exponent_summary,
    run_alpha_sweep,
    run_blowup,
    run_convergence,
)
from mollwave.mollifier import (
    bump_value,
    derivative_l1_norm,
    mollifier_derivative,
    mollifier_mass,
    mollifier_value,
)
from mollwave.solver import SolveConfig, evolve

DATA = default_initial_data()


def strictly_decreasing(v):
    return bool(np.all(np.diff(v) < 0))


def fmt(values):
    return "[" + ", ".join(f"{v:.4g}" for v in values) + "]"


@pytest.fixture(scope="module")
def convergence():
    return run_convergence(default_config("convergence", "desk"), jobs=3)


@pytest.fixture(scope="module")
def blowup():
    return run_blowup(default_config("blowup", "desk"), jobs=3)


@pytest.fixture(scope="module")
def alpha_sweep():
    return run_alpha_sweep(default_config("alpha_sweep", "desk"), jobs=3)


# 1 -------------------------------------------------------------------------


def test_c1_convergence_desk(convergence, criterion):
    assert tuple(convergence.eps) == EPS_LIST and convergence.ok
    err = convergence.values
    mono = strictly_decreasing(err)
    ratio = err[-1] / err[0]
    criterion(
        "1 convergence (desk)",
        mono and ratio < 0.2,
        f"errors {fmt(err)}, strict={mono}, last/first={ratio:.2e}",
    )


def test_c1_convergence_fine_preset(criterion):
    # same experiment at the finer resolution the runtime clause allows
    rep = run_convergence(default_config("convergence", "fine"), jobs=3)
    err = rep.values
    mono = strictly_decreasing(err)
    ratio = err[-1] / err[0]
    criterion(
        "1 convergence (fine dx)",
        rep.ok and mono and ratio < 0.2,
        f"errors {fmt(err)}, strict={mono}, last/first={ratio:.2e}",
    )


# 2 -------------------------------------------------------------------------


def test_c2_delta_norms(blowup, criterion):
    assert tuple(blowup.eps) == EPS_LIST and blowup.ok
    norms = blowup.values
    inc = bool(np.all(np.diff(norms) > 0))
    n = blowup.fitted_exponent
    # report the increments; the norms agree to six digits, so they hide the trend
    criterion(
        "2 delta blow-up",
        inc and n is not None and n > 0,
        f"norm(0.1)={norms[0]:.10f}, increments {fmt(np.diff(norms))}, N={n:.3e}",
    )


# 3 -------------------------------------------------------------------------


def test_c3_alpha_exponents(alpha_sweep, blowup, criterion):
    assert [r.rows[0].alpha for r in alpha_sweep] == list(ALPHA_LIST)
    summary = exponent_summary(alpha_sweep)
    exps = np.array([n for _, n in summary])
    monotone = bool(np.all(np.diff(exps) >= 0))
    small_at_zero = exps[0] <= 0.1
    same_as_delta = np.array_equal(alpha_sweep[-1].values, blowup.values)
    criterion(
        "3 alpha sweep",
        monotone and small_at_zero and same_as_delta,
        f"N by alpha {fmt(exps)}, non-decreasing={monotone}, "
        f"N(0)<=0.1: {small_at_zero}, alpha=-1 == delta: {same_as_delta}",
    )


# 4 -------------------------------------------------------------------------


def test_c4_dalembert_first_order(criterion):
    errs = []
    for dx in (0.002, 0.001):
        g = Grid1D.from_spacing(-4, 4, dx)
        a = sample(CoefficientSpec.constant(1.0), g)
        res = evolve(DATA, a, None, g, SolveConfig(0.5, cfl_target=0.9))
        x, t = g.x, 0.5
        ref = 0.5 * (DATA.g0(x + t) + DATA.g0(x - t)) + 0.5 * (DATA.G1(x + t) - DATA.G1(x - t))
        errs.append(l2_norm(res.state.u - ref, g))
    ratio = errs[0] / errs[1]
    criterion(
        "4 smooth oracle",
        1.6 <= ratio <= 2.4,
        f"error dx=0.002 {errs[0]:.4e}, dx=0.001 {errs[1]:.4e}, ratio {ratio:.3f}",
    )


# 5 -------------------------------------------------------------------------


def test_c5_exact_solution(criterion):
    probe = np.linspace(-1, 1, 20001)
    scale = 1 + np.max(np.abs(default_g0_prime(probe))) + np.max(np.abs(default_g1(probe)))
    jumps = [
        abs(fn(t, x0 + 1e-8, DATA) - fn(t, x0 - 1e-8, DATA))
        for t in (0.5, 1.0, 2.0)
        for x0 in (0.0, t)
        for fn in (exact_u, exact_ut)
    ]
    continuity = max(jumps) <= 1e-7 * scale
    x = np.random.default_rng(5).uniform(-3, 3, 1000)
    ic = max(
        np.max(np.abs(exact_u(0.0, x, DATA) - default_g0(x))),
        np.max(np.abs(exact_ut(0.0, x, DATA) - default_g1(x))),
    )
    residual = check_compatibility(DATA, 2.0)
    s1 = abs(exact_u(2.0, 2.5, DATA) + 0.019775390625)
    s2 = abs(exact_u(2.0, -0.5, DATA) + 0.125244140625)
    criterion(
        "5 exact solution",
        continuity and ic <= 1e-12 and residual <= 1e-12 and s1 <= 1e-12 and s2 <= 1e-12,
        f"max jump {max(jumps):.1e}, ic {ic:.1e}, residual {residual:.1e}, "
        f"spot errors {s1:.1e} {s2:.1e}",
    )


# 6 -------------------------------------------------------------------------


def test_c6_energy_non_increasing(convergence, blowup, alpha_sweep, criterion):
    gains = list(convergence.energy_gains.values()) + list(blowup.energy_gains.values())
    for rep in alpha_sweep:
        gains += list(rep.energy_gains.values())
    worst = max(gains)
    criterion(
        "6 energy",
        len(gains) == 6 * (2 + len(ALPHA_LIST)) and worst <= 1e-12,
        f"{len(gains)} runs, worst per-step gain {worst:.2e} E(0)",
    )


# 7 -------------------------------------------------------------------------


def _resolved(omega):
    return Grid1D(-2 * omega, 4 * omega, 1201)


def test_c7_mollification(criterion):
    problems = []
    for eps in (1.0, 0.1, 0.01, 0.001):
        if abs(mollifier_mass(eps) - 1) > 1e-6:
            problems.append(f"mass eps={eps}")
        x = np.concatenate([np.linspace(eps, 3 * eps, 101), -np.linspace(eps, 3 * eps, 101)])
        if np.any(mollifier_value(eps, x)) or np.any(mollifier_derivative(eps, x, 2)):
            problems.append(f"support eps={eps}")
    phi1 = derivative_l1_norm(1)
    worst_ratio = 0.0
    for omega in (0.1, 0.01):
        desk = Grid1D.from_spacing(-4, 4, 0.002)
        h = regularize(CoefficientSpec.heaviside(), omega, omega, desk)
        outside = np.abs(desk.x) >= omega
        if not np.all((h.samples[outside] == 0) | (h.samples[outside] == 1)):
            problems.append(f"heaviside support omega={omega}")
        if np.max(np.abs(h.d1_samples)) > phi1 / omega * (1 + 1e-8):
            problems.append(f"derivative bound omega={omega}")
        specs = [CoefficientSpec.heaviside(), CoefficientSpec.delta()]
        specs += [CoefficientSpec.chi_alpha(a) for a in (-0.1, -0.5, -0.9)]
        for spec in specs:
            a = regularize(spec, omega, omega, _resolved(omega))
            m1, ratio = glaeser_report(a)
            worst_ratio = max(worst_ratio, ratio)
            if np.any(a.d1_samples**2 > 2 * m1 * a.samples * (1 + 1e-8) + 1e-300):
                problems.append(f"glaeser {spec.label} omega={omega}")
    criterion(
        "7 mollification",
        not problems,
        f"worst Glaeser ratio {worst_ratio:.4f}" + (f", failures {problems}" if problems else ""),
    )


# 8 -------------------------------------------------------------------------


def test_c8_negligible_perturbation(criterion):
    delta = 1e-8
    g = Grid1D.from_spacing(-4, 4, 0.002)
    a = regularize(CoefficientSpec.heaviside(), 0.01, 0.01, g)
    cfg = SolveConfig(2.0, cfl_target=1.0)
    perturbed = InitialData(
        lambda x: default_g0(x) + delta * bump_value(x),
        default_g1,
        lambda x: default_g0_prime(x) + delta * mollifier_derivative(1.0, x, 1),
    )
    base = evolve(DATA, a, None, g, cfg).state.u
    pert = evolve(perturbed, a, None, g, cfg).state.u
    diff = l2_norm(pert - base, g)
    bound = 10 * delta * l2_norm(bump_value(g.x), g)
    criterion(
        "8 negligible perturbation",
        diff <= bound,
        f"difference {diff:.3e}, bound {bound:.3e}",
    )
