import math

import numpy as np
import pytest

from mollwave.coefficients import (
    CoefficientSpec,
    DomainCoverageError,
    Kind,
    _chi_convolution,
    chi_alpha_value,
    gamma_function,
    glaeser_report,
    heaviside_cdf,
    levi_constant,
    logarithmic_scale,
    regularize,
    sample,
)
from mollwave.grid import Grid1D
from mollwave.mollifier import derivative_l1_norm, mollifier_value

DESK = Grid1D.from_spacing(-4.0, 4.0, 0.002)


def resolved_grid(omega, left=2.0, right=4.0, per_omega=200):
    """Local grid with per_omega cells per kernel radius, used where sup|a''| matters."""
    n = int(round((left + right) * per_omega)) + 1
    return Grid1D(-left * omega, right * omega, n)


def test_gamma_examples():
    assert gamma_function(1.0) == 1.0
    assert gamma_function(2.0) == 1.0
    assert gamma_function(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)


@pytest.mark.parametrize("z", [0.0, -0.5, 2.5])
def test_gamma_domain(z):
    with pytest.raises(ValueError):
        gamma_function(z)


def test_gamma_recurrence():
    for z in np.linspace(0.05, 1.0, 20):
        assert gamma_function(z + 1) == pytest.approx(z * gamma_function(z), rel=1e-12)


def test_chi_alpha_value_examples():
    assert chi_alpha_value(0.0, 0.5) == 1.0
    assert chi_alpha_value(-0.5, 1.0) == pytest.approx(0.5641895835, abs=1e-10)
    assert chi_alpha_value(-0.5, -3.0) == 0.0
    with pytest.raises(ValueError):
        chi_alpha_value(-1.0, 1.0)
    with pytest.raises(ValueError):
        chi_alpha_value(0.1, 1.0)


def test_spec_dispatch():
    assert CoefficientSpec.chi_alpha(0.0).effective_kind is Kind.HEAVISIDE
    assert CoefficientSpec.chi_alpha(-1.0).effective_kind is Kind.DELTA
    assert CoefficientSpec.chi_alpha(-0.5).effective_kind is Kind.CHI_ALPHA
    with pytest.raises(ValueError):
        CoefficientSpec.chi_alpha(-1.5)


def test_heaviside_examples():
    a = regularize(CoefficientSpec.heaviside(), 0.1, 0.1, DESK)
    i0 = int(np.argmin(np.abs(DESK.x)))
    assert a.samples[i0] == 0.5
    i2 = int(np.argmin(np.abs(DESK.x - 0.2)))
    assert a.samples[i2] == 1.0
    assert np.all(a.samples[DESK.x <= -0.1] == 0.0)
    assert np.all(a.samples[DESK.x >= 0.1] == 1.0)
    assert np.all(np.diff(a.samples) >= 0)


def test_heaviside_jump_location():
    spec = CoefficientSpec.heaviside(jump_location=1.0)
    a = regularize(spec, 0.05, 0.05, DESK)
    i = int(np.argmin(np.abs(DESK.x - 1.0)))
    assert a.samples[i] == 0.5


def test_heaviside_cdf_matches_quadrature():
    # independent oracle: adaptive quadrature of the bump, normalized
    from scipy.integrate import quad

    from mollwave.mollifier import bump_value

    total, _ = quad(bump_value, -1, 1, epsabs=1e-14)
    for z in (-0.7, -0.2, 0.3, 0.9):
        part, _ = quad(bump_value, -1, z, epsabs=1e-14)
        assert heaviside_cdf(np.array([z]))[0] == pytest.approx(part / total, abs=1e-10)


def test_delta_equals_mollifier_exactly():
    a = regularize(CoefficientSpec.delta(), 0.1, 0.1, DESK)
    assert np.array_equal(a.samples, mollifier_value(0.1, DESK.x))
    i0 = int(np.argmin(np.abs(DESK.x)))
    assert a.samples[i0] == pytest.approx(8.2857, abs=1e-4)


def test_chi_alpha_endpoints_dispatch():
    h = regularize(CoefficientSpec.heaviside(), 0.05, 0.05, DESK)
    c0 = regularize(CoefficientSpec.chi_alpha(0.0), 0.05, 0.05, DESK)
    assert np.array_equal(h.samples, c0.samples)
    d = regularize(CoefficientSpec.delta(), 0.05, 0.05, DESK)
    cm1 = regularize(CoefficientSpec.chi_alpha(-1.0), 0.05, 0.05, DESK)
    assert np.array_equal(d.samples, cm1.samples)


@pytest.mark.parametrize("omega", [0.1, 0.01])
def test_chi_quadrature_at_zero_matches_heaviside(omega):
    # the substituted quadrature path, bypassing dispatch
    x = DESK.x
    q = _chi_convolution(0.0, omega, x, 0)
    assert np.max(np.abs(q - heaviside_cdf(x / omega))) <= 1e-8


def test_chi_alpha_continuity_towards_heaviside():
    h = regularize(CoefficientSpec.heaviside(), 0.1, 0.1, DESK)
    c = regularize(CoefficientSpec.chi_alpha(-1e-3), 0.1, 0.1, DESK)
    assert np.max(np.abs(c.samples - h.samples)) <= 1e-2


def test_chi_alpha_far_field_is_unmollified():
    # right of the kernel support the convolution of x^alpha is close to x^alpha
    c = regularize(CoefficientSpec.chi_alpha(-0.5), 0.01, 0.01, DESK)
    far = DESK.x > 1.0
    exact = chi_alpha_value(-0.5, DESK.x[far])
    assert np.max(np.abs(c.samples[far] - exact) / exact) < 1e-4


def test_chi_alpha_against_direct_quadrature():
    # independent oracle: scipy quad with the algebraic weight handled by 'alg'
    from scipy.integrate import quad

    alpha, omega = -0.5, 0.1
    g = Grid1D(-0.2, 0.4, 61)
    c = regularize(CoefficientSpec.chi_alpha(alpha), omega, omega, g)
    for i in (15, 25, 30, 40, 55):
        x = g.x[i]
        hi = min(x, omega)
        if hi <= -omega:
            continue
        # int_{-omega}^{hi} (x - y)^alpha phi(y) dy, singular weight at y = x
        f = lambda y: mollifier_value(omega, y)  # noqa: E731
        if x < omega:
            val, _ = quad(f, -omega, hi, weight="alg", wvar=(0, alpha), epsabs=1e-13)
        else:
            val, _ = quad(lambda y: (x - y) ** alpha * f(y), -omega, omega, epsabs=1e-13)
        from mollwave.coefficients import KERNEL_MASS

        expected = val / math.gamma(alpha + 1) / KERNEL_MASS
        assert c.samples[i] == pytest.approx(expected, rel=1e-7, abs=1e-10)


def test_non_negative_samples():
    for spec in (
        CoefficientSpec.heaviside(),
        CoefficientSpec.delta(),
        CoefficientSpec.chi_alpha(-0.5),
        CoefficientSpec.chi_alpha(-0.9),
    ):
        a = regularize(spec, 0.01, 0.01, DESK)
        assert a.samples.min() >= -1e-14


def test_coverage_error():
    small = Grid1D(-0.05, 0.05, 101)
    with pytest.raises(DomainCoverageError):
        regularize(CoefficientSpec.heaviside(), 0.1, 0.1, small)


def test_smooth_convolution_of_quadratic():
    # x^2 * phi = x^2 + second moment of phi; derivatives are 2x and 2
    spec = CoefficientSpec.smooth(lambda x: x**2)
    g = Grid1D(-1.0, 1.0, 201)
    omega = 0.1
    a = regularize(spec, omega, omega, g)
    from mollwave.mollifier import gauss_legendre

    y, w = gauss_legendre(-omega, omega)
    from mollwave.coefficients import KERNEL_MASS

    m2 = float(w @ (y**2 * mollifier_value(omega, y))) / KERNEL_MASS
    assert np.allclose(a.samples, g.x**2 + m2, atol=1e-12)
    assert np.allclose(a.d1_samples, 2 * g.x, atol=1e-10)
    assert np.allclose(a.d2_samples, 2.0, atol=1e-8)


def test_logarithmic_scale():
    assert logarithmic_scale(0.1) == pytest.approx(1 / math.log(10 + math.e))
    assert logarithmic_scale(1e-6) > 1e-6
    assert logarithmic_scale(0.001) < logarithmic_scale(0.01)


def _quad_sample():
    g = Grid1D(-1.0, 1.0, 2001)
    a = sample(
        CoefficientSpec.smooth(lambda x: x**2, lambda x: 2 * x, lambda x: 2 + 0 * x), g
    )
    b1 = sample(CoefficientSpec.smooth(lambda x: x), g)
    return g, a, b1


def test_levi_examples():
    g, a, b1 = _quad_sample()
    zero = sample(CoefficientSpec.constant(0.0), g)
    assert levi_constant(zero, a) == 0.0
    assert levi_constant(b1, a, floor=1e-6) == pytest.approx(1.0, abs=1e-12)


def test_levi_grid_mismatch():
    g, a, _ = _quad_sample()
    other = sample(CoefficientSpec.constant(1.0), Grid1D(-1.0, 1.0, 11))
    with pytest.raises(ValueError):
        levi_constant(other, a)


def test_levi_heaviside_grows_as_omega_shrinks():
    values = []
    for omega in (0.1, 0.05, 0.02):
        g = resolved_grid(omega, 3.0, 3.0)
        a = regularize(CoefficientSpec.heaviside(), omega, omega, g)
        m2 = levi_constant(a.negated_derivative(), a)
        assert 0 < m2 < math.inf
        values.append(m2)
    assert values[0] < values[1] < values[2]
    # b1 = -a' is exact negation
    assert np.array_equal(a.negated_derivative().samples, -a.d1_samples)


def test_glaeser_examples():
    _, a, _ = _quad_sample()
    m1, ratio = glaeser_report(a)
    assert m1 == 2.0
    assert ratio == pytest.approx(1.0, abs=1e-10)
    one = sample(CoefficientSpec.constant(1.0), Grid1D(-1, 1, 11))
    assert glaeser_report(one) == (0.0, 0.0)


@pytest.mark.parametrize("omega", [0.1, 0.05, 0.01])
def test_heaviside_prop34_bound(omega):
    a = regularize(CoefficientSpec.heaviside(), omega, omega, DESK)
    bound = derivative_l1_norm(1) / omega  # ||H||_inf = 1
    assert np.max(np.abs(a.d1_samples)) <= bound * (1 + 1e-8)


@pytest.mark.parametrize("omega", [0.1, 0.05, 0.01])
def test_heaviside_second_derivative_bound(omega):
    # the M1 estimate omega^-2 ||H|| ||phi''||_1
    g = resolved_grid(omega, 2.0, 2.0)
    a = regularize(CoefficientSpec.heaviside(), omega, omega, g)
    m1, _ = glaeser_report(a)
    assert m1 <= derivative_l1_norm(2) / omega**2 * (1 + 1e-8)
    # a'' is phi_omega' itself, so M1 is the peak of |phi'| scaled by omega^-2
    y = np.linspace(-1, 1, 400001)
    from mollwave.mollifier import mollifier_derivative

    peak = np.max(np.abs(mollifier_derivative(1.0, y, 1)))
    assert m1 == pytest.approx(peak / omega**2, rel=1e-4)


@pytest.mark.parametrize("omega", [0.1, 0.01])
@pytest.mark.parametrize("alpha", [0.0, -0.5, -0.9])
def test_glaeser_pointwise_on_resolved_grid(alpha, omega):
    spec = CoefficientSpec.chi_alpha(alpha)
    a = regularize(spec, omega, omega, resolved_grid(omega))
    m1, ratio = glaeser_report(a)
    assert ratio <= 1 + 1e-8
    lhs = a.d1_samples**2
    rhs = 2 * m1 * a.samples
    assert np.all(lhs <= rhs * (1 + 1e-8) + 1e-10)


def test_delta_glaeser():
    omega = 0.05
    a = regularize(CoefficientSpec.delta(), omega, omega, resolved_grid(omega, 2, 2))
    _, ratio = glaeser_report(a)
    assert ratio <= 1 + 1e-8
