import math

import numpy as np
import pytest
from scipy import integrate

from levyasym import IsotropicExponent, ProcessModel, catalog, green_asym_ratio, green_ball, green_density, laplace_green_ball
from levyasym.asym import constant
from levyasym.errors import MissingIndexError, TransienceError
from levyasym.potential import PotentialQuery

# relativistic alpha = 1, d = 3: G(x) = int_0^inf p(t, x) dt with the Bessel-K closed form of p
RELATIVISTIC_GREEN = {0.1: 5.9611333307972881, 1.0: 0.17301673232409132, 5.0: 0.031837429376823412}


def _power_model(alpha, d):
    psi = IsotropicExponent(lambda r: r**alpha, d, 0.0, alpha, alpha)
    return ProcessModel(f"power({alpha})", "custom", d, psi)


def test_newtonian_potential():
    model = catalog("brownian", dim=3)
    for x in (0.1, 1.0, 7.0):
        assert green_density(x, model) == pytest.approx(1 / (4 * math.pi * x), rel=1e-8)


def test_newtonian_ball_mass():
    model = catalog("brownian", dim=3)
    for r in (0.5, 2.0):
        assert green_ball(r, model) == pytest.approx(r * r / 2, rel=1e-8)
    assert constant("C_tilde", 3, 2.0).value == pytest.approx(0.5, rel=1e-15)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
def test_riesz_kernel(alpha):
    model = catalog("stable", dim=3, alpha=alpha)
    a_tilde = constant("A_tilde", 3, alpha).value
    for x in (0.3, 1.0, 4.0):
        assert green_density(x, model) == pytest.approx(a_tilde * x ** (alpha - 3), rel=1e-6)


@pytest.mark.parametrize("alpha", [0.5, 1.5])
def test_green_homogeneity(alpha):
    model = catalog("stable", dim=4, alpha=alpha)
    lam = 3.0
    assert green_density(lam * 0.7, model) == pytest.approx(lam ** (alpha - 4) * green_density(0.7, model), rel=1e-8)


def test_stable_ball_ratio_exact():
    model = catalog("cauchy", dim=3)
    c = constant("C_tilde", 3, 1.0).value
    for r in (0.1, 1.0, 10.0):
        assert green_ball(r, model) * r**-1 == pytest.approx(c, rel=1e-8)


@pytest.mark.parametrize("d,alpha", [(3, 0.5), (3, 1.5), (5, 1.0)])
def test_stable_green_ratios_identically_one(d, alpha):
    model = catalog("stable", dim=d, alpha=alpha)
    for r in (0.2, 5.0):
        g = green_asym_ratio(r, model)
        assert g.ball == pytest.approx(1.0, rel=1e-6)
        assert g.point == pytest.approx(1.0, rel=1e-6)


def test_green_ball_increasing():
    model = catalog("relativistic", dim=3, alpha=1.0)
    vals = [green_ball(r, model) for r in np.geomspace(1e-2, 1e2, 15)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("x", sorted(RELATIVISTIC_GREEN))
def test_relativistic_green_time_integral(x):
    model = catalog("relativistic", dim=3, alpha=1.0)
    assert green_density(x, model) == pytest.approx(RELATIVISTIC_GREEN[x], rel=1e-9)


def test_green_ball_matches_radial_integral_of_density():
    model = catalog("relativistic", dim=3, alpha=1.0)
    r = 1.0
    f = lambda s: green_density(s, model) * 4 * math.pi * s * s
    val = integrate.quad(f, 1e-6, r, limit=100, epsrel=1e-10)[0]
    assert val == pytest.approx(green_ball(r, model), rel=1e-6)


def test_green_density_monotone():
    model = catalog("tempered", dim=3, alpha=0.5)
    vals = [green_density(x, model) for x in np.geomspace(1e-2, 1e3, 20)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
def test_laplace_green_ball_small_lambda(alpha):
    model = catalog("stable", dim=3, alpha=alpha)
    target = 2 ** -alpha * math.gamma((3 - alpha) / 2) / math.gamma(1.5)
    # psi(sqrt(lam)) multiplies: lam L f(lam) grows like 1 / psi(sqrt(lam))
    for lam in (1e-8, 1e-2, 10.0):
        product = lam * laplace_green_ball(lam, model) * float(model.psi(math.sqrt(lam)))
        assert product == pytest.approx(target, rel=1e-8)
    quotient = [lam * laplace_green_ball(lam, model) / float(model.psi(math.sqrt(lam))) for lam in (1e-8, 1e-2)]
    assert quotient[0] > 100 * quotient[1]


def test_laplace_green_ball_quadratic_five_dimensions():
    model = _power_model(2.0, 5)
    lam = 0.7
    # int e^{-r^2/4} r^{d-3} dr = 2^{d-3} Gamma((d-2)/2) for psi = r^2
    exact = 2.0 ** (1 - 5) / math.gamma(2.5) / lam**2 * 2.0 ** 2 * math.gamma(1.5)
    assert laplace_green_ball(lam, model) == pytest.approx(exact, rel=1e-8)


def test_laplace_green_ball_against_numeric_transform():
    model = _power_model(1.0, 3)
    lam = 0.1
    f = lambda s: math.exp(-lam * s) * green_ball(math.sqrt(s), model)
    numeric = integrate.quad(f, 0, np.inf, limit=200, epsrel=1e-10)[0]
    assert numeric == pytest.approx(laplace_green_ball(lam, model), rel=1e-5)


def test_relativistic_pointwise_ratio_small_r():
    model = catalog("relativistic", dim=3, alpha=1.0)
    g = green_asym_ratio(1e-3, model)
    assert abs(g.point - 1) < 0.03


def test_tempered_ball_ratio_large_r():
    model = catalog("tempered", dim=3, alpha=0.5)
    g = green_asym_ratio(1e3, model)  # index 2 at zero
    assert abs(g.ball - 1) < 0.03


def test_gamma_variance_point_ratio_is_nan():
    g = green_asym_ratio(1e-3, catalog("gamma_variance", dim=3))
    assert math.isnan(g.point) and g.ball > 0


def test_transience_guards():
    with pytest.raises(TransienceError):
        green_density(1.0, catalog("cauchy", dim=2))
    with pytest.raises(TransienceError):
        PotentialQuery(1.0, catalog("stable", dim=1, alpha=0.5))
    with pytest.raises(TransienceError):
        # 1/psi = r^{-3.5} is not locally integrable against r^2
        green_ball(1.0, ProcessModel("steep", "custom", 3, IsotropicExponent(lambda r: r**3.5, 3)))
    bare = ProcessModel("bare", "custom", 3, IsotropicExponent(lambda r: r, 3))
    with pytest.raises(MissingIndexError):
        green_asym_ratio(2.0, bare)


def test_degenerate_tilde_constant():
    for d in (3, 4, 6):
        assert constant("C_tilde", d, 0.0).value == 1.0
