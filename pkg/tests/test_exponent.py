import math

import numpy as np
import pytest
from scipy import integrate

from levyasym import (
    IsotropicExponent,
    LevyDensityProfile,
    catalog,
    exponent_from_levy_density,
    potter_check,
    psi_inverse,
    psi_star,
    rv_index_estimate,
)
from levyasym.asym import constant
from levyasym.errors import MissingIndexError, NonIntegrableError, NumericRangeError, ParamRangeError, UnreachableLevelError
from levyasym.exponent import RegularVariationEstimate, TabulatedExponent
from levyasym.radial import surface_measure

# psi of nu(rho) = rho^{-d-alpha} e^{-rho}, from the hypergeometric closed form
# sigma Gamma(-alpha) [1 - 2F1(-alpha/2, (1-alpha)/2; d/2; -r^2)] at 50 digits
TEMPERED_PSI = {
    (1, 0.5): [8.8622664850698921e-7, 0.0088347191380360639, 0.69965214775686669,
               9.5749277565695966, 151.52256285329248],
    (1, 1.5): [1.7724537401271827e-6, 0.017713492840812222, 1.6845673037929534,
               94.159283400726678, 105534.88174798242],
    (3, 0.5): [1.8561089842568667e-6, 0.018526421136204311, 1.5969660004925756,
               31.575764836000779, 620.51108234040485],
    (3, 1.5): [3.712218525346301e-6, 0.037108294728007133, 3.5949930126617759,
               224.01778446480152, 264989.88292460715],
}
TEMPERED_R = [1e-3, 0.1, 1.0, 10.0, 1e3]


def _power(alpha, dim=1, **kw):
    return IsotropicExponent(lambda r: r**alpha, dim, 0.0, alpha, alpha, **kw)


def test_exponent_vanishes_at_origin_and_is_immutable():
    e = _power(0.7)
    assert e(0.0) == 0.0
    assert np.all(e(np.array([0.0, 1.0, 2.0])) == [0.0, 1.0, 2.0**0.7])
    with pytest.raises(AttributeError):
        e.dim = 3


def test_exponent_validation():
    with pytest.raises(ParamRangeError):
        IsotropicExponent(lambda r: r, 0)
    with pytest.raises(ParamRangeError):
        IsotropicExponent(lambda r: r, 1, gaussian_coeff=-1.0)
    with pytest.raises(ParamRangeError):
        IsotropicExponent(lambda r: r, 1, rv_index_zero=2.5)
    with pytest.raises(ValueError):
        _power(1.0).declared_index("middle")


def test_psi_star_examples():
    assert psi_star(_power(1.0), 2.0) == pytest.approx(2.0, rel=1e-14)
    assert psi_star(_power(1.0), 0.0) == 0.0
    gv = catalog("gamma_variance").psi
    assert psi_star(gv, 3.0) == pytest.approx(math.log(10.0), rel=1e-14)
    with pytest.raises(ValueError):
        psi_star(gv, -1.0)


def test_psi_star_finds_interior_maximum():
    # the bump s^2 e^{-s^2} peaks at s = 1 with value 1/e
    e = IsotropicExponent(lambda r: r * r * np.exp(-r * r), 1, unimodal=False)
    assert psi_star(e, 10.0) == pytest.approx(math.exp(-1.0), rel=1e-12)
    assert psi_star(e, 10.0) > float(e(10.0))


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.7])
def test_psi_inverse_of_power(alpha):
    for u in (1e-6, 0.3, 1.0, 40.0):
        assert psi_inverse(_power(alpha), u) == pytest.approx(u ** (1 / alpha), rel=1e-12)


def test_psi_inverse_examples():
    rel = catalog("relativistic", alpha=1.0).psi
    assert psi_inverse(rel, 1.0) == pytest.approx(math.sqrt(3.0), rel=1e-12)
    gv = catalog("gamma_variance").psi
    assert psi_inverse(gv, math.log(2.0)) == pytest.approx(1.0, rel=1e-12)


def test_psi_inverse_unreachable_level():
    bounded = IsotropicExponent(np.tanh, 1)
    with pytest.raises(UnreachableLevelError):
        psi_inverse(bounded, 2.0)
    with pytest.raises(ValueError):
        psi_inverse(bounded, 0.0)


def test_rv_estimate_power_law():
    est = rv_index_estimate(_power(0.7), "zero", decades=3)
    assert est.index_hat == pytest.approx(0.7, abs=1e-12)
    assert est.residual < 1e-12
    assert est.limit_point == "zero" and est.window[0] < est.window[1]


def test_rv_estimate_relativistic_quadratic_at_zero():
    est = rv_index_estimate(catalog("relativistic", alpha=1.5).psi, "zero")
    assert est.index_hat == pytest.approx(2.0, abs=1e-3)


def test_rv_estimate_log_exponent_at_infinity():
    psi = catalog("log_exponent", alpha=0.5, beta=0.25, gamma=1.0).psi
    est = rv_index_estimate(psi, "infinity", decades=3, start=1e3)
    assert abs(est.index_hat - 0.5) < 0.05
    # the slowly varying factor leaves a visible trend
    assert est.residual > 1e-4


def test_rv_estimate_range_errors():
    flat = IsotropicExponent(lambda r: np.exp(-1.0 / r), 1)
    with pytest.raises(NumericRangeError):
        rv_index_estimate(flat, "zero")
    with pytest.raises(ValueError):
        rv_index_estimate(flat, "zero", decades=1)


def test_rv_estimate_record_validation():
    with pytest.raises(ValueError):
        RegularVariationEstimate(1.0, (2.0, 1.0), 0.0, "zero")
    with pytest.raises(ValueError):
        RegularVariationEstimate(1.0, (1.0, 2.0), -1.0, "zero")


def test_potter_examples():
    assert potter_check(_power(0.8), 1.01, 0.01, "zero") == 1.0
    assert potter_check(_power(0.8), 1.01, 0.01, "infinity") == 1.0
    assert potter_check(catalog("gamma_variance").psi, 2.0, 0.1, "zero") > 0
    assert potter_check(catalog("tempered", alpha=0.7).psi, 1.5, 0.25, "zero") > 0


def test_potter_missing_index():
    flat = IsotropicExponent(lambda r: np.exp(-1.0 / r), 1)
    with pytest.raises(MissingIndexError):
        potter_check(flat, 2.0, 0.1, "zero")


def test_potter_detects_violation():
    # l(r) = 2 + sin(log r) is bounded but not slowly varying, so small C fails everywhere
    wobbly = IsotropicExponent(lambda r: r * (2 + np.sin(np.log(r))), 1, 0.0, 1.0, 1.0)
    assert potter_check(wobbly, 1.05, 0.01, "zero") == 0.0


def test_cauchy_from_levy_density():
    a_const = constant("A", 1, 1.0).value
    prof = LevyDensityProfile.from_function(1, lambda r: a_const / r**2, 1.0)
    assert exponent_from_levy_density(prof, 1.0) == pytest.approx(1.0, rel=1e-8)


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
def test_stable_round_trip(d, alpha):
    a_const = constant("A", d, alpha).value
    prof = LevyDensityProfile.from_function(d, lambda r: a_const * r ** (-d - alpha), alpha)
    for r in (0.1, 0.37, 1.0, 3.3, 10.0):
        assert exponent_from_levy_density(prof, r) == pytest.approx(r**alpha, rel=1e-6)


@pytest.mark.parametrize("d,alpha", sorted(TEMPERED_PSI))
def test_tempered_against_hypergeometric_values(d, alpha):
    prof = LevyDensityProfile.from_function(d, lambda r: r ** (-d - alpha) * np.exp(-r), alpha)
    for r, ref in zip(TEMPERED_R, TEMPERED_PSI[(d, alpha)]):
        assert exponent_from_levy_density(prof, r) == pytest.approx(ref, rel=1e-8)


@pytest.mark.parametrize("d,alpha", [(1, 0.5), (3, 1.5)])
def test_tempered_table_matches_direct_values(d, alpha):
    psi = catalog("tempered", dim=d, alpha=alpha).psi
    got = psi(np.array(TEMPERED_R))
    assert np.allclose(got, TEMPERED_PSI[(d, alpha)], rtol=1e-6)


@pytest.mark.parametrize("d", [1, 3])
@pytest.mark.parametrize("alpha", [0.5, 1.5])
def test_truncated_small_r_constant(d, alpha):
    prof = LevyDensityProfile(d, ((0.0, 1.0, lambda r: r ** (-d - alpha)),), alpha)
    c1 = surface_measure(d) / (2 * d) / (2 - alpha)
    r = 1e-4
    assert exponent_from_levy_density(prof, r) / r**2 == pytest.approx(c1, rel=1e-6)


@pytest.mark.parametrize("d", [1, 3])
def test_lamperti_small_r_constant_self_consistent(d):
    alpha, delta = 1.0, 0.5
    model = catalog("lamperti", dim=d, alpha=alpha, delta=delta)
    # g(rho) = rho^d nu(rho) = rho e^{delta rho} (e^rho - 1)^{-alpha-1}
    g = lambda s: s * math.exp(delta * s) * math.expm1(s) ** (-alpha - 1)
    moment = integrate.quad(lambda s: s * g(s), 0, 1, limit=200)[0]
    moment += integrate.quad(lambda s: s * g(s), 1, 200, limit=200)[0]  # e^{-150} beyond
    c1 = surface_measure(d) / (2 * d) * moment
    r = 1e-4
    assert exponent_from_levy_density(model.levy_density, r) / r**2 == pytest.approx(c1, rel=1e-6)


def test_zero_levy_density():
    prof = LevyDensityProfile.from_function(2, lambda r: 0.0 * r)
    assert exponent_from_levy_density(prof, 1.5) == 0.0


def test_gaussian_part_is_added():
    a_const = constant("A", 1, 1.0).value
    prof = LevyDensityProfile.from_function(1, lambda r: a_const / r**2, 1.0)
    assert exponent_from_levy_density(prof, 2.0, gaussian_coeff=0.5) == pytest.approx(4.0, rel=1e-8)


def test_nonintegrable_densities():
    too_singular = LevyDensityProfile.from_function(1, lambda r: r**-3.5)
    with pytest.raises(NonIntegrableError):
        exponent_from_levy_density(too_singular, 1.0)
    heavy = LevyDensityProfile.from_function(1, lambda r: 1.0 / r)
    with pytest.raises(NonIntegrableError):
        heavy.integrability()


def test_levy_density_profiles_of_catalog_are_monotone_and_integrable():
    for fam, params in [("stable", dict(alpha=0.5)), ("tempered", dict(alpha=0.7)),
                        ("truncated", dict(alpha=1.0)), ("lamperti", dict(alpha=1.0, delta=0.5)),
                        ("layered", dict(alpha=0.5, alpha1=1.5)), ("log_corrected", dict(alpha=1.0, beta=1.0))]:
        for d in (1, 3):
            prof = catalog(fam, dim=d, **params).levy_density
            assert prof.is_monotone()
            assert math.isfinite(prof.integrability()) and prof.integrability() > 0


def test_tabulated_exponent_extrapolates_as_power_law():
    prof = catalog("tempered", dim=1, alpha=0.5).levy_density
    table = TabulatedExponent(prof)
    lo, hi = table(np.array([1e-9, 1e-8]))
    assert math.log(hi / lo) / math.log(10.0) == pytest.approx(2.0, abs=1e-3)
    lo, hi = table(np.array([1e10, 1e11]))
    assert math.log(hi / lo) / math.log(10.0) == pytest.approx(0.5, abs=1e-3)
