import math

import mpmath as mp
import numpy as np
import pytest

from stablehit import (
    LawId, Rep, SeriesConvergenceError, StableIndex, UnsupportedAsymptoticError,
    asymptotic_leading, series_cdf_tau1, series_density, series_density_deriv_tau1,
)
from stablehit import closed_forms as cf, series

# Mellin inversion of the closed-form hitting-time moments, computed with
# mpmath at 20 digits; independent of every series in the package.
TAU1_REF_15 = {0.1: 0.13979029369698069621, 0.4: 0.19349338440539113376, 1.0: 0.13243379948434909715}


@pytest.mark.parametrize("x", sorted(TAU1_REF_15))
def test_tau1_density_matches_mellin_inversion(x):
    v = series_density(LawId.TAU1, 1.5, x)
    assert v.value == pytest.approx(TAU1_REF_15[x], rel=1e-10)


def test_t1_density_matches_mellin_inversion():
    v = series_density(LawId.T1, 1.2, 0.01, "at_zero")
    assert v.value == pytest.approx(0.17269314943830552668, rel=1e-13)
    assert not v.asymptotic


def test_t1_density_at_origin(a):
    v = series_density(LawId.T1, a, 0.0, "at_zero")
    assert v.value == pytest.approx(1.0 / (a.alpha * math.gamma(-a.alpha)), rel=1e-14)


def test_tau1_leading_coefficient_at_zero():
    c, e = asymptotic_leading(LawId.TAU1, 1.5, "zero")
    assert e == pytest.approx(2.0 / 3.0)
    assert c == pytest.approx(float(1.5 / (mp.gamma(-1.5) * mp.gamma(mp.mpf(5) / 3))), rel=1e-13)
    assert c == pytest.approx(0.70309, abs=1e-5)


def test_s1_leading_at_infinity(a):
    c, e = asymptotic_leading(LawId.S1, a, "infinity")
    assert e == pytest.approx(-(a.alpha + 1.0))
    assert c == pytest.approx(1.0 / math.gamma(-a.alpha), rel=1e-13)


def test_tau1_derivative_asymptotics():
    a = StableIndex(1.5)
    al, ia = a.alpha, a.inv_alpha
    c0, e0 = asymptotic_leading(LawId.TAU1, a, "zero", p=1)
    assert e0 == pytest.approx(ia - 1.0)
    assert c0 == pytest.approx(al / (math.gamma(-al) * math.gamma(ia)), rel=1e-13)
    c1, e1 = asymptotic_leading(LawId.TAU1, a, "infinity", p=1)
    assert e1 == pytest.approx(ia - 3.0)
    assert c1 == pytest.approx(-al / (math.gamma(al) * math.gamma(ia - 2.0)), rel=1e-13)


def test_asymptotic_order_limit():
    with pytest.raises(UnsupportedAsymptoticError):
        asymptotic_leading(LawId.TAU1, 1.5, "zero", p=series.MAX_DERIVATIVE + 1)


@pytest.mark.parametrize("law", [LawId.TAU1, LawId.T1])
def test_dual_series_agree_within_error_estimates(law):
    a = StableIndex(1.5)
    for x in np.geomspace(0.5, 2.0, 7):
        z = series_density(law, a, x, "at_zero")
        i = series_density(law, a, x, "at_infinity")
        assert abs(z.value - i.value) <= z.abs_error_est + i.abs_error_est


def test_auto_matches_product_form(a):
    for law in (LawId.TAU1, LawId.T1):
        for x in np.geomspace(1e-3, 30.0, 9):
            v = series_density(law, a, x)
            ref = cf.density_by_product(law, a, x)[0]
            assert v.value == pytest.approx(ref, rel=1e-9, abs=1e-13)


def test_s1_direct_and_identity_agree(a):
    for x in np.geomspace(0.2, 20.0, 9):
        d = series_density(LawId.S1, a, x, method="direct")
        i = series_density(LawId.S1, a, x)
        assert abs(d.value - i.value) <= d.abs_error_est + i.abs_error_est + 1e-14


def test_change_of_variables(a):
    for x in np.geomspace(0.1, 10.0, 25):
        d = series_density(LawId.S1, a, x, method="direct")
        t = series_density(LawId.T1, a, x ** (-a.alpha))
        jac = a.alpha * x ** (-a.alpha - 1.0)
        assert abs(d.value - jac * t.value) <= d.abs_error_est + jac * t.abs_error_est


def test_at_zero_tau1_is_flagged_asymptotic():
    # the expansion at zero diverges, so far from 0 it stops at its smallest term
    v = series_density(LawId.TAU1, 1.8, 1.0, "at_zero")
    assert v.asymptotic and v.rep_used is Rep.AT_ZERO
    assert v.abs_error_est > 1e-6


def test_term_budget_exhaustion_raises_with_partial(monkeypatch):
    with pytest.raises(SeriesConvergenceError) as info:
        series_density(LawId.TAU1, 1.2, 0.05, "at_infinity", max_terms=20)
    assert info.value.partial.rep_used is Rep.AT_INFINITY


def test_env_term_budget(monkeypatch):
    monkeypatch.setenv("STABLEHIT_MAX_TERMS", "37")
    assert series.default_max_terms() == 37


# --- distribution function -------------------------------------------------------

def test_cdf_tails_sum_to_one():
    lo = series_cdf_tau1(1.5, 1.0, "lower").value
    hi = series_cdf_tau1(1.5, 1.0, "upper").value
    assert lo + hi == pytest.approx(1.0, abs=1e-8)


def test_cdf_limits(a):
    assert series_cdf_tau1(a, 1e-8, "lower").value < 1e-4
    # the upper tail is the integrated leading term, up to a correction of
    # relative order x^(1 - 2/alpha)
    c, e = asymptotic_leading(LawId.TAU1, a, "infinity")
    x = 1e8
    lead = c * x ** (e + 1.0) / -(e + 1.0)
    assert series_cdf_tau1(a, x, "upper").value / lead == pytest.approx(1.0, abs=2.0 * x ** (1.0 - 2.0 / a.alpha))


def test_cdf_matches_integrated_density():
    from scipy import integrate as si
    a = StableIndex(1.5)
    f = lambda t: series_density(LawId.TAU1, a, t).value
    q = si.quad(f, 0.0, 0.3, limit=200)[0] + si.quad(f, 0.3, 2.0, limit=200)[0]
    assert series_cdf_tau1(a, 2.0).value == pytest.approx(q, rel=1e-8)


# --- derivatives -----------------------------------------------------------------

@pytest.mark.parametrize("x", [0.3, 1.0, 3.0])
def test_first_derivative_matches_finite_difference(x):
    a = StableIndex(1.5)
    h = 1e-5
    fd = (series_density(LawId.TAU1, a, x + h).value - series_density(LawId.TAU1, a, x - h).value) / (2 * h)
    assert series_density_deriv_tau1(a, x, 1).value == pytest.approx(fd, rel=1e-5)


def test_second_derivative_matches_finite_difference_of_first():
    a = StableIndex(1.5)
    x, h = 2.0, 1e-4
    d = lambda t: series_density_deriv_tau1(a, t, 1).value
    fd = (d(x + h) - d(x - h)) / (2 * h)
    assert series_density_deriv_tau1(a, x, 2).value == pytest.approx(fd, rel=1e-6)


def test_t1_derivative_at_zero_is_exact_where_convergent():
    a = StableIndex(1.2)
    v = series_density(LawId.T1, a, 0.01, "at_zero", p=1)
    ref = cf.density_by_product(LawId.T1, a, 0.01, p=1)[0]
    assert v.value == pytest.approx(ref, rel=1e-10)
    assert v.abs_error_est < 1e-12


def test_crossover_between_expansions(a):
    for law in (LawId.TAU1, LawId.T1):
        xc = series.crossover(law, a)
        assert 1e-4 < xc < 1e4
