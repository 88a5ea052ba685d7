import math

import mpmath as mp
import numpy as np
import pytest
from scipy import integrate as si

from stablehit import LawId, StableIndex, StripError, closed_forms as cf


def test_u_alpha_density_at_one():
    assert cf.density_closed(LawId.U_ALPHA, 1.5, 1.0) == pytest.approx(1.0 / (2.0 * math.pi), rel=1e-14)


def test_exit_quotient_density_at_one():
    want = math.sin(2.0 * math.pi / 3.0) / (2.0 * math.pi)
    assert cf.density_closed(LawId.EXIT_QUOTIENT, 1.5, 1.0) == pytest.approx(want, rel=1e-14)


def test_u_alpha_density_vanishes_at_origin(a):
    assert cf.density_closed(LawId.U_ALPHA, a, 1e-300) < 1e-150


def test_t_alpha_density_limit_at_origin(a):
    # the density tends to -sin(pi a)/(pi a), which is positive for 1 < a < 2
    want = -a.sin_pi_alpha / (math.pi * a.alpha)
    assert cf.density_closed(LawId.T_ALPHA, a, 1e-14) == pytest.approx(want, rel=1e-6)


@pytest.mark.parametrize("law", ["u_alpha", "t_alpha", "exit_quotient", "hat_tau1"])
def test_closed_densities_integrate_to_one(law, a):
    f = lambda t: cf.density_closed(law, a, t)
    v = si.quad(f, 0, 1, limit=200)[0] + si.quad(f, 1, np.inf, limit=200)[0]
    assert v == pytest.approx(1.0, abs=1e-7)


def _hat_tau_mp(alpha, x):
    # one-sided 1/alpha-stable density by its convergent series in x^(-1/alpha)
    mp.mp.dps = 40
    try:
        r = mp.mpf(1) / alpha
        s = mp.nsum(lambda n: (-1) ** (n + 1) * mp.sin(mp.pi * n * r) * mp.gamma(1 + n * r)
                    / mp.factorial(n) * mp.mpf(x) ** (-1 - n * r), [1, mp.inf])
        return float(s / mp.pi)
    finally:
        mp.mp.dps = 15


@pytest.mark.parametrize("x", [0.3, 1.0, 4.0, 50.0])
def test_hat_tau1_density_matches_high_precision(x):
    a = StableIndex(1.5)
    assert cf.density_closed(LawId.HAT_TAU1, a, x) == pytest.approx(_hat_tau_mp(1.5, x), rel=1e-10)


def test_hat_tau1_small_x_uses_integral_form():
    a = StableIndex(1.3)
    v, err = cf.hat_tau1_pdf(a, 0.15, return_error=True)
    g = lambda u: cf.density_closed(LawId.HAT_TAU1, a, u)
    assert v > 0.0 and err <= 1e-10 * v + 1e-300
    # the CDF at 0.15 from the density agrees with the closed CDF
    assert si.quad(g, 0, 0.15, limit=200)[0] == pytest.approx(cf.hat_tau1_cdf(a, 0.15), rel=1e-7, abs=1e-14)


def test_exit_quotient_cdf_is_integral_of_density():
    a = StableIndex(1.4)
    got = cf.exit_quotient_cdf(a, 2.0)
    want = si.quad(lambda t: cf.density_closed(LawId.EXIT_QUOTIENT, a, t), 0, 2.0)[0]
    assert got == pytest.approx(want, rel=1e-9)


@pytest.mark.parametrize("law", ["u_alpha", "t_alpha"])
def test_closed_derivatives_match_finite_differences(law, a):
    for t in (0.3, 1.0, 2.7):
        h = 1e-5 * t
        fd = (cf.density_closed(law, a, t + h) - cf.density_closed(law, a, t - h)) / (2 * h)
        assert cf.density_closed_deriv(law, a, t) == pytest.approx(fd, rel=1e-6, abs=1e-9)


# --- fractional moments -----------------------------------------------------

@pytest.mark.parametrize("law", list(LawId))
def test_mellin_moment_at_zero_is_one(law, a):
    assert cf.mellin_moment(law, a, 0.0) == pytest.approx(1.0, rel=1e-14)


def test_hat_tau1_moment():
    assert cf.mellin_moment(LawId.HAT_TAU1, 1.5, -1.0) == pytest.approx(
        float(mp.gamma(2.5) / mp.gamma(2)), rel=1e-14)


def test_tau1_moment_oracle():
    mp.mp.dps = 30
    want = mp.gamma(2.5) * mp.sin(-mp.pi / 6) / (mp.gamma(2) * mp.sin(-mp.pi / 3))
    mp.mp.dps = 15
    assert cf.mellin_moment(LawId.TAU1, 1.5, -1.0) == pytest.approx(float(want), rel=1e-14)


def test_t1_moment_oracle():
    mp.mp.dps = 30
    want = mp.gamma(0.5) * mp.sin(2 * mp.pi / 3) / (mp.gamma(0.25) * mp.sin(mp.pi / 6))
    mp.mp.dps = 15
    got = cf.mellin_moment(LawId.T1, 1.5, -0.5)
    assert got == pytest.approx(float(want), rel=1e-14)
    assert got == pytest.approx(0.8467486027, rel=1e-9)


@pytest.mark.parametrize("law", ["u_alpha", "t_alpha", "exit_quotient", "hat_tau1"])
def test_moments_match_quadrature(law, a):
    strip = cf.mellin_strip(law, a)
    lo = max(strip.lower, -2.0)
    for s in np.linspace(lo, strip.upper, 5)[1:-1]:
        g = lambda t: t ** s * cf.density_closed(law, a, t)
        q = si.quad(g, 0, 1, limit=400)[0] + si.quad(g, 1, np.inf, limit=400)[0]
        assert cf.mellin_moment(law, a, s) == pytest.approx(q, rel=1e-6)


def test_moment_outside_strip_raises():
    with pytest.raises(StripError):
        cf.mellin_moment(LawId.TAU1, 1.5, 0.5)
    with pytest.raises(StripError):
        cf.mellin_moment(LawId.HAT_TAU1, 1.5, 0.8)


def test_s1_moment_is_t1_moment_rescaled(a):
    for s in (0.5 * (1.0 - a.alpha), 0.3, 0.9 * a.alpha):
        want = cf.mellin_moment(LawId.T1, a, -s / a.alpha)
        assert cf.mellin_moment(LawId.S1, a, s) == pytest.approx(want, rel=1e-14)


def test_mellin_strip_s1():
    st = cf.mellin_strip(LawId.S1, StableIndex(1.5))
    assert (st.lower, st.upper) == pytest.approx((-0.5, 1.5))


# --- Laplace transform ------------------------------------------------------

def test_laplace_at_zero(a):
    assert cf.laplace_g_alpha(a, 0.0) == 1.0


@pytest.mark.parametrize("lam", [0.1, 0.5, 1.0, 1.7, 2.0])
def test_laplace_representations_agree(lam, a):
    ml = cf.laplace_g_alpha(a, lam, "mittag_leffler")
    it = cf.laplace_g_alpha(a, lam, "integral")
    assert ml == pytest.approx(it, abs=1e-8)


def test_laplace_value_in_unit_interval():
    v = cf.laplace_g_alpha(1.5, 1.0)
    assert 0.0 < v < 1.0
    assert v == pytest.approx(cf.laplace_g_alpha_integral(StableIndex(1.5), 1.0), rel=1e-10)


def test_laplace_decreasing_in_lambda(a):
    lams = np.linspace(0.0, 8.0, 30)
    vals = [cf.laplace_g_alpha(a, float(l)) for l in lams]
    assert all(x > y for x, y in zip(vals, vals[1:]))


def test_double_laplace_closed_value():
    want = 1.0 - 1.5 / (2.0 ** 1.5 - 1.0)
    assert cf.double_laplace_transform(StableIndex(1.5), 2.0) == pytest.approx(want, abs=1e-10)
    assert want == pytest.approx(0.17962276, abs=1e-8)


# --- product representation ---------------------------------------------------

def test_product_form_matches_high_precision_value():
    # mpmath Mellin inversion of the hitting-time moments at alpha = 1.5
    a = StableIndex(1.5)
    for x, want in ((0.1, 0.13979029369698069621), (0.4, 0.19349338440539113376),
                    (1.0, 0.13243379948434909715)):
        assert cf.density_by_product(LawId.TAU1, a, x)[0] == pytest.approx(want, rel=1e-11)


def test_product_form_t1():
    a = StableIndex(1.2)
    assert cf.density_by_product(LawId.T1, a, 0.01)[0] == pytest.approx(0.17269314943830552668, rel=1e-11)
