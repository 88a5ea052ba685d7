import math

import numpy as np
import pytest

from stablehit import LawId, StableIndex, analysis, closed_forms as cf


def test_mode_u_alpha_at_three_halves():
    assert analysis.mode_u_alpha(1.5) == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-12)


def test_mode_u_alpha_is_a_maximum(a):
    m = analysis.mode_u_alpha(a)
    f = lambda t: cf.density_closed(LawId.U_ALPHA, a, t)
    assert f(m) > f(m + 1e-3) and f(m) > f(m - 1e-3)


def test_mode_u_alpha_solves_quadratic(a):
    t = analysis.mode_u_alpha(a)
    al, c = a.alpha, a.cos_pi_alpha
    assert (1 - 2 * al) * t * t + 2 * t * (al - 1) * c + 1 == pytest.approx(0.0, abs=1e-13)


def test_mode_t_alpha_is_a_maximum(a):
    m = analysis.mode_t_alpha(a)
    f = lambda t: cf.density_closed(LawId.T_ALPHA, a, t)
    assert f(m) > f(m * (1 + 1e-4)) and f(m) > f(m * (1 - 1e-4))


def test_log_concavity_cases():
    assert analysis.log_concavity_exp_scale(1.4, (-20, 20))
    assert analysis.log_concavity_exp_scale(1.5)
    assert not analysis.log_concavity_exp_scale(1.8, (-20, 20))
    # a short enough interval is still concave for alpha > 3/2
    assert analysis.log_concavity_exp_scale(1.8, (-0.1, 0.1))


def test_log_concavity_numerically(a):
    # second difference of log f_U(e^t) versus the closed sign test
    t = np.linspace(-8, 8, 801)
    lf = np.log(cf.density_closed(LawId.U_ALPHA, a, np.exp(t)))
    second = np.diff(lf, 2)
    assert bool(np.all(second <= 1e-9)) == analysis.log_concavity_exp_scale(a, (-8, 8))


def test_logconcavity_boundary():
    assert analysis.logconcavity_boundary() == pytest.approx(1.5, abs=1e-9)


def test_t1_quartic():
    assert analysis.t1_logconcavity_holds(1.3)
    assert analysis.t1_logconcavity_holds(1.5)
    assert not analysis.t1_logconcavity_holds(1.8)


def test_count_sign_changes_dead_band():
    assert analysis.count_sign_changes([1, 2, 1e-20, -1e-20, 3, -1]) == 1
    assert analysis.count_sign_changes([1, -1, 1]) == 2
    assert analysis.count_sign_changes([]) == 0


def test_u_alpha_scan():
    r = analysis.unimodality_scan(LawId.U_ALPHA, 1.5)
    assert r.verdict is analysis.Verdict.UNIMODAL_ON_GRID
    assert r.mode_estimate == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-7)


@pytest.mark.parametrize("law", ["tau1", "t_alpha", "hat_tau1"])
def test_scans_unimodal(law):
    r = analysis.unimodality_scan(law, 1.3, (1e-3, 1e3, 4000))
    assert r.sign_changes_of_derivative == 1
    assert r.to_dict()["verdict"] == "UnimodalOnGrid"


def test_t1_scan_mode_matches_derivative_root():
    a = StableIndex(1.4)
    r = analysis.unimodality_scan(LawId.T1, a, (1e-3, 1e3, 4000))
    from stablehit import series
    d = series.series_density(LawId.T1, a, r.mode_estimate, p=1)
    assert abs(d.value) < 1e-6
