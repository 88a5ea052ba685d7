import json
import math

import numpy as np
import pytest

from stablehit import DomainError, LawId, QuadratureError, StableIndex, integrate, ks_statistic
from stablehit import closed_forms as cf, verify


def test_integrate_exponential():
    v, err = integrate(lambda x: math.exp(-x), 0.0, math.inf, 1e-12)
    assert v == pytest.approx(1.0, abs=1e-12)
    assert err < 1e-10


def test_integrate_exit_quotient_density():
    a = StableIndex(1.5)
    v, _ = integrate(lambda t: cf.density_closed(LawId.EXIT_QUOTIENT, a, t), 0.0, math.inf, 1e-11,
                     tail_exponent=a.inv_alpha - 2.0, points=[1.0])
    assert v == pytest.approx(1.0, abs=1e-9)


def test_integrate_double_laplace_weight():
    v, _ = integrate(lambda lam: math.exp(-2.0 * lam) * cf.laplace_g_alpha(1.5, lam), 0.0, math.inf, 1e-10)
    assert v == pytest.approx(1.0 - 1.5 / (2.0 ** 1.5 - 1.0), abs=1e-9)


def test_integrate_reports_failure():
    with pytest.raises(QuadratureError):
        integrate(lambda x: 1.0 / x, 0.0, 1.0, 1e-12, limit=20)


def test_ks_exact_inverse_transform():
    n = 2000
    u = (np.arange(n) + 0.5) / n
    d, p = ks_statistic(-np.log1p(-u), lambda x: 1.0 - np.exp(-np.asarray(x)))
    assert d <= 1.0 / n + 1e-12
    assert p > 0.99


def test_ks_degenerate_sample():
    d, p = ks_statistic(np.full(1000, 0.0), lambda x: 1.0 - np.exp(-np.maximum(np.asarray(x), 0.0)))
    assert d >= 0.99
    assert p < 1e-100


def test_check_invariant():
    assert verify.Check("a", 1.0, 1.0 + 1e-9, 1e-8).passed
    assert not verify.Check("a", 1.0, 1.1, 1e-8).passed
    assert verify.Check("a", 100.0, 100.5, 1e-2, relative=True).passed
    assert not verify.Check("a", 0.0, math.nan, 1.0).passed


def test_registry_covers_every_formula_operation():
    assert verify.registry_coverage() == set()
    assert [c.step for c in verify.REGISTRY] == list(range(1, 10))


def test_suite_rejects_alpha_at_guard():
    with pytest.raises(DomainError):
        verify.consistency_suite(1.999)


def test_suite_subset_is_deterministic_and_serializable():
    cfg = verify.SuiteConfig(steps=(2, 4, 6))
    r1 = verify.consistency_suite(1.5, cfg)
    r2 = verify.consistency_suite(1.5, cfg)
    assert [c.measured for c in r1.checks] == [c.measured for c in r2.checks]
    assert r1.passed
    d = json.loads(r1.to_json())
    assert set(d) == {"alpha", "checks", "wall_time_s"}
    assert set(d["checks"][0]) == {"name", "target", "measured", "tolerance", "relative", "passed"}
    for c in r1.checks:
        bound = c.tolerance * abs(c.target) if c.relative else c.tolerance
        assert c.passed == (abs(c.measured - c.target) <= bound)


def test_quad_tol_env(monkeypatch):
    monkeypatch.setenv("STABLEHIT_QUAD_TOL", "1e-7")
    assert verify.SuiteConfig().quad_tol == 1e-7
