"""The compiled and pure-Python kernels must agree."""

import math

import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from stablehit import _backend

py = _backend.available["python"]
cy = _backend.available.get("cython")
needs_cy = pytest.mark.skipif(cy is None, reason="compiled kernels not built")


def test_backend_name():
    assert _backend.NAME in ("cython", "python")


@needs_cy
@settings(max_examples=300, deadline=None)
@given(st.floats(-150.0, 170.0, allow_nan=False))
def test_gamma_parity(x):
    for name in ("gamma", "rgamma", "sinpi"):
        a, b = getattr(py, name)(x), getattr(cy, name)(x)
        if math.isnan(a):
            assert math.isnan(b)
        else:
            assert b == pytest.approx(a, rel=1e-14, abs=1e-300)


@needs_cy
@settings(max_examples=200, deadline=None)
@given(st.floats(1.01, 1.99), st.floats(1e-3, 1e3), st.integers(0, 3))
def test_series_parity(alpha, x, p):
    args = (x, alpha, 1.0 / alpha - 1.0, -1.0, 0.0, alpha, 1.0 + 1.0 / alpha, -1.0,
            True, False, True, p, 1e-12, 300)
    a, b = py.series_sum(*args), cy.series_sum(*args)
    assert a[4] == b[4] and a[3] == b[3]
    if math.isfinite(a[0]):
        assert b[0] == pytest.approx(a[0], rel=1e-12, abs=1e-14 * max(1.0, abs(a[1])))


@settings(max_examples=100, deadline=None)
@given(st.floats(-60.0, 60.0).filter(lambda x: abs(x - round(x)) > 1e-6))
def test_reflection_identity(x):
    # Gamma(x) Gamma(1 - x) = pi / sin(pi x)
    g = py.gamma(x) * py.gamma(1.0 - x)
    assert g == pytest.approx(float(mp.pi / mp.sinpi(x)), rel=1e-11)
