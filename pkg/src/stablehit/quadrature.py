"""Adaptive quadrature with algebraic-tail handling.

Thin layer over QUADPACK (``scipy.integrate.quad``). Half-infinite ranges
whose integrand decays like a power ``x**p`` (p < -1) are mapped onto (0, 1]
by ``x = c * t**(1/(p+1))``, which turns the slowly decaying tail into a
bounded integrand.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy import integrate as _si

from .errors import QuadratureError

DEFAULT_LIMIT = 400


def _quad(f, a, b, tol, rtol, points=None, limit=DEFAULT_LIMIT):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _si.IntegrationWarning)
        if points is not None and math.isfinite(b):
            pts = [p for p in points if a < p < b]
            if pts:
                return _si.quad(f, a, b, epsabs=tol, epsrel=rtol, points=pts, limit=limit)
        return _si.quad(f, a, b, epsabs=tol, epsrel=rtol, limit=limit)


def integrate(f, a, b=math.inf, tol=1e-10, *, rtol=1e-12, tail_exponent=None,
              points=None, limit=DEFAULT_LIMIT):
    """Integrate ``f`` over ``(a, b)``.

    Parameters
    ----------
    f : callable
        Scalar integrand.
    a, b : float
        Limits; ``b`` may be ``math.inf``.
    tol : float
        Absolute error target. ``QuadratureError`` is raised when the
        estimated error exceeds ``max(tol, rtol*|value|)``.
    tail_exponent : float, optional
        Power ``p`` with ``f(x) ~ C x**p`` as x -> inf. Required for
        algebraic tails; leave unset for integrands with exponential decay.
    points : sequence of float, optional
        Breakpoints (e.g. the mode, or 1). The first finite breakpoint above
        ``a`` also starts the mapped tail.

    Returns
    -------
    (value, err_est)
    """
    if b < a:
        v, e = integrate(f, b, a, tol, rtol=rtol, tail_exponent=tail_exponent,
                         points=points, limit=limit)
        return -v, e
    pts = sorted(p for p in (points or ()) if a < p < b)
    if math.isfinite(b):
        v, e = _quad(f, a, b, tol, rtol, pts, limit)
        _check(v, e, tol, rtol, (a, b))
        return v, e

    if tail_exponent is None:
        if pts:
            c = pts[-1]
            v1, e1 = _quad(f, a, c, 0.5 * tol, rtol, pts[:-1], limit)
            v2, e2 = _quad(f, c, math.inf, 0.5 * tol, rtol, None, limit)
            v, e = v1 + v2, e1 + e2
        else:
            v, e = _quad(f, a, math.inf, tol, rtol, None, limit)
        _check(v, e, tol, rtol, (a, b))
        return v, e

    p = float(tail_exponent)
    if not p < -1.0:
        raise QuadratureError(f"tail exponent {p} does not give a convergent integral")
    c = pts[-1] if pts else max(1.0, a + 1.0)
    if c <= a:
        c = a + 1.0
    v1, e1 = _quad(f, a, c, 0.5 * tol, rtol, pts[:-1] if pts else None, limit) if c > a else (0.0, 0.0)
    k = 1.0 / (p + 1.0)  # negative
    scale = c * abs(k)

    def g(t):
        if t <= 0.0:
            return 0.0
        x = c * t ** k
        if not math.isfinite(x):
            return 0.0
        return f(x) * scale * t ** (k - 1.0)

    v2, e2 = _quad(g, 0.0, 1.0, 0.5 * tol, rtol, None, limit)
    v, e = v1 + v2, e1 + e2
    _check(v, e, tol, rtol, (a, b))
    return v, e


def _check(v, e, tol, rtol, rng):
    if not (math.isfinite(v) and math.isfinite(e)):
        raise QuadratureError(f"non-finite quadrature result on {rng}: {v} +- {e}")
    if e > max(tol, rtol * abs(v)):
        raise QuadratureError(
            f"quadrature on {rng} reached error {e:.3g}, above tolerance {max(tol, rtol * abs(v)):.3g}"
        )


def gauss_legendre(n: int):
    """Nodes and weights on [-1, 1]."""
    return np.polynomial.legendre.leggauss(n)
