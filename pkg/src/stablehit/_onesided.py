"""The function b_alpha and the one-sided stable law built from it."""

import math

import numpy as np
from scipy import integrate as _si

from . import _kernels_py
from ._backend import kernels


def b_alpha(alpha, u):
    """b_alpha(u) = (sin((1-1/a)u)/sin u)^(a-1) * sin(u/a)/sin u, vectorized."""
    u = np.ascontiguousarray(u, dtype=float)
    flat = u.reshape(-1)
    out = np.empty_like(flat)
    # numpy's vectorized sin outpaces a compiled scalar loop here
    _kernels_py.b_alpha_array(float(alpha), flat, out)
    return out.reshape(u.shape)


def b_alpha_scalar(alpha, u):
    ia = 1.0 / alpha
    su = math.sin(u)
    return (math.sin((1.0 - ia) * u) / su) ** (alpha - 1.0) * math.sin(u * ia) / su


def b_alpha_at_zero(alpha):
    return (1.0 - 1.0 / alpha) ** (alpha - 1.0) / alpha


def _log_z(alpha, u, x):
    # log of (b(u)/x)^(1/(alpha-1))
    return (math.log(b_alpha_scalar(alpha, u)) - math.log(x)) / (alpha - 1.0)


def _peak(alpha, x):
    # the integrands peak where b(u) = x; b is increasing
    if x <= b_alpha_at_zero(alpha):
        return None
    lo, hi = 0.0, math.pi
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if b_alpha_scalar(alpha, mid) < x:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _quad_u(g, alpha, x, rtol):
    pk = _peak(alpha, x)
    pts = [pk] if pk is not None and 0.0 < pk < math.pi else None
    v, e = _si.quad(g, 0.0, math.pi, epsabs=0.0, epsrel=rtol, limit=200, points=pts)
    return v, e


def hat_tau_pdf(alpha, x, rtol=1e-12):
    """Density of the positive (1/alpha)-stable law via its integral representation in b_alpha."""
    if x <= 0.0:
        return 0.0, 0.0

    def g(u):
        lz = _log_z(alpha, u, x)
        if lz > 6.6:  # z > 735: z e^-z underflows
            return 0.0
        return math.exp(lz - math.exp(lz))

    v, e = _quad_u(g, alpha, x, rtol)
    c = 1.0 / (math.pi * (alpha - 1.0) * x)
    return c * v, c * e


def hat_tau_pdf_deriv(alpha, x, rtol=1e-12):
    """First derivative of the integral-representation density."""
    k = 1.0 / (alpha - 1.0)

    def g(u):
        lz = _log_z(alpha, u, x)
        if lz > 6.6:
            return 0.0
        z = math.exp(lz)
        return math.exp(lz - z) * (1.0 + k - k * z)

    v, e = _quad_u(g, alpha, x, rtol)
    c = -1.0 / (math.pi * (alpha - 1.0) * x * x)
    return c * v, abs(c) * e


def hat_tau_cdf(alpha, x, rtol=1e-12):
    """P[hat tau_1 <= x] = (1/pi) int_0^pi exp(-(b(u)/x)^(1/(alpha-1))) du."""
    if x <= 0.0:
        return 0.0, 0.0

    def g(u):
        lz = _log_z(alpha, u, x)
        if lz > 6.6:
            return 0.0
        return math.exp(-math.exp(lz))

    v, e = _quad_u(g, alpha, x, rtol)
    return v / math.pi, e / math.pi
