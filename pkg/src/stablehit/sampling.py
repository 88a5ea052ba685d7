"""Exact random samplers for the seven laws.

All draws come from ``numpy.random.default_rng(seed)`` (PCG64), consumed in a
fixed order, so a ``(law, alpha, seed, n)`` tuple always reproduces the same
values.

* ``hat_tau1`` uses the representation ``L^(1-alpha) b_alpha(U)`` with L
  standard exponential and U uniform on (0, pi).
* ``u_alpha`` and ``t_alpha`` invert their CDFs on the log scale from a table
  (Gauss-Legendre cells, monotone cubic interpolation, two Newton steps).
* ``tau1 = U_alpha * hat_tau1`` and ``t1 = T_alpha * hat_tau1``.
* ``s1 = t1^(-1/alpha)`` from the same stream, so it is the T_1 batch transformed.
* ``exit_quotient`` divides a T_1 draw by an independent hat tau_1 draw.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import _onesided
from .closed_forms import LawId
from .errors import DomainError
from .special import StableIndex, as_index

_TINY_EXP = 1e-300
_LOG_MAX = math.log(np.finfo(float).max)


def kanter_b(a, u):
    """The function b_alpha(u), strictly increasing from (0, pi) onto (b(0+), inf).

    Accepts a scalar or an array. Near u = 0 a second-order expansion replaces
    the 0/0 ratio of sines.
    """
    a = as_index(a)
    arr = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any(~(arr > 0.0)) or np.any(~(arr < math.pi)):
        raise DomainError("kanter_b needs 0 < u < pi")
    al, ia = a.alpha, a.inv_alpha
    out = _onesided.b_alpha(al, arr)
    small = arr < 1e-5
    if np.any(small):
        c2 = -((al - 1.0) * ((1.0 - ia) ** 2 - 1.0) + ia * ia - 1.0) / 6.0
        us = arr[small]
        out = np.where(small, 0.0, out)
        out[small] = _onesided.b_alpha_at_zero(al) * np.exp(c2 * us * us)
    return float(out[0]) if np.ndim(u) == 0 else out


@dataclass(frozen=True)
class SampleBatch:
    law: LawId
    alpha: float
    seed: int
    values: np.ndarray

    def __len__(self):
        return len(self.values)


# ---------------------------------------------------------------------------
# inverse-CDF tables for U_alpha and T_alpha on the log scale

_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


def _strict(v, mask):
    # indices under ``mask`` along which ``v`` increases strictly
    idx = np.flatnonzero(mask)
    keep = [idx[0]]
    for i in idx[1:]:
        if v[i] > v[keep[-1]]:
            keep.append(i)
    return np.asarray(keep)


class _LogScaleTable:
    """CDF table for Y = log X, where X has one of the closed-form densities."""

    def __init__(self, a: StableIndex, kind: str, cells: int = 8000, y_max: float = 60.0):
        self.al = a.alpha
        self.ia = a.inv_alpha
        self.c = a.cos_pi_alpha
        self.kind = kind
        if kind == "u":
            self.k = -a.sin_pi_alpha / math.pi
            self.rate_left = 1.0 + self.ia
        else:
            self.k = -a.sin_pi_alpha / (math.pi * self.al)
            self.rate_left = 1.0
        self.rate_right = 1.0 - self.ia

        s0 = math.sqrt(max(2.0 - 2.0 * self.c, 1e-12))
        zmax = math.asinh(y_max / s0)
        z = np.linspace(-zmax, zmax, cells + 1)
        y = s0 * np.sinh(z)
        self.y = y
        h = np.diff(y)
        mid = 0.5 * (y[1:] + y[:-1])
        nodes = mid[:, None] + 0.5 * h[:, None] * _GL_X[None, :]
        cell = 0.5 * h * (self.g(nodes) @ _GL_W)

        left_mass = self.g(y[0]) / self.rate_left
        right_mass = self.g(y[-1]) / self.rate_right
        lower = np.empty(cells + 1)
        lower[0] = left_mass
        lower[1:] = left_mass + np.cumsum(cell)
        upper = np.empty(cells + 1)
        upper[-1] = right_mass
        upper[:-1] = right_mass + np.cumsum(cell[::-1])[::-1]
        total = lower[-1] + right_mass
        # normalization is 1 analytically; the measured total guards the tails
        self.total = total
        self.lower = lower / total
        self.upper = upper / total
        self.cell = cell / total
        # each table only serves its own half of the probability range
        lo_keep = _strict(np.log(self.lower), self.lower <= 0.75)
        up_keep = _strict(-np.log(self.upper), self.upper <= 0.75)
        self._inv_lower = PchipInterpolator(np.log(self.lower[lo_keep]), y[lo_keep])
        self._inv_upper = PchipInterpolator(-np.log(self.upper[up_keep]), y[up_keep])

    def g(self, y):
        """Density of Y = log X."""
        y = np.asarray(y, dtype=float)
        den = 2.0 * np.cosh(y) - 2.0 * self.c
        if self.kind == "u":
            return self.k * np.exp(y * self.ia) / den
        return self.k * (1.0 + np.exp(y * self.ia)) / den

    def _partial(self, idx, y):
        # integral of g from y[idx] to y, by 8-point Gauss-Legendre
        y0 = self.y[idx]
        half = 0.5 * (y - y0)
        nodes = (y0 + half)[:, None] + half[:, None] * _GL_X[None, :]
        return half * (self.g(nodes) @ _GL_W) / self.total

    def quantile_log(self, u, q):
        """log-quantile; ``u`` is the lower probability and ``q = 1 - u`` exactly."""
        u = np.asarray(u, dtype=float)
        q = np.asarray(q, dtype=float)
        out = np.empty_like(u)
        use_low = u <= 0.5
        y = self.y
        ylo, yhi = y[0], y[-1]

        lo_u = u[use_low]
        res = np.empty_like(lo_u)
        left = lo_u < self.lower[0]
        res[left] = ylo + np.log(lo_u[left] / self.lower[0]) / self.rate_left
        inner = ~left
        res[inner] = self._polish(self._inv_lower(np.log(lo_u[inner])), lo_u[inner], lower=True)
        out[use_low] = res

        hi_q = q[~use_low]
        res = np.empty_like(hi_q)
        right = hi_q < self.upper[-1]
        res[right] = yhi - np.log(hi_q[right] / self.upper[-1]) / self.rate_right
        inner = ~right
        res[inner] = self._polish(self._inv_upper(-np.log(hi_q[inner])), hi_q[inner], lower=False)
        out[~use_low] = res
        return out

    def _polish(self, y, target, lower, steps=2):
        grid = self.y
        for _ in range(steps):
            y = np.clip(y, grid[0], grid[-1])
            idx = np.clip(np.searchsorted(grid, y, side="right") - 1, 0, len(grid) - 2)
            part = self._partial(idx, y)
            if lower:
                resid = self.lower[idx] + part - target
                step = resid / self.g(y)
            else:
                resid = self.upper[idx] - part - target
                step = -resid / self.g(y)
            y = y - step
        return y

    def quantile(self, u, q):
        ly = self.quantile_log(u, q)
        return np.exp(np.minimum(ly, _LOG_MAX))


_table_lock = threading.Lock()


@lru_cache(maxsize=64)
def _table_cached(alpha: float, kind: str) -> _LogScaleTable:
    return _LogScaleTable(StableIndex(alpha), kind)


def _table(a: StableIndex, kind: str) -> _LogScaleTable:
    with _table_lock:
        return _table_cached(a.alpha, kind)


# ---------------------------------------------------------------------------
# primitive draws; each consumes the generator in a fixed order

def _uniform_open(rng, n):
    r = rng.random(n)
    r[r == 0.0] = 2.0 ** -54
    return r


def _draw_hat_tau1(a, rng, n):
    u = math.pi * _uniform_open(rng, n)
    ell = np.maximum(rng.standard_exponential(n), _TINY_EXP)
    return np.power(ell, 1.0 - a.alpha) * _onesided.b_alpha(a.alpha, u)


def _draw_table(a, rng, n, kind):
    r = rng.random(n)
    tab = _table(a, kind)
    vals = tab.quantile(r, 1.0 - r)
    # r = 0 maps to the left end; keep draws strictly positive
    return np.maximum(vals, np.finfo(float).tiny)


def _draw_t1(a, rng, n):
    t = _draw_table(a, rng, n, "t")
    return t * _draw_hat_tau1(a, rng, n)


def draw(law, a, rng, n):
    """Draw ``n`` values of ``law`` from an existing generator."""
    law = LawId.parse(law)
    if law is LawId.HAT_TAU1:
        return _draw_hat_tau1(a, rng, n)
    if law is LawId.U_ALPHA:
        return _draw_table(a, rng, n, "u")
    if law is LawId.T_ALPHA:
        return _draw_table(a, rng, n, "t")
    if law is LawId.TAU1:
        u = _draw_table(a, rng, n, "u")
        return u * _draw_hat_tau1(a, rng, n)
    if law is LawId.T1:
        return _draw_t1(a, rng, n)
    if law is LawId.S1:
        return np.power(_draw_t1(a, rng, n), -a.inv_alpha)
    if law is LawId.EXIT_QUOTIENT:
        t1 = _draw_t1(a, rng, n)
        return t1 / _draw_hat_tau1(a, rng, n)
    raise DomainError(f"no sampler for {law}")


def sample(law, a, n: int, seed: int) -> SampleBatch:
    """``n`` independent draws of ``law``, deterministic in ``seed``."""
    law = LawId.parse(law)
    a = as_index(a)
    n = int(n)
    if n < 1:
        raise DomainError("n must be at least 1")
    seed = int(seed)
    if not 0 <= seed < 2 ** 64:
        raise DomainError("seed must be a 64-bit unsigned integer")
    rng = np.random.default_rng(seed)
    values = draw(law, a, rng, n)
    return SampleBatch(law, a.alpha, seed, values)
