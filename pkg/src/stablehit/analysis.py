"""Modes, unimodality scans and log-concavity on the exponential scale."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import closed_forms as cf
from . import series
from .closed_forms import LawId
from .errors import DomainError
from .special import as_index

DEFAULT_GRID = (1e-3, 1e3, 20000)
DEAD_BAND = 1e-12


class Verdict(str, enum.Enum):
    UNIMODAL_ON_GRID = "UnimodalOnGrid"
    NOT_UNIMODAL_ON_GRID = "NotUnimodalOnGrid"


@dataclass(frozen=True)
class UnimodalityReport:
    law: LawId
    alpha: float
    mode_estimate: float
    sign_changes_of_derivative: int
    grid_spec: tuple
    verdict: Verdict

    def to_dict(self):
        return {
            "law": self.law.value,
            "alpha": self.alpha,
            "mode_estimate": self.mode_estimate,
            "sign_changes_of_derivative": self.sign_changes_of_derivative,
            "grid_spec": list(self.grid_spec),
            "verdict": self.verdict.value,
        }


def mode_u_alpha(a) -> float:
    """Unique positive root of (1-2a)t^2 + 2t(a-1)cos(pi a) + 1 = 0.

    Written as 2/(sqrt(D) - B) so that no cancellation occurs.
    """
    a = as_index(a)
    b = 2.0 * (a.alpha - 1.0) * a.cos_pi_alpha
    disc = b * b + 4.0 * (2.0 * a.alpha - 1.0)
    return 2.0 / (math.sqrt(disc) - b)


def _t_alpha_critical(a, t):
    al, c, ia = a.alpha, a.cos_pi_alpha, a.inv_alpha
    return ((1.0 - 2.0 * al) * t * t - 2.0 * al * t ** (2.0 - ia)
            + 2.0 * t * (al - 1.0) * c + 2.0 * al * t ** (1.0 - ia) * c + 1.0)


def mode_t_alpha(a) -> float:
    """Positive root of the critical-point expression of the T_alpha density.

    The expression has fractional powers of t, so the root is bracketed and
    refined with Brent's method.
    """
    a = as_index(a)
    lo, hi = 1e-12, 1.0
    while _t_alpha_critical(a, hi) > 0.0:
        hi *= 2.0
    return brentq(lambda t: _t_alpha_critical(a, t), lo, hi, xtol=1e-15, rtol=1e-15)


def log_concavity_exp_scale(a, t_range=(-math.inf, math.inf)) -> bool:
    """Whether t -> log f_{U_alpha}(e^t) is concave on ``t_range``.

    Its second derivative has the sign of 1 - cos(pi a) cosh t. The minimum over
    an interval is attained at the endpoint farthest from 0, so the test is
    exact. With an unbounded range it reduces to cos(pi a) <= 0, i.e. a <= 3/2.
    """
    a = as_index(a)
    lo, hi = float(t_range[0]), float(t_range[1])
    if not lo <= hi:
        raise DomainError("t_range must satisfy lo <= hi")
    c = a.cos_pi_alpha
    if c <= 0.0:
        return True
    reach = max(abs(lo), abs(hi))
    if not math.isfinite(reach):
        return False
    return 1.0 - c * math.cosh(reach) >= 0.0


def log_concavity_numerator_u(a, t):
    """1 - cos(pi a) cosh t, the sign-carrying factor of (log f_U(e^t))''."""
    a = as_index(a)
    return 1.0 - a.cos_pi_alpha * np.cosh(np.asarray(t, dtype=float))


def t1_logconcavity_numerator(a, u):
    """Quartic numerator of the second log-derivative of u^(1/(a-1))/(u^2 - 2u cos(pi a) + 1)."""
    a = as_index(a)
    al, c = a.alpha, a.cos_pi_alpha
    u = np.asarray(u, dtype=float)
    return ((2.0 * al - 3.0) * u ** 4 + 4.0 * (2.0 - al) * c * u ** 3
            - (4.0 * (2.0 - al) * c * c + 2.0 * al) * u * u + 4.0 * c * u - 1.0)


def t1_logconcavity_holds(a, grid=(1e-6, 1e6, 20001)) -> bool:
    """Numerical check that the quartic numerator is negative on a log grid."""
    u = np.geomspace(grid[0], grid[1], int(grid[2]))
    return bool(np.all(t1_logconcavity_numerator(a, u) < 0.0))


# ---------------------------------------------------------------------------
# unimodality scans

# a sign count only needs each derivative value to within a few percent
_SCAN_TARGET = 0.05

_SCAN_LAWS = (LawId.TAU1, LawId.T1, LawId.U_ALPHA, LawId.T_ALPHA, LawId.HAT_TAU1)


def _density_fn(law, a):
    if law in (LawId.TAU1, LawId.T1):
        return lambda x: series.series_density(law, a, x, target_rel=_SCAN_TARGET).value
    return lambda x: cf.density_closed(law, a, x)


def _derivative_values(law, a, xs):
    if law is LawId.U_ALPHA:
        return cf._u_alpha_pdf_deriv(a, xs)
    if law is LawId.T_ALPHA:
        return cf._t_alpha_pdf_deriv(a, xs)
    if law is LawId.HAT_TAU1:
        return np.array([cf.hat_tau1_pdf_deriv(a, x) for x in xs])
    return np.array([series.series_density(law, a, x, p=1, target_rel=_SCAN_TARGET).value
                     for x in xs])


def count_sign_changes(d, dead_band=DEAD_BAND) -> int:
    """Strict sign changes of ``d``, ignoring entries within the dead band.

    The band is relative to max |d| so that it is independent of scale.
    """
    d = np.asarray(d, dtype=float)
    scale = np.max(np.abs(d)) if d.size else 0.0
    s = np.sign(d)
    s[np.abs(d) <= dead_band * scale] = 0
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(f, lo, hi, tol=1e-13):
    # golden-section search for the maximum of f on [lo, hi], in log x
    a, b = math.log(lo), math.log(hi)
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(math.exp(c)), f(math.exp(d))
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(math.exp(c))
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(math.exp(d))
    return math.exp(0.5 * (a + b))


def unimodality_scan(law, a, grid=DEFAULT_GRID, *, dead_band=DEAD_BAND) -> UnimodalityReport:
    """Count sign changes of the density derivative on a log-spaced grid.

    ``grid`` is ``(x_min, x_max, n)``. The mode estimate is the grid argmax of
    the density, refined by golden-section search between its neighbours.
    """
    law = LawId.parse(law)
    if law not in _SCAN_LAWS:
        raise DomainError(f"unimodality_scan covers {[l.value for l in _SCAN_LAWS]}")
    a = as_index(a)
    x_min, x_max, n = float(grid[0]), float(grid[1]), int(grid[2])
    if not (0.0 < x_min < x_max) or n < 1000:
        raise DomainError("grid needs 0 < x_min < x_max and n >= 1000")
    xs = np.geomspace(x_min, x_max, n)
    d = _derivative_values(law, a, xs)
    changes = count_sign_changes(d, dead_band)

    f = _density_fn(law, a)
    # the derivative's last + to - change locates the grid mode without a second scan
    pos = np.flatnonzero((d[:-1] > 0) & (d[1:] <= 0))
    if pos.size:
        i = int(pos[0]) + 1
    else:
        vals = np.array([f(x) for x in xs])
        i = int(np.argmax(vals))
    lo = xs[max(i - 1, 0)]
    hi = xs[min(i + 1, n - 1)]
    mode = _golden_max(f, lo, hi) if lo < hi else xs[i]
    verdict = Verdict.UNIMODAL_ON_GRID if changes == 1 else Verdict.NOT_UNIMODAL_ON_GRID
    return UnimodalityReport(law, a.alpha, float(mode), changes, (x_min, x_max, n), verdict)


def logconcavity_boundary(lo=1.2, hi=1.8, tol=1e-12) -> float:
    """Bisect in alpha for the switch of ``log_concavity_exp_scale`` on the whole line."""
    if not (log_concavity_exp_scale(lo) and not log_concavity_exp_scale(hi)):
        raise DomainError("the bracket does not straddle the switch")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if log_concavity_exp_scale(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


__all__ = [
    "UnimodalityReport", "Verdict", "mode_u_alpha", "mode_t_alpha",
    "log_concavity_exp_scale", "log_concavity_numerator_u", "t1_logconcavity_numerator",
    "t1_logconcavity_holds", "unimodality_scan", "count_sign_changes", "logconcavity_boundary",
]
