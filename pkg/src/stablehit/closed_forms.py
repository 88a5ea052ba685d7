"""Closed-form densities, fractional moments and Laplace transforms.

Conventions: the process is normalized by ``E[exp(-lam X_t)] = exp(t lam^alpha)``,
so the downward passage time ``hat tau_1`` is positive (1/alpha)-stable with
``E[exp(-lam hat tau_1)] = exp(-lam^(1/alpha))``. The hitting time factorizes as
``tau_1 = U_alpha * hat tau_1`` and the exit time as ``T_1 = T_alpha * hat tau_1``
(independent factors).
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _onesided
from ._backend import kernels
from .errors import DomainError, QuadratureError, StripError
from .special import StableIndex, as_index, mittag_leffler
from .quadrature import integrate


class LawId(str, enum.Enum):
    TAU1 = "tau1"
    T1 = "t1"
    S1 = "s1"
    HAT_TAU1 = "hat_tau1"
    U_ALPHA = "u_alpha"
    T_ALPHA = "t_alpha"
    EXIT_QUOTIENT = "exit_quotient"

    @classmethod
    def parse(cls, name) -> "LawId":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("-", "_")
        aliases = {
            "tau": "tau1", "hattau1": "hat_tau1", "hat_tau": "hat_tau1",
            "ualpha": "u_alpha", "u": "u_alpha", "talpha": "t_alpha",
            "exitquotient": "exit_quotient", "quotient": "exit_quotient",
        }
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise DomainError(f"unknown law {name!r}; choose from {[m.value for m in cls]}") from None


@dataclass(frozen=True)
class MellinStrip:
    law: LawId
    lower: float
    upper: float

    def __contains__(self, s):
        return self.lower < s < self.upper


def mellin_strip(law, a) -> MellinStrip:
    """Open interval of exponents s with E[law^s] finite."""
    law = LawId.parse(law)
    a = as_index(a)
    ia = a.inv_alpha
    table = {
        LawId.TAU1: (-1.0 - ia, 1.0 - ia),
        LawId.U_ALPHA: (-1.0 - ia, 1.0 - ia),
        LawId.HAT_TAU1: (-math.inf, ia),
        LawId.T1: (-1.0, 1.0 - ia),
        LawId.T_ALPHA: (-1.0, 1.0 - ia),
        LawId.EXIT_QUOTIENT: (-ia, 1.0 - ia),
        # S1 = T1^(-1/alpha)
        LawId.S1: (-a.alpha * (1.0 - ia), a.alpha),
    }
    lo, hi = table[law]
    return MellinStrip(law, lo, hi)


# ---------------------------------------------------------------------------
# densities

def _scaled_den(a: StableIndex, t):
    # (t^2 - 2t cos(pi a) + 1) / m^2 with m = max(t, 1), so that large t cannot overflow
    m = np.maximum(t, 1.0)
    r = t / m
    return r * r - 2.0 * r * a.cos_pi_alpha / m + 1.0 / m / m, m


def _u_alpha_pdf(a: StableIndex, t):
    t = np.asarray(t, dtype=float)
    den, m = _scaled_den(a, t)
    with np.errstate(divide="ignore", invalid="ignore"):
        v = -a.sin_pi_alpha * (np.power(t, a.inv_alpha) / m / m) / (math.pi * den)
    return np.where(t > 0, v, 0.0)


def _t_alpha_pdf(a: StableIndex, t):
    t = np.asarray(t, dtype=float)
    den, m = _scaled_den(a, t)
    with np.errstate(divide="ignore", invalid="ignore"):
        v = -a.sin_pi_alpha * ((1.0 + np.power(t, a.inv_alpha)) / m / m) / (math.pi * a.alpha * den)
    return np.where(t >= 0, v, 0.0)


def _exit_quotient_pdf(a: StableIndex, t):
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        v = kernels.sinpi(a.inv_alpha) / (math.pi * np.power(t, 1.0 - a.inv_alpha) * (1.0 + t))
    return np.where(t > 0, v, 0.0)


def _u_alpha_pdf_deriv(a: StableIndex, t):
    t = np.asarray(t, dtype=float)
    al, c = a.alpha, a.cos_pi_alpha
    den, m = _scaled_den(a, t)
    r = t / m
    q = (1.0 - 2.0 * al) * r * r + 2.0 * r * (al - 1.0) * c / m + 1.0 / m / m
    with np.errstate(divide="ignore", invalid="ignore"):
        v = -a.sin_pi_alpha / math.pi * (np.power(t, a.inv_alpha - 1.0) / m / m) * q / (al * den * den)
    return v


def _t_alpha_pdf_deriv(a: StableIndex, t):
    t = np.asarray(t, dtype=float)
    al, c, ia = a.alpha, a.cos_pi_alpha, a.inv_alpha
    den, m = _scaled_den(a, t)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        r, ti = t / m, np.power(t, -ia)
        q = ((1.0 - 2.0 * al) * r * r - 2.0 * al * ti * r * r
             + 2.0 * r * (al - 1.0) * c / m + 2.0 * al * ti * r * c / m + 1.0 / m / m)
        v = -a.sin_pi_alpha / (math.pi * al) * (np.power(t, ia - 1.0) / m / m) * q / (al * den * den)
    return v


def _hat_tau_series(a: StableIndex, x, p=0, rtol=1e-14, max_terms=400):
    # sum_{n>=1} (-1)^n rgamma(-n/alpha) d^p x^(-n/alpha - 1) / n!
    return kernels.series_sum(x, 1.0, -1.0, -a.inv_alpha, 0.0, -a.inv_alpha, 0.0, 0.0,
                              False, True, True, p, rtol, max_terms)


def hat_tau1_pdf(a, x, *, return_error=False):
    """Density of hat tau_1 (positive stable of index 1/alpha).

    Uses the classical series in negative powers of x where it is accurate,
    and the integral representation closer to zero where the series cancels.
    """
    a = as_index(a)
    x = float(x)
    if x < 0.0:
        raise DomainError("hat tau_1 density needs x >= 0")
    if x == 0.0:
        return (0.0, 0.0) if return_error else 0.0
    val, trunc, rnd, _, status = _hat_tau_series(a, x)
    err = trunc + rnd
    if status != 0 or err > 1e-12 * abs(val):
        val, err = _onesided.hat_tau_pdf(a.alpha, x)
    return (val, err) if return_error else val


def hat_tau1_pdf_deriv(a, x):
    a = as_index(a)
    val, trunc, rnd, _, status = _hat_tau_series(a, x, p=1)
    if status != 0 or trunc + rnd > 1e-10 * abs(val):
        val, _ = _onesided.hat_tau_pdf_deriv(a.alpha, x)
    return val


def hat_tau1_cdf(a, x, *, return_error=False):
    """P[hat tau_1 <= x]."""
    a = as_index(a)
    x = float(x)
    if x <= 0.0:
        return (0.0, 0.0) if return_error else 0.0
    # upper tail sum_{n>=1} (-1)^(n+1) rgamma(1 - n/alpha) x^(-n/alpha) / n!
    val, trunc, rnd, _, status = kernels.series_sum(
        x, -1.0, 0.0, -a.inv_alpha, 1.0, -a.inv_alpha, 0.0, 0.0,
        False, True, True, 0, 1e-15, 400)
    err = trunc + rnd
    if status == 0 and err < 1e-13:
        res = (1.0 - val, err)
    else:
        res = _onesided.hat_tau_cdf(a.alpha, x)
    return res if return_error else res[0]


def density_closed(law, a, t):
    """Closed-form density of U_alpha, T_alpha, the exit quotient, or hat tau_1.

    ``t`` may be a scalar or an array (arrays are evaluated pointwise).
    """
    law = LawId.parse(law)
    a = as_index(a)
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise DomainError(f"density of {law.value} needs t >= 0")
    if law is LawId.U_ALPHA:
        out = _u_alpha_pdf(a, arr)
    elif law is LawId.T_ALPHA:
        out = _t_alpha_pdf(a, arr)
    elif law is LawId.EXIT_QUOTIENT:
        if np.any(arr == 0):
            raise DomainError("exit-quotient density is unbounded at t = 0")
        out = _exit_quotient_pdf(a, arr)
    elif law is LawId.HAT_TAU1:
        out = np.array([hat_tau1_pdf(a, x) for x in arr.ravel()]).reshape(arr.shape)
    else:
        raise DomainError(f"no closed-form density for {law.value}; use series.series_density")
    return float(out) if np.ndim(t) == 0 else out


def density_closed_deriv(law, a, t):
    """First derivative of the closed-form densities (U_alpha, T_alpha, hat tau_1)."""
    law = LawId.parse(law)
    a = as_index(a)
    if law is LawId.U_ALPHA:
        out = _u_alpha_pdf_deriv(a, t)
    elif law is LawId.T_ALPHA:
        out = _t_alpha_pdf_deriv(a, t)
    elif law is LawId.HAT_TAU1:
        arr = np.asarray(t, dtype=float)
        out = np.array([hat_tau1_pdf_deriv(a, x) for x in arr.ravel()]).reshape(arr.shape)
    else:
        raise DomainError(f"no closed-form derivative for {law.value}")
    return float(out) if np.ndim(t) == 0 else out


def exit_quotient_cdf(a, t):
    """CDF of T_1/hat T_1: a regularized incomplete beta in t/(1+t)."""
    from scipy.special import betainc

    a = as_index(a)
    t = np.asarray(t, dtype=float)
    return betainc(a.inv_alpha, 1.0 - a.inv_alpha, t / (1.0 + t))


# ---------------------------------------------------------------------------
# fractional moments

_LIMIT_THRESHOLD = 1e-8


def _sin_ratio(c, d):
    """sin(pi c d) / sin(pi d), continuous through d = 0."""
    den = kernels.sinpi(d)
    if abs(den) < _LIMIT_THRESHOLD:
        x = math.pi * d
        return c * (1.0 - x * x * (c * c - 1.0) / 6.0)
    return kernels.sinpi(c * d) / den


def _gamma_ratio(num, den):
    """Gamma(num)/Gamma(den) for positive arguments."""
    if num < 170.0 and den < 170.0:
        return kernels.gamma(num) * kernels.rgamma(den)
    return math.exp(kernels.lgamma_pos(num) - kernels.lgamma_pos(den))


def mellin_moment(law, a, s: float) -> float:
    """Fractional moment E[law^s] for s inside the open Mellin strip."""
    law = LawId.parse(law)
    a = as_index(a)
    s = float(s)
    strip = mellin_strip(law, a)
    if not (strip.lower < s < strip.upper):
        raise StripError(f"s={s} outside the strip ({strip.lower}, {strip.upper}) of {law.value}")
    al, ia = a.alpha, a.inv_alpha
    d = s + ia
    if law is LawId.HAT_TAU1:
        return _gamma_ratio(1.0 - al * s, 1.0 - s)
    if law is LawId.U_ALPHA:
        return _sin_ratio(al - 1.0, d)
    if law is LawId.TAU1:
        return kernels.gamma(1.0 - al * s) * kernels.rgamma(1.0 - s) * _sin_ratio(al - 1.0, d)
    if law is LawId.T1:
        sd = kernels.sinpi(d)
        if abs(sd) < _LIMIT_THRESHOLD:
            x = math.pi * d
            q = al * kernels.rgamma(1.0 + al * d) / (math.pi * (1.0 - x * x / 6.0))
        else:
            q = kernels.rgamma(1.0 + al * s) / sd
        return kernels.gamma(1.0 + s) * kernels.sinpi(ia) * q
    if law is LawId.T_ALPHA:
        sin_inv = kernels.sinpi(ia)
        if abs(s) <= abs(d):
            # sin(pi a s)/sin(pi s) is the delicate factor near s = 0
            return _sin_ratio(al, s) * sin_inv / (al * kernels.sinpi(d))
        # near d = 0: sin(pi a s) = -sin(pi a d)
        return -_sin_ratio(al, d) * sin_inv / (al * kernels.sinpi(s))
    if law is LawId.EXIT_QUOTIENT:
        return kernels.sinpi(ia) / kernels.sinpi(d)
    if law is LawId.S1:
        # S1 = T1^(-1/alpha)
        return mellin_moment(LawId.T1, a, -s * ia)
    raise DomainError(f"no fractional moment for {law.value}")


# ---------------------------------------------------------------------------
# Laplace transform of tau_1

LAMBDA_SWITCH = 3.0


def laplace_g_alpha_ml(a, lam: float) -> float:
    """E[exp(-lam^alpha tau_1)] = e^lam - alpha^2 lam^(alpha-1) E_alpha'(lam^alpha)."""
    a = as_index(a)
    if lam == 0.0:
        return 1.0
    al = a.alpha
    return math.exp(lam) - al * al * lam ** (al - 1.0) * mittag_leffler(al, lam ** al, "derivative")


def laplace_g_alpha_integral(a, lam: float, tol: float = 1e-12) -> float:
    """The same transform as a real integral with a positive integrand."""
    a = as_index(a)
    al, c = a.alpha, a.cos_pi_alpha
    pref = -al * a.sin_pi_alpha / math.pi

    def f(s):
        sa = s ** al
        return math.exp(-lam * s) * sa / (sa * sa - 2.0 * sa * c + 1.0)

    try:
        if lam == 0.0:
            v, _ = integrate(f, 0.0, math.inf, tol, rtol=tol, tail_exponent=-al, points=[1.0])
        else:
            v, _ = integrate(f, 0.0, math.inf, tol, rtol=tol, points=[1.0])
    except QuadratureError as exc:
        raise QuadratureError(f"G_alpha({lam}) integral failed: {exc}") from exc
    return pref * v


def laplace_g_alpha(a, lam: float, method: str = "auto") -> float:
    """Laplace transform lam -> E[exp(-lam^alpha tau_1)].

    ``method`` is ``"auto"`` (Mittag-Leffler form up to ``LAMBDA_SWITCH``,
    integral form beyond), ``"mittag_leffler"`` or ``"integral"``.
    """
    lam = float(lam)
    if lam < 0.0 or not math.isfinite(lam):
        raise DomainError("laplace_g_alpha needs a finite lam >= 0")
    if method == "auto":
        method = "mittag_leffler" if lam <= LAMBDA_SWITCH else "integral"
    if method == "mittag_leffler":
        return laplace_g_alpha_ml(a, lam)
    if method == "integral":
        return laplace_g_alpha_integral(a, lam)
    raise ValueError(f"unknown method {method!r}")


def double_laplace_transform(a, s: float) -> float:
    """int_0^inf e^(-s lam) G_alpha(lam) d lam = 1/(s-1) - alpha/(s^alpha - 1), s > 1."""
    a = as_index(a)
    if not s > 1.0:
        raise DomainError("the double Laplace transform needs s > 1")
    return 1.0 / (s - 1.0) - a.alpha / (s ** a.alpha - 1.0)


# ---------------------------------------------------------------------------
# densities of the products tau_1 = U_alpha * hat tau_1 and T_1 = T_alpha * hat tau_1

def _product_integrand(a, factor_pdf, x, p):
    # in v = log w, w the hat tau_1 argument: f(x) = int f_F(x e^-v) f_hat(e^v) dv
    def g(v):
        w = math.exp(v)
        h = hat_tau1_pdf(a, w)
        if h == 0.0:
            return 0.0
        t = x / w
        return float(factor_pdf(a, t)) * h * w ** (-p)
    return g


def density_by_product(law, a, x, p: int = 0, rtol: float = 1e-11):
    """Density (p = 0) or first derivative (p = 1) of tau_1 or T_1 by Mellin convolution.

    Returns ``(value, abs_error_est)``. Slower than the series but accurate
    for every x > 0, which makes it the fallback where both series lose
    precision.
    """
    from scipy import integrate as _si

    law = LawId.parse(law)
    a = as_index(a)
    x = float(x)
    if x <= 0.0:
        raise DomainError("density_by_product needs x > 0")
    if p == 0:
        pdf = _u_alpha_pdf if law is LawId.TAU1 else _t_alpha_pdf
    elif p == 1:
        pdf = _u_alpha_pdf_deriv if law is LawId.TAU1 else _t_alpha_pdf_deriv
    else:
        raise DomainError("density_by_product supports p = 0 and p = 1")
    if law not in (LawId.TAU1, LawId.T1):
        raise DomainError(f"no product form for {law.value}")
    g = _product_integrand(a, pdf, x, p)
    # hat tau_1 is negligible below w ~ 1e-3 and the factor density decays beyond;
    # split where the two factors peak
    pts = sorted({math.log(0.4), math.log(x)})
    lo, hi = math.log(1e-3), max(60.0, math.log(x) + 60.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _si.IntegrationWarning)
        v, e = _si.quad(g, lo, hi, epsabs=0.0, epsrel=rtol, limit=400,
                        points=[q for q in pts if lo < q < hi])
    return v, e
