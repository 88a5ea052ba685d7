"""Scalar special functions: Gamma, reciprocal Gamma, Mittag-Leffler."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath

from ._backend import kernels
from .errors import DomainError

DEFAULT_GUARD = 1e-3


@dataclass(frozen=True)
class StableIndex:
    """Stability index alpha in (1, 2) with cached trigonometric constants.

    ``guard`` keeps alpha away from the endpoints, where the laws degenerate
    (alpha -> 1) or the densities concentrate (alpha -> 2).
    """

    alpha: float
    guard: float = DEFAULT_GUARD
    sin_pi_alpha: float = field(init=False, repr=False)
    cos_pi_alpha: float = field(init=False, repr=False)
    inv_alpha: float = field(init=False, repr=False)

    def __post_init__(self):
        a = float(self.alpha)
        if not math.isfinite(a) or not (1.0 + self.guard < a < 2.0 - self.guard):
            raise DomainError(
                f"alpha={self.alpha!r} outside ({1.0 + self.guard:g}, {2.0 - self.guard:g})"
            )
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "sin_pi_alpha", kernels.sinpi(a))
        object.__setattr__(self, "cos_pi_alpha", kernels.sinpi(a + 0.5))
        object.__setattr__(self, "inv_alpha", 1.0 / a)

    def __float__(self):
        return self.alpha


def as_index(a) -> StableIndex:
    return a if isinstance(a, StableIndex) else StableIndex(float(a))


def gamma(x: float) -> float:
    """Gamma(x) by Lanczos approximation with reflection for x < 1/2."""
    return kernels.gamma(float(x))


def rgamma(x: float) -> float:
    """1/Gamma(x), exactly zero at the non-positive integers."""
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"rgamma needs a finite argument, got {x!r}")
    return kernels.rgamma(x)


def sinpi(x: float) -> float:
    return kernels.sinpi(float(x))


_ML_MAX_TERMS = 20000


def mittag_leffler(a: float, z: float, order: str = "value") -> float:
    """Mittag-Leffler function E_a(z) = sum z^n / Gamma(1 + a n), or its derivative.

    Parameters
    ----------
    a : float
        Index in (0, 2].
    z : float
        Real argument.
    order : {"value", "derivative"}

    For z >= 0 the series has positive terms and is summed in double
    precision with compensated summation. For z < 0 the terms alternate and
    cancel, so the partial sums are carried in extended precision sized to
    the largest term.
    """
    a = float(a)
    z = float(z)
    if not (0.0 < a <= 2.0):
        raise DomainError(f"Mittag-Leffler index must be in (0, 2], got {a}")
    if order not in ("value", "derivative"):
        raise ValueError(f"order must be 'value' or 'derivative', got {order!r}")
    if not math.isfinite(z):
        raise DomainError("Mittag-Leffler argument must be finite")
    deriv = order == "derivative"
    if z == 0.0:
        return kernels.rgamma(1.0 + a) if deriv else 1.0
    if z > 0.0:
        return _ml_positive(a, z, deriv)
    return _ml_negative(a, z, deriv)


def _ml_log_term(a, logz, n, deriv):
    # log of the n-th term of E_a or E_a'
    if deriv:
        return math.log(n) + (n - 1) * logz - kernels.lgamma_pos(1.0 + a * n)
    return n * logz - kernels.lgamma_pos(1.0 + a * n)


def _ml_positive(a, z, deriv):
    logz = math.log(z)
    s = 0.0
    comp = 0.0
    small = 0
    n = 1 if deriv else 0
    while n < _ML_MAX_TERMS:
        lt = _ml_log_term(a, logz, n, deriv)
        if lt > 709.0:
            raise OverflowError(f"E_{a}({z}) exceeds the floating range")
        term = math.exp(lt)
        t = s + term
        if abs(s) >= term:
            comp += (s - t) + term
        else:
            comp += (term - t) + s
        s = t
        if term < 2.220446049250313e-16 * (s + comp):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        n += 1
    else:
        raise OverflowError(f"E_{a}({z}) did not converge in {_ML_MAX_TERMS} terms")
    v = s + comp
    if not math.isfinite(v):
        raise OverflowError(f"E_{a}({z}) exceeds the floating range")
    return v


def _ml_negative(a, z, deriv):
    logz = math.log(-z)
    # largest term sets the working precision
    n_peak = max(1, int(math.exp(logz / a)) + 1)
    top = max(_ml_log_term(a, logz, m, deriv) for m in (max(1, n_peak // 2), n_peak, 2 * n_peak))
    if top > 700.0:
        raise OverflowError(f"E_{a}({z}) needs terms beyond the floating range")
    extra = max(0, int(top / math.log(10.0))) + 20
    with mpmath.workdps(16 + extra):
        zz = mpmath.mpf(z)
        aa = mpmath.mpf(a)
        s = mpmath.mpf(0)
        small = 0
        n = 1 if deriv else 0
        while n < _ML_MAX_TERMS:
            if deriv:
                term = n * zz ** (n - 1) * mpmath.rgamma(1 + aa * n)
            else:
                term = zz ** n * mpmath.rgamma(1 + aa * n)
            s += term
            if s != 0 and abs(term) < mpmath.mpf(10) ** (-18) * abs(s) and n > n_peak:
                small += 1
                if small >= 3:
                    break
            else:
                small = 0
            n += 1
        return float(s)
