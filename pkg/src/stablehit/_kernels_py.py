"""Pure-Python kernels.

Reference implementation of the compiled core in ``_ckernels.pyx``. Both
modules expose the same functions with the same semantics; the backend is
chosen in ``_backend``.
"""

import math

_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = 2.5066282746310002
_LOG_SQRT_2PI = 0.91893853320467274
_LOG_PI = 1.1447298858494002
_EPS = 2.220446049250313e-16
# log of the smallest positive normal double; terms below are treated as 0
_LOG_TINY = -708.0

# status codes returned by series_sum
CONVERGED = 0
ASYMPTOTIC = 1
MAX_TERMS = 2


def _exp(x):
    # C semantics: overflow gives inf rather than raising
    return math.exp(x) if x < 709.78 else math.inf


def sinpi(x):
    """sin(pi*x) with exact zeros at the integers."""
    if x != x or math.isinf(x):
        return math.nan
    r = math.fmod(x, 2.0)
    if r > 1.0:
        r -= 2.0
    elif r < -1.0:
        r += 2.0
    # r in [-1, 1]; fold into [-1/2, 1/2]
    if r > 0.5:
        r = 1.0 - r
    elif r < -0.5:
        r = -1.0 - r
    if r == 0.0:
        return 0.0
    return math.sin(math.pi * r)


def _lanczos_sum(x):
    # x >= 0.5; returns A(x) with Gamma(x) = sqrt(2 pi) t^(x-1/2) e^-t A(x)
    z = x - 1.0
    a = _LANCZOS_COEF[0]
    for i in range(1, 9):
        a += _LANCZOS_COEF[i] / (z + i)
    return a


def _gamma_pos(x):
    # x >= 0.5 and x <= 171.6
    if x <= 23.0 and x == math.floor(x):
        # (x-1)! is exact in double precision up to 22!
        f = 1.0
        for k in range(2, int(x)):
            f *= k
        return f
    t = x - 0.5 + _LANCZOS_G
    a = _lanczos_sum(x)
    if x < 140.0:
        return _SQRT_2PI * math.pow(t, x - 0.5) * math.exp(-t) * a
    half = math.pow(t, 0.5 * (x - 0.5))
    return _SQRT_2PI * half * (half * math.exp(-t)) * a


def lgamma_pos(x):
    """log Gamma(x) for x > 0."""
    if x < 0.5:
        s = sinpi(x)
        return _LOG_PI - math.log(abs(s)) - lgamma_pos(1.0 - x)
    t = x - 0.5 + _LANCZOS_G
    return _LOG_SQRT_2PI + (x - 0.5) * math.log(t) - t + math.log(_lanczos_sum(x))


def gamma(x):
    if x != x:
        return math.nan
    if x >= 0.5:
        if x > 171.62:
            return math.inf
        return _gamma_pos(x)
    s = sinpi(x)
    if s == 0.0:
        return math.nan
    if x < -170.0:
        # |Gamma| underflows
        return 0.0 * s
    return math.pi / (s * _gamma_pos(1.0 - x))


def rgamma(x):
    """1/Gamma(x); entire, exactly zero at 0, -1, -2, ..."""
    if x != x:
        return math.nan
    if x >= 0.5:
        if x > 170.0:
            return math.exp(-lgamma_pos(x))
        return 1.0 / _gamma_pos(x)
    s = sinpi(x)
    if s == 0.0:
        return 0.0
    if x < -170.0:
        lg = math.log(abs(s)) + lgamma_pos(1.0 - x) - _LOG_PI
        return math.copysign(math.exp(lg) if lg < 709.7 else math.inf, s)
    return s * _gamma_pos(1.0 - x) / math.pi


def lrgamma(x):
    """(log|1/Gamma(x)|, sign) with sign 0 at the poles of Gamma."""
    if x > 0.0:
        return -lgamma_pos(x), 1
    s = sinpi(x)
    if s == 0.0:
        return -math.inf, 0
    return math.log(abs(s)) + lgamma_pos(1.0 - x) - _LOG_PI, (1 if s > 0.0 else -1)


def _lrgamma_envelope(x):
    # log|1/Gamma(x)| with the oscillating sine factor dropped
    if x > 0.0:
        return -lgamma_pos(x)
    return lgamma_pos(1.0 - x) - _LOG_PI


def series_sum(x, coef, e0, e1, a0, a1, b0, b1, use_b, factorial, alternating,
               p, rtol, max_terms):
    """Sum the power series with terms, for n = 1, 2, ...::

        (-1)^(n*alternating) * coef * d^p/dx^p x^(e0 + e1 n)
            * rgamma(a0 + a1 n) * rgamma(b0 + b1 n) / n!^factorial

    Terms are evaluated in the log domain. When the coefficient growth rate
    ``-(a1 + b1 + factorial)`` is positive the series is asymptotic and is
    optimally truncated at the smallest term of its envelope.

    Returns ``(value, trunc_err, round_err, n_terms, status)``.
    """
    logx = math.log(x)
    kappa = -(a1 + (b1 if use_b else 0.0) + (1.0 if factorial else 0.0))
    asymptotic = kappa > 0.0
    lcoef = math.log(abs(coef))
    csign = 1 if coef > 0 else -1

    s = 0.0
    comp = 0.0
    abs_sum = 0.0
    round_err = 0.0
    prev_mag = math.inf
    hits = 0
    last_mag = 0.0
    prev_env = math.inf
    env_min = math.inf
    s_before_min = 0.0
    comp_before_min = 0.0
    abs_before_min = 0.0
    round_before_min = 0.0
    lfact = 0.0
    n = 0
    while n < max_terms:
        n += 1
        if factorial:
            lfact += math.log(n)
        e = e0 + e1 * n
        la, sa = lrgamma(a0 + a1 * n)
        lmag_parts = abs(e * logx) + abs(la) + lfact
        lt = lcoef + e * logx + la - lfact
        sgn = csign * sa
        env = lcoef + e * logx + _lrgamma_envelope(a0 + a1 * n) - lfact
        if use_b:
            lb, sb = lrgamma(b0 + b1 * n)
            lt += lb
            sgn *= sb
            lmag_parts += abs(lb)
            env += _lrgamma_envelope(b0 + b1 * n)
        if p > 0:
            ff = 1.0
            for j in range(p):
                ff *= e - j
            if ff == 0.0:
                sgn = 0
            else:
                lt += math.log(abs(ff)) - p * logx
                env += math.log(abs(ff)) - p * logx
                if ff < 0.0:
                    sgn = -sgn
        if alternating and (n & 1):
            sgn = -sgn

        # a term killed by the derivative carries no envelope information
        if asymptotic and sgn != 0:
            if env > prev_env and prev_env < math.inf:
                # envelope passed its minimum at n - 1
                return (s_before_min + comp_before_min, 10.0 * _exp(env_min),
                        round_before_min + _EPS * abs_before_min, n - 1, ASYMPTOTIC)
            prev_env = env
            if env < env_min:
                env_min = env
                s_before_min = s
                comp_before_min = comp
                abs_before_min = abs_sum
                round_before_min = round_err

        if sgn == 0:
            # pole of Gamma: exact zero, does not count toward the stopping rule
            continue
        if lt < _LOG_TINY:
            term = 0.0
        else:
            term = sgn * _exp(lt)
        mag = abs(term)
        # Neumaier summation
        t = s + term
        if abs(s) >= mag:
            comp += (s - t) + term
        else:
            comp += (term - t) + s
        s = t
        abs_sum += mag
        round_err += mag * _EPS * (4.0 + lmag_parts)

        if mag <= rtol * abs(s + comp) and mag <= prev_mag:
            hits += 1
        else:
            hits = 0
        prev_mag = mag
        last_mag = mag
        if hits >= 2:
            nxt = _next_term_mag(x, logx, coef, e0, e1, a0, a1, b0, b1, use_b,
                                 factorial, p, n, lfact)
            return (s + comp, max(10.0 * nxt, last_mag), round_err + _EPS * abs_sum,
                    n, CONVERGED)
    return s + comp, math.inf, round_err + _EPS * abs_sum, n, MAX_TERMS


def _next_term_mag(x, logx, coef, e0, e1, a0, a1, b0, b1, use_b, factorial, p, n, lfact):
    # magnitude of the first omitted nonzero term (looks past Gamma poles)
    for m in range(n + 1, n + 8):
        if factorial:
            lfact += math.log(m)
        e = e0 + e1 * m
        la, sa = lrgamma(a0 + a1 * m)
        lt = math.log(abs(coef)) + e * logx + la - lfact
        nz = sa != 0
        if use_b:
            lb, sb = lrgamma(b0 + b1 * m)
            lt += lb
            nz = nz and sb != 0
        if p > 0:
            ff = 1.0
            for j in range(p):
                ff *= e - j
            if ff == 0.0:
                nz = False
            else:
                lt += math.log(abs(ff)) - p * logx
        if nz:
            return _exp(lt) if lt > _LOG_TINY else 0.0
    return 0.0


def b_alpha_array(alpha, u, out):
    """Fill ``out`` with b_alpha(u) for u in (0, pi); no domain checks."""
    import numpy as np

    ia = 1.0 / alpha
    su = np.sin(u)
    out[:] = (np.sin((1.0 - ia) * u) / su) ** (alpha - 1.0) * np.sin(u * ia) / su
