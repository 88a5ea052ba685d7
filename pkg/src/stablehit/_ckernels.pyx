# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Semantics mirror ``_kernels_py`` exactly."""

from libc.math cimport floor, sin, fmod, pow, exp, log, fabs, copysign, isnan, isinf, INFINITY, NAN, M_PI

cdef double _G = 7.0
cdef double[9] _C
_C[:] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
]
cdef double _SQRT_2PI = 2.5066282746310002
cdef double _LOG_SQRT_2PI = 0.91893853320467274
cdef double _LOG_PI = 1.1447298858494002
cdef double _EPS = 2.220446049250313e-16
cdef double _LOG_TINY = -708.0

CONVERGED = 0
ASYMPTOTIC = 1
MAX_TERMS = 2


cdef double _sinpi(double x) nogil:
    cdef double r
    if isnan(x) or isinf(x):
        return NAN
    r = fmod(x, 2.0)
    if r > 1.0:
        r -= 2.0
    elif r < -1.0:
        r += 2.0
    if r > 0.5:
        r = 1.0 - r
    elif r < -0.5:
        r = -1.0 - r
    if r == 0.0:
        return 0.0
    return sin(M_PI * r)


cdef inline double _lanczos_sum(double x) nogil:
    cdef double z = x - 1.0
    cdef double a = _C[0]
    cdef int i
    for i in range(1, 9):
        a += _C[i] / (z + i)
    return a


cdef double _gamma_pos(double x) nogil:
    cdef double t, a, half, f
    cdef int k
    if x <= 23.0 and x == floor(x):
        # (x-1)! is exact in double precision up to 22!
        f = 1.0
        for k in range(2, <int>x):
            f *= k
        return f
    t = x - 0.5 + _G
    a = _lanczos_sum(x)
    if x < 140.0:
        return _SQRT_2PI * pow(t, x - 0.5) * exp(-t) * a
    half = pow(t, 0.5 * (x - 0.5))
    return _SQRT_2PI * half * (half * exp(-t)) * a


cdef double _lgamma_pos(double x) nogil:
    cdef double t
    if x < 0.5:
        return _LOG_PI - log(fabs(_sinpi(x))) - _lgamma_pos(1.0 - x)
    t = x - 0.5 + _G
    return _LOG_SQRT_2PI + (x - 0.5) * log(t) - t + log(_lanczos_sum(x))


cdef double _rgamma(double x) nogil:
    cdef double s, lg
    if isnan(x):
        return NAN
    if x >= 0.5:
        if x > 170.0:
            return exp(-_lgamma_pos(x))
        return 1.0 / _gamma_pos(x)
    s = _sinpi(x)
    if s == 0.0:
        return 0.0
    if x < -170.0:
        lg = log(fabs(s)) + _lgamma_pos(1.0 - x) - _LOG_PI
        if lg < 709.7:
            return copysign(exp(lg), s)
        return copysign(INFINITY, s)
    return s * _gamma_pos(1.0 - x) / M_PI


cdef double _gamma(double x) nogil:
    cdef double s
    if isnan(x):
        return NAN
    if x >= 0.5:
        if x > 171.62:
            return INFINITY
        return _gamma_pos(x)
    s = _sinpi(x)
    if s == 0.0:
        return NAN
    if x < -170.0:
        return 0.0 * s
    return M_PI / (s * _gamma_pos(1.0 - x))


cdef inline double _lrgamma(double x, int* sign) nogil:
    cdef double s
    if x > 0.0:
        sign[0] = 1
        return -_lgamma_pos(x)
    s = _sinpi(x)
    if s == 0.0:
        sign[0] = 0
        return -INFINITY
    sign[0] = 1 if s > 0.0 else -1
    return log(fabs(s)) + _lgamma_pos(1.0 - x) - _LOG_PI


cdef inline double _lrgamma_envelope(double x) nogil:
    if x > 0.0:
        return -_lgamma_pos(x)
    return _lgamma_pos(1.0 - x) - _LOG_PI


def sinpi(double x):
    return _sinpi(x)


def gamma(double x):
    return _gamma(x)


def rgamma(double x):
    return _rgamma(x)


def lgamma_pos(double x):
    return _lgamma_pos(x)


def lrgamma(double x):
    cdef int sign
    cdef double v = _lrgamma(x, &sign)
    return v, sign


cdef double _next_term_mag(double logx, double coef, double e0, double e1,
                           double a0, double a1, double b0, double b1, bint use_b,
                           bint factorial, int p, int n, double lfact) nogil:
    cdef int m, j, sa, sb
    cdef double e, la, lb, lt, ff
    cdef bint nz
    for m in range(n + 1, n + 8):
        if factorial:
            lfact += log(<double>m)
        e = e0 + e1 * m
        la = _lrgamma(a0 + a1 * m, &sa)
        lt = log(fabs(coef)) + e * logx + la - lfact
        nz = sa != 0
        if use_b:
            lb = _lrgamma(b0 + b1 * m, &sb)
            lt += lb
            nz = nz and sb != 0
        if p > 0:
            ff = 1.0
            for j in range(p):
                ff *= e - j
            if ff == 0.0:
                nz = False
            else:
                lt += log(fabs(ff)) - p * logx
        if nz:
            return exp(lt) if lt > _LOG_TINY else 0.0
    return 0.0


def series_sum(double x, double coef, double e0, double e1, double a0, double a1,
               double b0, double b1, bint use_b, bint factorial, bint alternating,
               int p, double rtol, int max_terms):
    cdef double logx = log(x)
    cdef double kappa = -(a1 + (b1 if use_b else 0.0) + (1.0 if factorial else 0.0))
    cdef bint asymptotic = kappa > 0.0
    cdef double lcoef = log(fabs(coef))
    cdef int csign = 1 if coef > 0 else -1
    cdef double s = 0.0, comp = 0.0, abs_sum = 0.0, round_err = 0.0
    cdef double prev_mag = INFINITY, last_mag = 0.0
    cdef int hits = 0
    cdef double prev_env = INFINITY, env_min = INFINITY
    cdef double s_before_min = 0.0, comp_before_min = 0.0
    cdef double abs_before_min = 0.0, round_before_min = 0.0
    cdef double lfact = 0.0
    cdef int n = 0, j, sa, sb, sgn
    cdef double e, la, lb, lt, env, ff, lmag_parts, term, mag, t, nxt
    cdef int status = 2
    cdef double r_val = 0.0, r_trunc = INFINITY, r_round = 0.0

    with nogil:
        while n < max_terms:
            n += 1
            if factorial:
                lfact += log(<double>n)
            e = e0 + e1 * n
            la = _lrgamma(a0 + a1 * n, &sa)
            lmag_parts = fabs(e * logx) + fabs(la) + lfact
            lt = lcoef + e * logx + la - lfact
            sgn = csign * sa
            env = lcoef + e * logx + _lrgamma_envelope(a0 + a1 * n) - lfact
            if use_b:
                lb = _lrgamma(b0 + b1 * n, &sb)
                lt += lb
                sgn *= sb
                lmag_parts += fabs(lb)
                env += _lrgamma_envelope(b0 + b1 * n)
            if p > 0:
                ff = 1.0
                for j in range(p):
                    ff *= e - j
                if ff == 0.0:
                    sgn = 0
                else:
                    lt += log(fabs(ff)) - p * logx
                    env += log(fabs(ff)) - p * logx
                    if ff < 0.0:
                        sgn = -sgn
            if alternating and (n & 1):
                sgn = -sgn

            # a term killed by the derivative carries no envelope information
            if asymptotic and sgn != 0:
                if env > prev_env and prev_env < INFINITY:
                    # envelope passed its minimum at n - 1
                    status = 1
                    r_val = s_before_min + comp_before_min
                    r_trunc = 10.0 * exp(env_min)
                    r_round = round_before_min + _EPS * abs_before_min
                    n -= 1
                    break
                prev_env = env
                if env < env_min:
                    env_min = env
                    s_before_min = s
                    comp_before_min = comp
                    abs_before_min = abs_sum
                    round_before_min = round_err

            if sgn == 0:
                continue
            if lt < _LOG_TINY:
                term = 0.0
            else:
                term = sgn * exp(lt)
            mag = fabs(term)
            t = s + term
            if fabs(s) >= mag:
                comp += (s - t) + term
            else:
                comp += (term - t) + s
            s = t
            abs_sum += mag
            round_err += mag * _EPS * (4.0 + lmag_parts)

            if mag <= rtol * fabs(s + comp) and mag <= prev_mag:
                hits += 1
            else:
                hits = 0
            prev_mag = mag
            last_mag = mag
            if hits >= 2:
                nxt = _next_term_mag(logx, coef, e0, e1, a0, a1, b0, b1, use_b,
                                     factorial, p, n, lfact)
                status = 0
                r_val = s + comp
                r_trunc = 10.0 * nxt if 10.0 * nxt > last_mag else last_mag
                r_round = round_err + _EPS * abs_sum
                break
        if status == 2:
            r_val = s + comp
            r_trunc = INFINITY
            r_round = round_err + _EPS * abs_sum
    return r_val, r_trunc, r_round, n, status
