"""Power-series representations of the densities of tau_1, T_1 and S_1.

Each law has an expansion in ascending powers of x ("at zero") and one in
descending powers ("at infinity"). The ascending expansions of tau_1 and T_1
are asymptotic rather than convergent (their coefficients grow factorially),
so they are summed up to the smallest term and the error estimate reflects
that. The descending expansions converge for every x > 0 but cancel badly as
x decreases. ``rep="auto"`` picks whichever one has the smaller estimated
error at the given x. In the band of moderate x where both have lost
precision, ``auto`` integrates the product identity instead
(``tau_1 = U_alpha * hat tau_1``, ``T_1 = T_alpha * hat tau_1``).
"""

from __future__ import annotations

import enum
import math
import os
import threading
from dataclasses import dataclass
from typing import NamedTuple

from ._backend import kernels
from . import closed_forms as cf
from .closed_forms import LawId
from .errors import DomainError, SeriesConvergenceError, UnsupportedAsymptoticError
from .special import StableIndex, as_index

DEFAULT_RTOL = 1e-12
# relative error above which rep="auto" falls back to the product integral
DEFAULT_TARGET_REL = 1e-10
MAX_DERIVATIVE = 6


def default_max_terms() -> int:
    """Term budget, overridable through ``STABLEHIT_MAX_TERMS``."""
    try:
        return max(1, int(os.environ.get("STABLEHIT_MAX_TERMS", "400")))
    except ValueError:
        return 400


class Rep(str, enum.Enum):
    AT_ZERO = "at_zero"
    AT_INFINITY = "at_infinity"
    # Mellin convolution of the two product factors; only chosen by "auto"
    PRODUCT = "product"

    @classmethod
    def parse(cls, rep) -> "Rep | None":
        """``None`` stands for automatic selection."""
        if rep is None or (isinstance(rep, str) and rep.lower() == "auto"):
            return None
        if isinstance(rep, cls):
            return rep
        key = str(rep).lower().replace("-", "_")
        key = {"zero": "at_zero", "infinity": "at_infinity", "inf": "at_infinity"}.get(key, key)
        if key == "product":
            raise DomainError("the product form is selected only by rep='auto'")
        try:
            return cls(key)
        except ValueError:
            raise DomainError(f"unknown representation {rep!r}") from None


@dataclass(frozen=True)
class SeriesValue:
    """A series evaluation together with its error budget.

    ``abs_error_est`` adds the truncation estimate and a running bound on
    floating-point cancellation. ``asymptotic`` is true when an asymptotic
    expansion was cut at its smallest term.
    """

    value: float
    abs_error_est: float
    rep_used: Rep
    n_terms: int
    asymptotic: bool = False

    def __float__(self):
        return self.value


class _Part(NamedTuple):
    coef: float
    e0: float
    e1: float
    a0: float
    a1: float
    b0: float = 0.0
    b1: float = 0.0
    use_b: bool = False
    factorial: bool = False
    alternating: bool = False


# ---------------------------------------------------------------------------
# term recipes; each part sums n = 1, 2, ... of
# (-1)^(n alt) coef x^(e0 + e1 n) / (Gamma(a0 + a1 n) Gamma(b0 + b1 n) n!^fact)

def _tau1_parts(a: StableIndex, rep: Rep):
    al, ia = a.alpha, a.inv_alpha
    if rep is Rep.AT_ZERO:
        return (_Part(al, ia - 1.0, 1.0, 0.0, -al, ia, 1.0, True),)
    return (
        _Part(-al, ia - 1.0, -1.0, 0.0, al, ia, -1.0, True),
        _Part(1.0, -1.0, -ia, 0.0, -ia, factorial=True),
    )


def _t1_parts(a: StableIndex, rep: Rep):
    al, ia = a.alpha, a.inv_alpha
    if rep is Rep.AT_ZERO:
        # residues at s = -n of Gamma(1 + s) carry the 1/n! (with 1/(n-1)! / n)
        return (
            _Part(ia, -1.0, 1.0, 0.0, -al, factorial=True),
            _Part(1.0, ia - 1.0, 1.0, 0.0, -al, ia, 1.0, True),
        )
    return (_Part(ia, ia - 1.0, -1.0, -1.0, al, 1.0 + ia, -1.0, True),)


def _s1_direct_parts(a: StableIndex, rep: Rep):
    al, ia = a.alpha, a.inv_alpha
    if rep is Rep.AT_ZERO:
        return (_Part(1.0, -2.0, al, -1.0, al, 1.0 + ia, -1.0, True),)
    return (
        _Part(1.0, -1.0, -al, 0.0, -al, factorial=True),
        _Part(al, -2.0, -al, 0.0, -al, ia, 1.0, True),
    )


def _tau1_cdf_parts(a: StableIndex, tail: str):
    al, ia = a.alpha, a.inv_alpha
    if tail == "lower":
        return (_Part(al, ia, 1.0, 0.0, -al, 1.0 + ia, 1.0, True),)
    return (
        _Part(al, ia, -1.0, 0.0, al, 1.0 + ia, -1.0, True),
        _Part(-1.0, 0.0, -ia, 1.0, -ia, factorial=True),
    )


class _Raw(NamedTuple):
    value: float
    err: float
    n_terms: int
    asymptotic: bool
    converged: bool


def _sum_parts(parts, x, p, rtol, max_terms) -> _Raw:
    total = 0.0
    err = 0.0
    n_terms = 0
    asym = False
    ok = True
    for part in parts:
        v, trunc, rnd, n, status = kernels.series_sum(
            x, part.coef, part.e0, part.e1, part.a0, part.a1, part.b0, part.b1,
            part.use_b, part.factorial, part.alternating, p, rtol, max_terms)
        total += v
        err += trunc + rnd
        n_terms += n
        asym = asym or status == kernels.ASYMPTOTIC
        ok = ok and status != kernels.MAX_TERMS
    if not (math.isfinite(total) and math.isfinite(err)):
        ok = False
        err = math.inf
    return _Raw(total, err, max(n_terms, 1), asym, ok)


# ---------------------------------------------------------------------------
# crossover between the two representations

_crossover_cache: dict = {}
_crossover_lock = threading.Lock()

_X_LO, _X_HI = 1e-4, 1e4


def _raw_eval(law, a, x, p, rep, rtol, max_terms):
    if law is LawId.TAU1:
        return _sum_parts(_tau1_parts(a, rep), x, p, rtol, max_terms)
    if law is LawId.T1:
        return _sum_parts(_t1_parts(a, rep), x, p, rtol, max_terms)
    raise DomainError(f"no series for {law.value}")


def crossover(law, a, p: int = 0) -> float:
    """Abscissa where the at-infinity expansion becomes the more accurate one.

    Found once per ``(law, alpha, p)`` by bisection in log x on the
    difference of the two error estimates, then cached.
    """
    law = LawId.parse(law)
    a = as_index(a)
    key = (law, a.alpha, p)
    hit = _crossover_cache.get(key)
    if hit is not None:
        return hit
    mt = default_max_terms()

    def diff(lx):
        x = math.exp(lx)
        ez = _raw_eval(law, a, x, p, Rep.AT_ZERO, DEFAULT_RTOL, mt)
        ei = _raw_eval(law, a, x, p, Rep.AT_INFINITY, DEFAULT_RTOL, mt)
        ze = ez.err if ez.converged else math.inf
        ie = ei.err if ei.converged else math.inf
        # relative comparison keeps the test scale free
        scale = max(abs(ei.value) if ei.converged else 0.0, 1e-300)
        return math.log(ze / scale + 1e-300) - math.log(ie / scale + 1e-300)

    lo, hi = math.log(_X_LO), math.log(_X_HI)
    dlo, dhi = diff(lo), diff(hi)
    if dlo >= 0.0:
        xc = _X_LO
    elif dhi <= 0.0:
        xc = _X_HI
    else:
        for _ in range(40):
            mid = 0.5 * (lo + hi)
            if diff(mid) < 0.0:
                lo = mid
            else:
                hi = mid
        xc = math.exp(0.5 * (lo + hi))
    # concurrent writers compute the same value, so last-write-wins is harmless
    with _crossover_lock:
        _crossover_cache.setdefault(key, xc)
    return _crossover_cache[key]


def clear_crossover_cache():
    with _crossover_lock:
        _crossover_cache.clear()


# ---------------------------------------------------------------------------
# public evaluation

def _check_x(x):
    x = float(x)
    if not x >= 0.0 or math.isnan(x):
        raise DomainError(f"x must be >= 0, got {x}")
    return x


def _finish(raw: _Raw, rep: Rep, what: str, x: float) -> SeriesValue:
    if not raw.converged:
        partial = SeriesValue(raw.value, raw.err, rep, raw.n_terms, raw.asymptotic)
        raise SeriesConvergenceError(
            f"{what} ({rep.value}) at x={x!r} did not converge in the term budget", partial)
    return SeriesValue(raw.value, raw.err, rep, raw.n_terms, raw.asymptotic)


def _good_enough(raw, target_rel):
    return raw.converged and raw.err <= max(1e-300, target_rel * abs(raw.value))


def _evaluate(law, a, x, p, rep, rtol, max_terms, what, target_rel=DEFAULT_TARGET_REL):
    if rep is not None:
        return _finish(_raw_eval(law, a, x, p, rep, rtol, max_terms), rep, what, x)
    first = Rep.AT_ZERO if x < crossover(law, a, p) else Rep.AT_INFINITY
    other = Rep.AT_INFINITY if first is Rep.AT_ZERO else Rep.AT_ZERO
    r1 = _raw_eval(law, a, x, p, first, rtol, max_terms)
    if _good_enough(r1, target_rel):
        return _finish(r1, first, what, x)
    r2 = _raw_eval(law, a, x, p, other, rtol, max_terms)
    if r2.converged and (not r1.converged or r2.err < r1.err):
        best, best_rep = r2, other
    else:
        best, best_rep = r1, first
    if _good_enough(best, target_rel) or p > 1:
        return _finish(best, best_rep, what, x)
    # both expansions have lost precision here: integrate the product identity
    v, e = cf.density_by_product(law, a, x, p)
    e += 1e-13 * abs(v)
    if best.converged and best.err <= e:
        return _finish(best, best_rep, what, x)
    return SeriesValue(v, e, Rep.PRODUCT, 1)


def _at_origin(law, a, p):
    # limits at x = 0 of the representations that stay finite there
    if p == 0 and law is LawId.TAU1:
        return SeriesValue(0.0, 0.0, Rep.AT_ZERO, 1)
    if p == 0 and law is LawId.T1:
        return SeriesValue(a.inv_alpha * kernels.rgamma(-a.alpha), 0.0, Rep.AT_ZERO, 1)
    raise DomainError(f"the density of {law.value} (derivative {p}) is not finite at x = 0")


def series_density(law, a, x, rep="auto", *, p: int = 0, method: str = "identity",
                   rtol: float = DEFAULT_RTOL, max_terms: int | None = None,
                   target_rel: float = DEFAULT_TARGET_REL) -> SeriesValue:
    """Density (or its ``p``-th derivative) of tau_1, T_1 or S_1.

    Parameters
    ----------
    law : LawId or str
        ``tau1``, ``t1`` or ``s1``.
    a : StableIndex or float
    x : float
        Point of evaluation, ``x >= 0``.
    rep : {"auto", "at_zero", "at_infinity"}
    method : {"identity", "direct"}
        How S_1 is evaluated: through f_S(x) = alpha x^(-alpha-1) f_T(x^-alpha)
        (default), or through its own series. The representation names refer
        to the end of S_1's own axis either way.
    target_rel : float
        With ``rep="auto"``, when neither expansion reaches this relative
        error (p <= 1), the value comes from the Mellin convolution of the
        product factors instead (``rep_used == Rep.PRODUCT``).

    Raises
    ------
    SeriesConvergenceError
        When the chosen series exhausts ``max_terms``.
    """
    law = LawId.parse(law)
    if law not in (LawId.TAU1, LawId.T1, LawId.S1):
        raise DomainError(f"series_density covers tau1, t1 and s1, not {law.value}")
    a = as_index(a)
    x = _check_x(x)
    p = int(p)
    if not 0 <= p <= MAX_DERIVATIVE:
        raise DomainError(f"derivative order must be in [0, {MAX_DERIVATIVE}]")
    rep_e = Rep.parse(rep)
    mt = default_max_terms() if max_terms is None else int(max_terms)
    if x == 0.0:
        if rep_e is Rep.AT_INFINITY or law is LawId.S1:
            raise DomainError(f"{law.value} density at x = 0 needs the at-zero limit")
        return _at_origin(law, a, p)
    if law is LawId.S1:
        return _s1_density(a, x, rep_e, p, method, rtol, mt, target_rel)
    return _evaluate(law, a, x, p, rep_e, rtol, mt, f"{law.value} density", target_rel)


def _s1_density(a, x, rep, p, method, rtol, mt, target_rel=DEFAULT_TARGET_REL):
    al = a.alpha
    if method == "direct":
        chosen = rep
        if chosen is None:
            # the direct series mirror T1's with the ends swapped
            y = x ** (-al)
            chosen = Rep.AT_INFINITY if y < crossover(LawId.T1, a, 0) else Rep.AT_ZERO
        raw = _sum_parts(_s1_direct_parts(a, chosen), x, p, rtol, mt)
        return _finish(raw, chosen, "s1 density", x)
    if method != "identity":
        raise ValueError(f"unknown method {method!r}")
    if p != 0:
        raise DomainError("S1 derivatives are available with method='direct'")
    swap = {Rep.AT_ZERO: Rep.AT_INFINITY, Rep.AT_INFINITY: Rep.AT_ZERO,
            Rep.PRODUCT: Rep.PRODUCT, None: None}
    y = x ** (-al)
    if y == 0.0 or not math.isfinite(y):
        # outside the range of the substitution; use S1's own expansions
        return _s1_density(a, x, rep, p, "direct", rtol, mt)
    t = series_density(LawId.T1, a, y, swap[rep], rtol=rtol, max_terms=mt, target_rel=target_rel)
    jac = al * x ** (-al - 1.0)
    return SeriesValue(jac * t.value, jac * t.abs_error_est, swap[t.rep_used],
                       t.n_terms, t.asymptotic)


def series_density_deriv_tau1(a, x, p: int = 1, rep="auto", **kw) -> SeriesValue:
    """p-th derivative of the tau_1 density, 1 <= p <= 6."""
    if int(p) < 1:
        raise DomainError("p must be a positive integer")
    return series_density(LawId.TAU1, a, x, rep, p=p, **kw)


def series_cdf_tau1(a, x, tail: str = "lower", *, rtol: float = DEFAULT_RTOL,
                    max_terms: int | None = None) -> SeriesValue:
    """P[tau_1 <= x] (``tail="lower"``) or P[tau_1 >= x] (``tail="upper"``).

    The lower-tail series is asymptotic; when it is not accurate the value is
    taken as one minus the convergent upper-tail series, and ``rep_used``
    says which expansion carried the number.
    """
    if tail not in ("lower", "upper"):
        raise DomainError(f"tail must be 'lower' or 'upper', got {tail!r}")
    a = as_index(a)
    x = _check_x(x)
    mt = default_max_terms() if max_terms is None else int(max_terms)
    if x == 0.0:
        return SeriesValue(0.0 if tail == "lower" else 1.0, 0.0, Rep.AT_ZERO, 1)
    lo = _sum_parts(_tau1_cdf_parts(a, "lower"), x, 0, rtol, mt)
    up = _sum_parts(_tau1_cdf_parts(a, "upper"), x, 0, rtol, mt)
    lo_ok = lo.converged and lo.err < 1e-8
    up_ok = up.converged
    if tail == "lower":
        if lo_ok and (not up_ok or lo.err <= up.err):
            return SeriesValue(lo.value, lo.err, Rep.AT_ZERO, lo.n_terms, lo.asymptotic)
        if up_ok:
            return SeriesValue(1.0 - up.value, up.err, Rep.AT_INFINITY, up.n_terms)
        return _finish(lo, Rep.AT_ZERO, "tau1 cdf", x)
    if up_ok and (not lo_ok or up.err <= lo.err):
        return SeriesValue(up.value, up.err, Rep.AT_INFINITY, up.n_terms)
    if lo_ok:
        return SeriesValue(1.0 - lo.value, lo.err, Rep.AT_ZERO, lo.n_terms, lo.asymptotic)
    return _finish(up, Rep.AT_INFINITY, "tau1 cdf", x)


def series_cdf_tau1_rep(a, x, tail: str, rep) -> SeriesValue:
    """A single tail expansion with no fallback, for cross-checks."""
    a = as_index(a)
    rep = Rep.parse(rep)
    parts = _tau1_cdf_parts(a, "lower" if rep is Rep.AT_ZERO else "upper")
    raw = _sum_parts(parts, _check_x(x), 0, DEFAULT_RTOL, default_max_terms())
    sv = _finish(raw, rep, "tau1 cdf", x)
    want_lower = tail == "lower"
    if want_lower == (rep is Rep.AT_ZERO):
        return sv
    return SeriesValue(1.0 - sv.value, sv.abs_error_est, rep, sv.n_terms, sv.asymptotic)


# ---------------------------------------------------------------------------
# leading asymptotics

def _falling(e, p):
    out = 1.0
    for j in range(p):
        out *= e - j
    return out


def asymptotic_leading(law, a, end: str, p: int = 0):
    """Leading term ``(coefficient, exponent)`` with f^(p)(x) ~ c x^e.

    ``end`` is ``"zero"`` or ``"infinity"``.
    """
    law = LawId.parse(law)
    a = as_index(a)
    p = int(p)
    end = {"0": "zero", "inf": "infinity", "at_zero": "zero",
           "at_infinity": "infinity"}.get(str(end).lower(), str(end).lower())
    if end not in ("zero", "infinity"):
        raise UnsupportedAsymptoticError(f"unknown end {end!r}")
    if not 0 <= p <= MAX_DERIVATIVE:
        raise UnsupportedAsymptoticError(f"no asymptotic for derivative order {p}")
    al, ia = a.alpha, a.inv_alpha
    rg = kernels.rgamma
    if law is LawId.TAU1:
        if end == "zero":
            return al * rg(-al) * rg(ia + 1.0 - p), ia - p
        return -al * rg(al) * rg(ia - 1.0 - p), ia - 2.0 - p
    if law is LawId.T1:
        if end == "zero":
            if p == 0:
                return ia * rg(-al), 0.0
            return rg(-al) * rg(ia + 1.0 - p), ia - p
        e = ia - 2.0
        return ia * rg(al - 1.0) * rg(ia) * _falling(e, p), e - p
    if law is LawId.S1:
        if end == "infinity":
            return rg(-al - p), -(al + 1.0) - p
        e = al - 2.0
        return rg(al - 1.0) * rg(ia) * _falling(e, p), e - p
    raise UnsupportedAsymptoticError(f"no asymptotic for {law.value}")
