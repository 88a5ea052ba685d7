"""Consistency harness: quadrature, Kolmogorov-Smirnov tests and the full cross-check suite."""

from __future__ import annotations

import functools
import json
import math
import os
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np
from scipy import special as _sp
from scipy import stats as _st
from scipy.interpolate import PchipInterpolator

from . import analysis, closed_forms as cf, sampling, series
from .closed_forms import LawId
from .errors import QuadratureError, SeriesConvergenceError, StableHitError
from .quadrature import gauss_legendre, integrate
from .special import StableIndex, as_index

__all__ = [
    "integrate", "ks_statistic", "Check", "VerifyReport", "SuiteConfig",
    "consistency_suite", "REGISTRY", "FORMULA_OPERATIONS", "TabulatedCdf",
]


# ---------------------------------------------------------------------------
# Kolmogorov-Smirnov

def ks_statistic(samples, cdf: Callable) -> tuple[float, float]:
    """One-sample KS statistic of sorted ``samples`` against ``cdf``.

    ``cdf`` may be vectorized or scalar. Returns ``(D, p_value)`` with the
    asymptotic Kolmogorov p-value.
    """
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise ValueError("ks_statistic needs at least one sample")
    if np.any(np.diff(x) < 0):
        x = np.sort(x)
    try:
        f = np.asarray(cdf(x), dtype=float)
        if f.shape != x.shape:
            raise TypeError
    except (TypeError, ValueError):
        f = np.array([cdf(v) for v in x], dtype=float)
    n = x.size
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - f)
    d_minus = np.max(f - (i - 1) / n)
    d = float(min(1.0, max(d_plus, d_minus, 0.0)))
    return d, float(_sp.kolmogorov(math.sqrt(n) * d))


class TabulatedCdf:
    """CDF from a density on a log grid, with power-law tails beyond it.

    Each log cell is integrated by Gauss-Legendre in ``log x``; outside the
    grid the leading asymptotics ``c x^e`` give the missing mass. Values
    between nodes come from monotone cubic interpolation.
    """

    def __init__(self, density, x_min, x_max, cells, left=None, right=None, order=10):
        nodes, weights = gauss_legendre(order)
        y = np.linspace(math.log(x_min), math.log(x_max), cells + 1)
        h = np.diff(y)
        mids = 0.5 * (y[1:] + y[:-1])
        pts = mids[:, None] + 0.5 * h[:, None] * nodes[None, :]
        xs = np.exp(pts)
        vals = np.array([density(v) for v in xs.ravel()]).reshape(xs.shape)
        mass = 0.5 * h * ((vals * xs) @ weights)
        left_mass = self._tail(left, x_min, lower=True)
        right_mass = self._tail(right, x_max, lower=False)
        cum = np.concatenate([[left_mass], left_mass + np.cumsum(mass)])
        self.total = cum[-1] + right_mass
        self.left, self.right = left, right
        self.x_min, self.x_max = x_min, x_max
        self.y = y
        self.cum = cum
        keep = np.concatenate([[True], np.diff(cum) > 0])
        self._interp = PchipInterpolator(y[keep], cum[keep])

    @staticmethod
    def _tail(asym, x, lower):
        if asym is None:
            return 0.0
        c, e = asym
        if lower:
            return c * x ** (e + 1.0) / (e + 1.0)
        return -c * x ** (e + 1.0) / (e + 1.0)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.empty_like(x)
        lo = x < self.x_min
        hi = x > self.x_max
        mid = ~(lo | hi)
        out[mid] = self._interp(np.log(x[mid]))
        if np.any(lo):
            c, e = self.left if self.left else (0.0, 0.0)
            out[lo] = c * x[lo] ** (e + 1.0) / (e + 1.0) if self.left else 0.0
        if np.any(hi):
            c, e = self.right if self.right else (0.0, 0.0)
            out[hi] = self.total + (c * x[hi] ** (e + 1.0) / (e + 1.0) if self.right else 0.0)
        return np.clip(out, 0.0, 1.0)


# a KS test at n = 1e5 resolves about 1e-5 in probability, so the tabulated
# references need far less than the default series accuracy
_KS_TARGET = 1e-8


def _safe_series(law, a, target_rel=series.DEFAULT_TARGET_REL):
    def f(x):
        try:
            return series.series_density(law, a, x, target_rel=target_rel).value
        except SeriesConvergenceError as exc:
            return exc.partial.value
    return f


def _pointwise(f):
    # a plain loop: the expansion that is tried and rejected may overflow
    # internally, and np.vectorize would surface those flags as warnings
    def g(x):
        x = np.asarray(x, dtype=float)
        return np.array([f(float(v)) for v in x.ravel()]).reshape(x.shape)
    return g


@functools.lru_cache(maxsize=8)
def _t1_table(alpha):
    # shared by T1 and S1 = T1^(-1/alpha)
    a = StableIndex(alpha)
    return TabulatedCdf(_safe_series(LawId.T1, a, _KS_TARGET), 1e-8, 1e10, 800,
                        left=series.asymptotic_leading(LawId.T1, a, "zero"),
                        right=series.asymptotic_leading(LawId.T1, a, "infinity"))


def reference_cdf(law, a) -> Callable:
    """A CDF for ``law`` computed without the samplers, for KS tests."""
    law = LawId.parse(law)
    a = as_index(a)
    if law is LawId.EXIT_QUOTIENT:
        return lambda x: cf.exit_quotient_cdf(a, x)
    if law is LawId.HAT_TAU1:
        return _pointwise(lambda x: cf.hat_tau1_cdf(a, x))
    if law is LawId.U_ALPHA:
        ia = a.inv_alpha
        k = -a.sin_pi_alpha / math.pi
        return TabulatedCdf(lambda x: cf.density_closed(law, a, x), 1e-8, 1e12, 1200,
                            left=(k, ia), right=(k, ia - 2.0))
    if law is LawId.T_ALPHA:
        ia = a.inv_alpha
        k = -a.sin_pi_alpha / (math.pi * a.alpha)
        return TabulatedCdf(lambda x: cf.density_closed(law, a, x), 1e-8, 1e12, 1200,
                            left=(k, 0.0), right=(k, ia - 2.0))
    if law is LawId.TAU1:
        def f(x):
            try:
                return series.series_cdf_tau1(a, float(x)).value
            except SeriesConvergenceError as exc:
                return exc.partial.value
        return _pointwise(f)
    if law in (LawId.T1, LawId.S1):
        t_cdf = _t1_table(a.alpha)
        if law is LawId.T1:
            return t_cdf
        # S1 = T1^(-1/alpha), so P[S1 <= x] = P[T1 >= x^-alpha]
        return lambda x: 1.0 - t_cdf(np.asarray(x, dtype=float) ** (-a.alpha))
    raise ValueError(f"no reference cdf for {law}")


# ---------------------------------------------------------------------------
# report types

@dataclass
class Check:
    name: str
    target: float
    measured: float
    tolerance: float
    relative: bool = False
    passed: bool = field(init=False)

    def __post_init__(self):
        self.target = float(self.target)
        self.measured = float(self.measured)
        self.tolerance = float(self.tolerance)
        bound = self.tolerance * abs(self.target) if self.relative else self.tolerance
        dev = abs(self.measured - self.target)
        self.passed = bool(dev <= bound) if math.isfinite(dev) else False


@dataclass
class VerifyReport:
    alpha: float
    checks: list
    wall_time_s: float
    alpha_grid: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def to_dict(self):
        return {
            "alpha": self.alpha,
            "checks": [
                {k: _jsonable(v) for k, v in asdict(c).items()} for c in self.checks
            ],
            "wall_time_s": self.wall_time_s,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    return v


def _env_float(name, default):
    try:
        return float(os.environ.get(name, default))
    except ValueError:
        return default


@dataclass
class SuiteConfig:
    seed: int = 20240611
    n_samples: int = 100_000
    ks_threshold: float = 1e-3
    scan_grid: tuple = analysis.DEFAULT_GRID
    quad_tol: float = field(default_factory=lambda: _env_float("STABLEHIT_QUAD_TOL", 1e-10))
    steps: tuple | None = None


# ---------------------------------------------------------------------------
# helpers shared by the checks

def _mode_guess(law, a):
    if law is LawId.U_ALPHA:
        return analysis.mode_u_alpha(a)
    if law is LawId.T_ALPHA:
        return analysis.mode_t_alpha(a)
    return 0.3


def series_total(law, a, s=0.0, weight=None, tol=1e-10):
    """Integral of x^s f(x) (times ``weight`` if given) over (0, inf) for a series density."""
    law = LawId.parse(law)
    f = _safe_series(law, a)
    if weight is None:
        _, e = series.asymptotic_leading(law, a, "infinity")
        g = (lambda x: f(x)) if s == 0.0 else (lambda x: x ** s * f(x))
        return integrate(g, 0.0, math.inf, tol, rtol=tol, tail_exponent=e + s,
                         points=[_mode_guess(law, a), 1.0])
    return integrate(lambda x: weight(x) * f(x), 0.0, math.inf, tol, rtol=tol,
                     points=[_mode_guess(law, a), 1.0])


def closed_total(law, a, s=0.0, tol=1e-10):
    law = LawId.parse(law)
    ia = a.inv_alpha
    tails = {LawId.U_ALPHA: ia - 2.0, LawId.T_ALPHA: ia - 2.0,
             LawId.EXIT_QUOTIENT: ia - 2.0, LawId.HAT_TAU1: -1.0 - ia}
    f = lambda x: cf.density_closed(law, a, x)
    g = f if s == 0.0 else (lambda x: x ** s * f(x))
    return integrate(g, 0.0, math.inf, tol, rtol=tol, tail_exponent=tails[law] + s,
                     points=[_mode_guess(law, a), 1.0])


def interior_points(strip, k=5, margin=0.15):
    lo, hi = strip.lower, strip.upper
    if not math.isfinite(lo):
        lo = hi - 3.0
    w = hi - lo
    return list(np.linspace(lo + margin * w, hi - margin * w, k))


# ---------------------------------------------------------------------------
# the checks, one function per suite step

def _step_normalization(a, cfg):
    out = []
    for law in (LawId.U_ALPHA, LawId.T_ALPHA, LawId.EXIT_QUOTIENT):
        v, _ = closed_total(law, a, tol=cfg.quad_tol)
        out.append(Check(f"normalization.{law.value}", 1.0, v, 1e-7))
    v, _ = closed_total(LawId.HAT_TAU1, a, tol=1e-8)
    out.append(Check("normalization.hat_tau1", 1.0, v, 1e-5))
    for law in (LawId.TAU1, LawId.T1, LawId.S1):
        v, _ = series_total(law, a, tol=1e-9)
        out.append(Check(f"normalization.series.{law.value}", 1.0, v, 1e-6))
    return out


def _step_mellin(a, cfg):
    out = []
    rng = np.random.default_rng(cfg.seed)
    strip_tau = cf.mellin_strip(LawId.TAU1, a)
    strip_t = cf.mellin_strip(LawId.T1, a)
    strip_q = cf.mellin_strip(LawId.EXIT_QUOTIENT, a)
    worst = [0.0, 0.0, 0.0]
    for s in rng.uniform(strip_tau.lower, strip_tau.upper, 50)[1:-1]:
        lhs = cf.mellin_moment(LawId.TAU1, a, s)
        rhs = cf.mellin_moment(LawId.U_ALPHA, a, s) * cf.mellin_moment(LawId.HAT_TAU1, a, s)
        worst[0] = max(worst[0], abs(lhs - rhs) / lhs)
    for s in rng.uniform(strip_t.lower, strip_t.upper, 50):
        lhs = cf.mellin_moment(LawId.T1, a, s)
        rhs = cf.mellin_moment(LawId.T_ALPHA, a, s) * cf.mellin_moment(LawId.HAT_TAU1, a, s)
        worst[1] = max(worst[1], abs(lhs - rhs) / lhs)
    for s in rng.uniform(strip_q.lower, strip_q.upper, 50):
        lhs = cf.mellin_moment(LawId.T1, a, s) * cf.mellin_moment(LawId.HAT_TAU1, a, -s)
        rhs = cf.mellin_moment(LawId.EXIT_QUOTIENT, a, s)
        worst[2] = max(worst[2], abs(lhs - rhs) / rhs)
    out.append(Check("mellin.factorization.tau1", 0.0, worst[0], 1e-12))
    out.append(Check("mellin.factorization.t1", 0.0, worst[1], 1e-12))
    out.append(Check("mellin.quotient_identity", 0.0, worst[2], 1e-12))

    for law in (LawId.U_ALPHA, LawId.T_ALPHA, LawId.HAT_TAU1):
        for s in interior_points(cf.mellin_strip(law, a), 3):
            v, _ = closed_total(law, a, s, tol=1e-10)
            out.append(Check(f"mellin.quadrature.{law.value}[s={s:.4g}]",
                             cf.mellin_moment(law, a, s), v, 1e-6))
    for law in (LawId.TAU1, LawId.T1):
        for s in interior_points(cf.mellin_strip(law, a), 5):
            v, _ = series_total(law, a, s, tol=1e-9)
            out.append(Check(f"mellin.quadrature.series.{law.value}[s={s:.4g}]",
                             cf.mellin_moment(law, a, s), v, 1e-5))
    return out


def _step_laplace(a, cfg):
    out = []
    for lam in (0.5, 1.0, 2.0):
        lam_a = lam ** a.alpha
        v, _ = series_total(LawId.TAU1, a, weight=lambda x: math.exp(-lam_a * x), tol=1e-10)
        out.append(Check(f"laplace.series_tau1[lam={lam:g}]", cf.laplace_g_alpha(a, lam), v, 1e-6))
    worst = 0.0
    for lam in np.linspace(0.0, 2.0, 11):
        worst = max(worst, abs(cf.laplace_g_alpha(a, lam, "mittag_leffler")
                               - cf.laplace_g_alpha(a, lam, "integral")))
    out.append(Check("laplace.mittag_leffler_vs_integral", 0.0, worst, 1e-8))
    return out


def _step_double_laplace(a, cfg):
    out = []
    for s in (1.5, 2.0, 3.0):
        v, _ = integrate(lambda lam: math.exp(-s * lam) * cf.laplace_g_alpha(a, lam),
                         0.0, math.inf, 1e-10, rtol=1e-10, points=[cf.LAMBDA_SWITCH])
        out.append(Check(f"double_laplace[s={s:g}]", cf.double_laplace_transform(a, s), v, 1e-6))
    return out


def _step_dual(a, cfg):
    """Both expansions near the crossover, where each is individually usable."""
    out = []
    for law in (LawId.TAU1, LawId.T1):
        xc = series.crossover(law, a)
        worst, used = 0.0, 0
        for x in np.geomspace(0.5 * xc, 2.0 * xc, 9):
            try:
                z = series.series_density(law, a, x, "at_zero")
                i = series.series_density(law, a, x, "at_infinity")
            except SeriesConvergenceError:
                # one side of the band can lie outside an expansion's reach
                continue
            used += 1
            worst = max(worst, abs(z.value - i.value) / (z.abs_error_est + i.abs_error_est))
        if used == 0:
            worst = math.inf
        out.append(Check(f"dual_series.{law.value}.normalized_gap", 0.0, worst, 1.0))
    return out


def _step_change_of_variables(a, cfg):
    worst = 0.0
    for x in np.geomspace(0.1, 10.0, 100):
        d = series.series_density(LawId.S1, a, x, method="direct")
        t = series.series_density(LawId.T1, a, x ** (-a.alpha))
        jac = a.alpha * x ** (-a.alpha - 1.0)
        err = d.abs_error_est + jac * t.abs_error_est
        worst = max(worst, abs(d.value - jac * t.value) / err)
    return [Check("change_of_variables.s1_t1.normalized_gap", 0.0, worst, 1.0)]


_ALL_LAWS = (LawId.HAT_TAU1, LawId.U_ALPHA, LawId.T_ALPHA, LawId.TAU1, LawId.T1,
             LawId.S1, LawId.EXIT_QUOTIENT)


def _step_ks(a, cfg):
    out = []
    thr = cfg.ks_threshold
    for k, law in enumerate(_ALL_LAWS):
        batch = sampling.sample(law, a, cfg.n_samples, cfg.seed + k)
        _, p = ks_statistic(np.sort(batch.values), reference_cdf(law, a))
        out.append(Check(f"ks.{law.value}", 1.0, p, 1.0 - thr))
    # both sides of tau1 = U_alpha * hat_tau1 drawn independently
    left = sampling.sample(LawId.TAU1, a, cfg.n_samples, cfg.seed + 100).values
    rng = np.random.default_rng(cfg.seed + 101)
    u = sampling.draw(LawId.U_ALPHA, a, rng, cfg.n_samples)
    h = sampling.draw(LawId.HAT_TAU1, a, rng, cfg.n_samples)
    p = _st.ks_2samp(left, u * h).pvalue
    out.append(Check("ks.two_sample.tau1_vs_product", 1.0, p, 1.0 - thr))
    return out


def _step_asymptotics(a, cfg):
    out = []
    for law in (LawId.TAU1, LawId.T1, LawId.S1):
        for end, x in (("zero", 1e-3), ("infinity", 1e3)):
            c, e = series.asymptotic_leading(law, a, end)
            v = series.series_density(law, a, x).value
            out.append(Check(f"asymptotic.{law.value}.{end}", 1.0, v / (c * x ** e), 0.02))
    return out


def _step_unimodality(a, cfg):
    out = []
    proven = a.alpha <= 1.5
    for law in (LawId.TAU1, LawId.T1):
        rep = analysis.unimodality_scan(law, a, cfg.scan_grid)
        tol = 0.0 if proven else math.inf
        label = "" if proven else ".recorded"
        out.append(Check(f"unimodality.{law.value}.sign_changes{label}", 1.0,
                         rep.sign_changes_of_derivative, tol))
    for law in (LawId.U_ALPHA, LawId.T_ALPHA):
        rep = analysis.unimodality_scan(law, a, cfg.scan_grid)
        out.append(Check(f"unimodality.{law.value}.sign_changes", 1.0,
                         rep.sign_changes_of_derivative, 0.0))
        if law is LawId.U_ALPHA:
            h = math.log(cfg.scan_grid[1] / cfg.scan_grid[0]) / (cfg.scan_grid[2] - 1)
            m = analysis.mode_u_alpha(a)
            out.append(Check("unimodality.u_alpha.mode_vs_scan", m, rep.mode_estimate, h, relative=True))
    out.append(Check("log_concavity.boundary", 1.5, analysis.logconcavity_boundary(), 1e-9))
    out.append(Check("log_concavity.t1_quartic_negative", float(proven),
                     float(analysis.t1_logconcavity_holds(a)), 0.0 if proven else math.inf))
    return out


@dataclass(frozen=True)
class CheckEntry:
    step: int
    name: str
    covers: tuple
    run: Callable


REGISTRY = (
    CheckEntry(1, "normalizations",
              ("density_closed.u_alpha", "density_closed.t_alpha", "density_closed.exit_quotient",
               "density_closed.hat_tau1", "series_density.tau1", "series_density.t1",
               "series_density.s1", "asymptotic_leading"), _step_normalization),
    CheckEntry(2, "mellin",
              ("mellin_moment.tau1", "mellin_moment.hat_tau1", "mellin_moment.u_alpha",
               "mellin_moment.t1", "mellin_moment.t_alpha", "mellin_moment.exit_quotient"),
              _step_mellin),
    CheckEntry(3, "laplace", ("laplace_g_alpha", "mittag_leffler"), _step_laplace),
    CheckEntry(4, "double_laplace", ("laplace_g_alpha",), _step_double_laplace),
    CheckEntry(5, "dual_series", ("series_density.tau1", "series_density.t1"), _step_dual),
    CheckEntry(6, "change_of_variables", ("series_density.s1",), _step_change_of_variables),
    CheckEntry(7, "ks", ("sample", "kanter_b", "series_cdf_tau1", "density_closed.exit_quotient"),
              _step_ks),
    CheckEntry(8, "asymptotics", ("asymptotic_leading",), _step_asymptotics),
    CheckEntry(9, "unimodality",
              ("unimodality_scan", "mode_u_alpha", "log_concavity_exp_scale",
               "series_density_deriv_tau1"), _step_unimodality),
)

FORMULA_OPERATIONS = frozenset({
    "density_closed.u_alpha", "density_closed.t_alpha", "density_closed.exit_quotient",
    "density_closed.hat_tau1",
    "mellin_moment.tau1", "mellin_moment.hat_tau1", "mellin_moment.u_alpha",
    "mellin_moment.t1", "mellin_moment.t_alpha", "mellin_moment.exit_quotient",
    "laplace_g_alpha", "mittag_leffler",
    "series_density.tau1", "series_density.t1", "series_density.s1",
    "series_cdf_tau1", "series_density_deriv_tau1", "asymptotic_leading",
    "kanter_b", "sample", "mode_u_alpha", "log_concavity_exp_scale", "unimodality_scan",
})


def registry_coverage() -> set:
    """Formula-bearing operations that no registered check exercises (ideally empty)."""
    covered = set()
    for entry in REGISTRY:
        covered.update(entry.covers)
    return set(FORMULA_OPERATIONS) - covered


def consistency_suite(a, config: SuiteConfig | None = None) -> VerifyReport:
    """Run the registered checks in order and collect a ``VerifyReport``.

    A failed comparison is recorded in the report. Quadrature or series
    breakdowns abort with the name of the check that hit them.
    """
    a = a if isinstance(a, StableIndex) else StableIndex(float(a))
    cfg = config or SuiteConfig()
    t0 = time.perf_counter()
    checks = []
    for entry in REGISTRY:
        if cfg.steps is not None and entry.step not in cfg.steps:
            continue
        try:
            checks.extend(entry.run(a, cfg))
        except (QuadratureError, SeriesConvergenceError) as exc:
            raise StableHitError(f"check '{entry.name}' (step {entry.step}) aborted: {exc}") from exc
    return VerifyReport(a.alpha, checks, time.perf_counter() - t0, [a.alpha])
