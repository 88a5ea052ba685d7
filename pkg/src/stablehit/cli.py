"""Command-line front end: tabulate densities, moments and samples as CSV or JSON.

Usage: ``stablehit <command> [options]``; ``stablehit <command> --help`` lists
the options of each command. Exit status is 0 on success, 1 when ``verify``
records a failed check and 2 on usage or parameter errors.

Environment: ``STABLEHIT_MAX_TERMS`` (series term budget),
``STABLEHIT_QUAD_TOL`` (quadrature tolerance of the verification suite) and
``STABLEHIT_BACKEND`` (``cython``, ``python`` or ``auto``).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import analysis, closed_forms as cf, sampling, series, verify
from .closed_forms import LawId
from .errors import SeriesConvergenceError, StableHitError
from .special import StableIndex


@dataclass
class Grid:
    lo: float
    hi: float
    points: int
    spacing: str = "linear"

    def values(self):
        if self.spacing == "log":
            return np.geomspace(self.lo, self.hi, self.points)
        return np.linspace(self.lo, self.hi, self.points)


@dataclass
class CliConfig:
    alpha: float
    law: LawId | None = None
    grid: Grid | None = None
    seed: int = 0
    output: str = "csv"
    overrides: dict = field(default_factory=dict)


def parse_grid(text: str) -> Grid:
    """``min:max:points[:linear|log]``."""
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise argparse.ArgumentTypeError(f"grid {text!r} is not min:max:points[:spacing]")
    try:
        lo, hi, pts = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid {text!r} has a non-numeric field") from None
    spacing = parts[3] if len(parts) == 4 else "linear"
    if spacing not in ("linear", "log"):
        raise argparse.ArgumentTypeError(f"grid spacing must be linear or log, got {spacing!r}")
    if not lo < hi:
        raise argparse.ArgumentTypeError("grid needs min < max")
    if pts < 2:
        raise argparse.ArgumentTypeError("grid needs at least 2 points")
    if spacing == "log" and lo <= 0.0:
        raise argparse.ArgumentTypeError("log grid needs min > 0")
    return Grid(lo, hi, pts, spacing)


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _emit(out, header, rows, fmt):
    if fmt == "json":
        json.dump([dict(zip(header, [_json_val(v) for v in r])) for r in rows], out)
        out.write("\n")
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])


def _json_val(v):
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else repr(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


# ---------------------------------------------------------------------------
# commands

_SERIES_LAWS = (LawId.TAU1, LawId.T1, LawId.S1)


def _density_row(law, a, x, rep, max_terms):
    if law in _SERIES_LAWS:
        try:
            sv = series.series_density(law, a, x, rep, max_terms=max_terms)
        except SeriesConvergenceError as exc:
            sv = exc.partial
            return (x, sv.value, math.inf, sv.rep_used.value)
        return (x, sv.value, sv.abs_error_est, sv.rep_used.value)
    if law is LawId.HAT_TAU1:
        v, e = cf.hat_tau1_pdf(a, x, return_error=True)
        return (x, v, e, "closed")
    return (x, cf.density_closed(law, a, x), 0.0, "closed")


def cmd_density(ns, a, out):
    rows = [_density_row(ns.law, a, float(x), ns.rep, ns.max_terms) for x in ns.grid.values()]
    _emit(out, ["x", "f", "err_est", "rep"], rows, ns.format)
    return 0


def cmd_cdf(ns, a, out):
    rows = []
    for x in ns.grid.values():
        x = float(x)
        if ns.law is LawId.TAU1:
            sv = series.series_cdf_tau1(a, x, ns.tail, max_terms=ns.max_terms)
            rows.append((x, sv.value, sv.abs_error_est, sv.rep_used.value))
            continue
        if ns.law is LawId.EXIT_QUOTIENT:
            v, e = float(cf.exit_quotient_cdf(a, x)), 0.0
        elif ns.law is LawId.HAT_TAU1:
            v, e = cf.hat_tau1_cdf(a, x, return_error=True)
        else:
            raise StableHitError(f"no CDF command for {ns.law.value}; use tau1, hat_tau1 or exit_quotient")
        if ns.tail == "upper":
            v = 1.0 - v
        rows.append((x, v, e, "closed"))
    _emit(out, ["x", "F", "err_est", "rep"], rows, ns.format)
    return 0


def cmd_deriv(ns, a, out):
    rows = []
    for x in ns.grid.values():
        x = float(x)
        if ns.law in _SERIES_LAWS:
            method = "direct" if ns.law is LawId.S1 else "identity"
            sv = series.series_density(ns.law, a, x, ns.rep, p=ns.p, method=method,
                                       max_terms=ns.max_terms)
            rows.append((x, sv.value, sv.abs_error_est, sv.rep_used.value))
        elif ns.p == 1 and ns.law in (LawId.U_ALPHA, LawId.T_ALPHA, LawId.HAT_TAU1):
            rows.append((x, cf.density_closed_deriv(ns.law, a, x), 0.0, "closed"))
        else:
            raise StableHitError(f"derivative of order {ns.p} is not available for {ns.law.value}")
    _emit(out, ["x", f"f{ns.p}", "err_est", "rep"], rows, ns.format)
    return 0


def cmd_moments(ns, a, out):
    rows = [(s, cf.mellin_moment(ns.law, a, s)) for s in ns.s]
    _emit(out, ["s", "moment"], rows, ns.format)
    return 0


def cmd_sample(ns, a, out):
    batch = sampling.sample(ns.law, a, ns.n, ns.seed)
    _emit(out, ["value"], [(v,) for v in batch.values], ns.format)
    return 0


def cmd_mode(ns, a, out):
    grid = (ns.grid.lo, ns.grid.hi, ns.grid.points) if ns.grid else analysis.DEFAULT_GRID
    rep = analysis.unimodality_scan(ns.law, a, grid)
    closed = {LawId.U_ALPHA: analysis.mode_u_alpha, LawId.T_ALPHA: analysis.mode_t_alpha}
    row = [ns.law.value, a.alpha, rep.mode_estimate,
           closed[ns.law](a) if ns.law in closed else float("nan"),
           rep.sign_changes_of_derivative, rep.verdict.value]
    _emit(out, ["law", "alpha", "mode_estimate", "mode_closed_form",
                "sign_changes", "verdict"], [row], ns.format)
    return 0


def cmd_verify(ns, a, out):
    cfg = verify.SuiteConfig(seed=ns.seed if ns.seed is not None else verify.SuiteConfig.seed,
                             n_samples=ns.n_samples)
    if ns.steps:
        cfg.steps = tuple(int(s) for s in ns.steps.split(","))
    report = verify.consistency_suite(a, cfg)
    if ns.json or ns.format == "json":
        out.write(report.to_json())
        out.write("\n")
    else:
        rows = [(c.name, c.target, c.measured, c.tolerance, c.relative, c.passed)
                for c in report.checks]
        _emit(out, ["name", "target", "measured", "tolerance", "relative", "passed"], rows, "csv")
    return 0 if report.passed else 1


def cmd_laplace(ns, a, out):
    rows = [(lam, cf.laplace_g_alpha(a, float(lam), ns.method)) for lam in ns.grid.values()]
    _emit(out, ["lam", "G"], rows, ns.format)
    return 0


# ---------------------------------------------------------------------------
# parser

def _law(text):
    try:
        return LawId.parse(text)
    except StableHitError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _s_list(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad exponent list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stablehit", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    def common(sp, law=True, law_default=None, grid=True, grid_required=True):
        sp.add_argument("--alpha", type=float, required=True, help="stability index in (1, 2)")
        if law:
            sp.add_argument("--law", type=_law, default=law_default,
                            required=law_default is None, help="law name, e.g. tau1")
        if grid:
            sp.add_argument("--grid", type=parse_grid, required=grid_required,
                            help="min:max:points[:linear|log]")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--max-terms", type=int, default=None, help="series term budget")

    sp = sub.add_parser("density", help="tabulate a density; columns x,f,err_est,rep")
    common(sp)
    sp.add_argument("--rep", choices=("auto", "at_zero", "at_infinity"), default="auto")
    sp.set_defaults(func=cmd_density)

    sp = sub.add_parser("cdf", help="tabulate a distribution function; columns x,F,err_est,rep")
    common(sp, law_default=LawId.TAU1)
    sp.add_argument("--tail", choices=("lower", "upper"), default="lower")
    sp.set_defaults(func=cmd_cdf)

    sp = sub.add_parser("deriv", help="tabulate a density derivative; columns x,f<p>,err_est,rep")
    common(sp, law_default=LawId.TAU1)
    sp.add_argument("--p", type=int, default=1, help="derivative order, 1..6")
    sp.add_argument("--rep", choices=("auto", "at_zero", "at_infinity"), default="auto")
    sp.set_defaults(func=cmd_deriv)

    sp = sub.add_parser("moments", help="fractional moments E[X^s]; columns s,moment")
    common(sp, grid=False)
    sp.add_argument("--s", type=_s_list, required=True, help="exponent or comma-separated list")
    sp.set_defaults(func=cmd_moments)

    sp = sub.add_parser("sample", help="exact random draws; column value")
    common(sp, grid=False)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("mode", help="mode and unimodality scan")
    common(sp, grid_required=False)
    sp.set_defaults(func=cmd_mode)

    sp = sub.add_parser("verify", help="run the consistency suite")
    common(sp, law=False, grid=False)
    sp.add_argument("--json", action="store_true", help="emit the report as JSON")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--n-samples", type=int, default=100_000)
    sp.add_argument("--steps", default=None, help="comma-separated subset of steps 1..9")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("laplace", help="E[exp(-lam^alpha tau_1)] on a grid; columns lam,G")
    common(sp, law=False)
    sp.add_argument("--method", choices=("auto", "mittag_leffler", "integral"), default="auto")
    sp.set_defaults(func=cmd_laplace)
    return p


def _join_negative_values(argv):
    # "--s -0.5" would otherwise be read as an unknown option
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in ("--s", "--alpha") and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def run(argv=None, out=None) -> int:
    """Execute one command; returns the exit status."""
    out = sys.stdout if out is None else out
    parser = build_parser()
    argv = _join_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else 2
    try:
        a = StableIndex(ns.alpha)
        buf = io.StringIO()
        code = ns.func(ns, a, buf)
    except (StableHitError, ValueError) as exc:
        sys.stderr.write(f"stablehit: error: {exc}\n")
        parser.print_usage(sys.stderr)
        return 2
    out.write(buf.getvalue())
    return code


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
