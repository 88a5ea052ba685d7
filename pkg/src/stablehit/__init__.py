"""Hitting, exit and supremum laws of spectrally positive alpha-stable Levy processes.

The process is normalized by ``E[exp(-lam X_t)] = exp(t lam^alpha)`` with
``1 < alpha < 2``. The package provides closed-form and series densities,
fractional moments, exact samplers and unimodality diagnostics for

* ``tau1``: the hitting time of level 1,
* ``t1``: the first exit time above 1,
* ``s1``: the running supremum at time 1,
* ``hat_tau1``: the downward passage time of -1,
* the auxiliary factors ``u_alpha`` and ``t_alpha``, and the exit quotient.
"""

from ._backend import NAME as BACKEND
from .analysis import (
    UnimodalityReport,
    log_concavity_exp_scale,
    mode_u_alpha,
    unimodality_scan,
)
from .closed_forms import (
    LawId,
    MellinStrip,
    density_closed,
    laplace_g_alpha,
    mellin_moment,
    mellin_strip,
)
from .errors import (
    DomainError,
    QuadratureError,
    SeriesConvergenceError,
    StableHitError,
    StripError,
    UnsupportedAsymptoticError,
)
from .sampling import SampleBatch, kanter_b, sample
from .series import (
    Rep,
    SeriesValue,
    asymptotic_leading,
    series_cdf_tau1,
    series_density,
    series_density_deriv_tau1,
)
from .special import StableIndex, gamma, mittag_leffler, rgamma
from .verify import VerifyReport, consistency_suite, integrate, ks_statistic

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "StableIndex", "LawId", "MellinStrip", "Rep", "SeriesValue", "SampleBatch",
    "UnimodalityReport", "VerifyReport",
    "gamma", "rgamma", "mittag_leffler",
    "density_closed", "mellin_moment", "mellin_strip", "laplace_g_alpha",
    "series_density", "series_cdf_tau1", "series_density_deriv_tau1", "asymptotic_leading",
    "kanter_b", "sample",
    "mode_u_alpha", "log_concavity_exp_scale", "unimodality_scan",
    "integrate", "ks_statistic", "consistency_suite",
    "StableHitError", "DomainError", "StripError", "SeriesConvergenceError",
    "QuadratureError", "UnsupportedAsymptoticError",
]
