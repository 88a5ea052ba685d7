"""Compare the compiled and pure-Python kernels.

Run with ``python3 benchmarks/bench_kernels.py``. Each row reports the best
of several repeats for one kernel workload and the speed-up of the compiled
backend. Both backends are checked to return the same values first.
"""

import argparse
import timeit

import numpy as np

from stablehit import _backend

PY = _backend.available["python"]
CY = _backend.available.get("cython")


def _series_args(x, alpha, p=0):
    # hitting-time density expansion at infinity
    return (x, alpha, 1.0 / alpha - 1.0, -1.0, 0.0, alpha, 1.0 + 1.0 / alpha, -1.0,
            True, False, True, p, 1e-12, 400)


def workloads():
    xs = np.geomspace(0.5, 50.0, 200)
    gx = np.linspace(-30.5, 60.3, 500)

    def series(k):
        return lambda: [k.series_sum(*_series_args(float(x), 1.5)) for x in xs]

    def series_deriv(k):
        return lambda: [k.series_sum(*_series_args(float(x), 1.3, 2)) for x in xs]

    def gamma(k):
        return lambda: [k.rgamma(float(x)) for x in gx]

    return {
        "series_sum, 200 points": series,
        "series_sum p=2, 200 points": series_deriv,
        "rgamma, 500 points": gamma,
    }


def check_parity():
    for x in (0.7, 3.0, 40.0):
        a, b = PY.series_sum(*_series_args(x, 1.5)), CY.series_sum(*_series_args(x, 1.5))
        assert abs(a[0] - b[0]) <= 1e-12 * abs(a[0]), (x, a, b)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if CY is None:
        print("compiled kernels are not built; nothing to compare")
        return 1
    check_parity()
    print(f"{'workload':32s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speed-up':>9s}")
    for name, make in workloads().items():
        t_py = min(timeit.repeat(make(PY), number=1, repeat=args.repeat)) * 1e3
        t_cy = min(timeit.repeat(make(CY), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:32s} {t_py:12.2f} {t_cy:12.2f} {t_py / t_cy:8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
