"""Compare the compiled kernels with the NumPy fallback.

Usage::

    python benchmarks/bench_kernels.py [--repeat 5]

Each kernel is called with identical inputs through both backends; the
table reports the best wall time of ``--repeat`` runs, the speed-up and
the largest relative difference between the two outputs.
"""
import argparse
import timeit

import numpy as np

from approxem import _fallback
from approxem.models.betagauss import ZETA, composite_gauss_legendre

try:
    from approxem import _kernels
except ImportError:  # extension not built
    _kernels = None


def cases(rng):
    x = 5.0 * rng.beta(2.0, 1.0, 100) + 1.5 * rng.standard_normal(100)
    x1, x2 = rng.normal(2.0, 2.0, 100), rng.normal(-2.0, 3.0, 100)
    nodes, weights = composite_gauss_legendre(64, 16)
    nodes2, weights2 = composite_gauss_legendre(16, 8)
    return [
        ("riemann_moments_1d n=1100", "riemann_moments_1d", (x, 2.0, 5.0, 2.25, 1100, 1.0, ZETA)),
        ("riemann_moments_1d n=1100 T=150", "riemann_moments_1d", (x, 2.0, 5.0, 2.25, 1100, 1 / 150, ZETA)),
        ("riemann_moments_1d n=10000", "riemann_moments_1d", (x, 0.7, 5.0, 2.25, 10000, 1.0, ZETA)),
        ("riemann_moments_2d n=100", "riemann_moments_2d",
         (x1, x2, 1.0, 3.0, 10.0, -10.0, 4.0, 9.0, 100, 1.0, ZETA)),
        ("bg1d_log_marginal", "bg1d_log_marginal", (x, 2.0, 5.0, 2.25, nodes, weights)),
        ("bg1d_log_marginal alpha<1", "bg1d_log_marginal", (x, 0.3, 5.0, 2.25, nodes, weights)),
        ("bg2d_log_marginal", "bg2d_log_marginal",
         (x1, x2, 1.0, 3.0, 10.0, -10.0, 4.0, 9.0, nodes2, weights2)),
    ]


def best_time(fn, args, repeat):
    number = max(1, int(0.2 / max(timeit.timeit(lambda: fn(*args), number=1), 1e-6)))
    return min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeat)) / number


def max_rel_diff(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    if _kernels is None:
        print("compiled extension not available; build with `pip install -e . --no-build-isolation`")
        return 1
    print(f"{'kernel':34s} {'numpy [ms]':>11s} {'cython [ms]':>12s} {'speed-up':>9s} {'max rel diff':>13s}")
    for label, name, fargs in cases(np.random.default_rng(args.seed)):
        py, cy = getattr(_fallback, name), getattr(_kernels, name)
        t_py = best_time(py, fargs, args.repeat)
        t_cy = best_time(cy, fargs, args.repeat)
        diff = max_rel_diff(cy(*fargs), py(*fargs))
        print(f"{label:34s} {1e3 * t_py:11.3f} {1e3 * t_cy:12.3f} {t_py / t_cy:8.1f}x {diff:13.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
