"""Hot-loop kernels with a compiled backend and a NumPy fallback.

The Cython extension ``approxem._kernels`` is used when it was built;
otherwise, or when ``APPROXEM_PURE_PYTHON=1`` is set, the functions come
from ``approxem._fallback``. ``BACKEND`` names the active choice.
"""
import os

from approxem import _fallback

if os.environ.get("APPROXEM_PURE_PYTHON") == "1":
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from approxem import _kernels as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _fallback
        BACKEND = "python"

riemann_moments_1d = _impl.riemann_moments_1d
riemann_moments_2d = _impl.riemann_moments_2d
bg1d_log_marginal = _impl.bg1d_log_marginal
bg2d_log_marginal = _impl.bg2d_log_marginal

__all__ = [
    "BACKEND",
    "riemann_moments_1d",
    "riemann_moments_2d",
    "bg1d_log_marginal",
    "bg2d_log_marginal",
]
