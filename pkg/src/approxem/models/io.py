"""Flat ``key = value`` text form of model parameters.

Example (one-dimensional Beta-Gaussian)::

    # approxem parameters
    model = bg1d
    alpha = 2
    lambda = 5
    sigma2 = 2.25

GMM files add ``K`` and ``p`` and list ``pi_k``, ``mu_k_d`` and
``cov_k_a_b`` in that order; the keys are exactly the trace CSV column
names. Floats are written with 17 significant digits.
"""
import numpy as np

from approxem.errors import InvalidConfig
from approxem.models.betagauss import BetaGaussParams1D, BetaGaussParams2D
from approxem.models.gmm import GmmParams


def format_float(v):
    return "%.17g" % v


def model_name_of(theta):
    if isinstance(theta, GmmParams):
        return "gmm"
    if isinstance(theta, BetaGaussParams1D):
        return "bg1d"
    if isinstance(theta, BetaGaussParams2D):
        return "bg2d"
    raise TypeError(f"unknown parameter type {type(theta).__name__}")


def params_to_text(theta):
    lines = ["# approxem parameters", f"model = {model_name_of(theta)}"]
    if isinstance(theta, GmmParams):
        lines += [f"K = {theta.K}", f"p = {theta.p}"]
    for name, v in zip(theta.names(), theta.flat()):
        lines.append(f"{name} = {format_float(v)}")
    return "\n".join(lines) + "\n"


def params_from_text(text):
    kv = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InvalidConfig(f"malformed parameter line: {raw!r}")
        k, v = (s.strip() for s in line.split("=", 1))
        kv[k] = v
    model = kv.pop("model", None)
    try:
        if model == "gmm":
            K, p = int(kv.pop("K")), int(kv.pop("p"))
            names = GmmParams.from_flat(np.zeros(K * (1 + p + p * p)), K, p).names()
            return GmmParams.from_flat([float(kv[n]) for n in names], K, p)
        if model == "bg1d":
            return BetaGaussParams1D.from_flat([float(kv[n]) for n in BetaGaussParams1D.names()])
        if model == "bg2d":
            return BetaGaussParams2D.from_flat([float(kv[n]) for n in BetaGaussParams2D.names()])
    except KeyError as exc:
        raise InvalidConfig(f"missing parameter {exc}") from exc
    raise InvalidConfig(f"unknown model {model!r}")


def write_params(theta, path):
    with open(path, "w") as fh:
        fh.write(params_to_text(theta))


def read_params(path):
    with open(path) as fh:
        return params_from_text(fh.read())
