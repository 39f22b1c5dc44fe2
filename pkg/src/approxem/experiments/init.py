"""Initial parameters for the comparative experiments."""
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import chi2

from approxem.errors import InvalidConfig, TooFewPoints
from approxem.models.betagauss import BetaGaussParams1D, BetaGaussParams2D
from approxem.models.gmm import GmmParams

GMM_INIT_KINDS = ("barycenter", "two_v_one", "random_points")
BG_INIT_KINDS = ("fixed", "random")

#: Mahalanobis quantile defining the "core" of a cluster for two_v_one picks
CORE_QUANTILE = 0.9


@dataclass(frozen=True)
class InitSpec:
    """How to initialise a run.

    GMM kinds: ``barycenter`` (all means at the data centroid plus
    independent N(0, (perturb_scale · std)²) jitter), ``two_v_one`` (two
    means on observations of the isolated cluster, one on an observation of
    the lowest left cluster), ``random_points`` (K distinct observations).
    Beta-Gaussian kinds: ``fixed`` (``values``) and ``random`` (each
    parameter uniform on ``ranges``; σ is drawn, σ² stored).
    """

    kind: str = "barycenter"
    perturb_scale: float = 1e-3
    values: dict = field(default_factory=dict)
    ranges: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in GMM_INIT_KINDS + BG_INIT_KINDS:
            raise InvalidConfig(f"unknown init kind {self.kind!r}")
        if self.kind == "barycenter" and not self.perturb_scale > 0:
            raise InvalidConfig("barycenter perturb_scale must be > 0: identical means never separate")

    def to_dict(self):
        d = {"kind": self.kind}
        if self.kind == "barycenter":
            d["perturb_scale"] = self.perturb_scale
        if self.kind == "fixed":
            d["values"] = dict(self.values)
        if self.kind == "random":
            d["ranges"] = {k: list(v) for k, v in self.ranges.items()}
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        if "ranges" in d:
            d["ranges"] = {k: tuple(v) for k, v in d["ranges"].items()}
        try:
            return cls(**d)
        except TypeError as exc:
            raise InvalidConfig(f"bad init spec: {exc}") from exc


def _gmm_start(data, means):
    x = data.x
    cov = np.atleast_2d(np.cov(x, rowvar=False, bias=True))
    K = means.shape[0]
    return GmmParams(np.full(K, 1.0 / K), means, np.repeat(cov[None], K, axis=0))


def isolated_label(data):
    """Label of the cluster whose centroid is farthest from its nearest neighbour."""
    if data.labels is None:
        raise InvalidConfig("two_v_one initialisation needs labelled (simulated) data")
    labels = np.unique(data.labels)
    cent = np.array([data.x[data.labels == k].mean(axis=0) for k in labels])
    d = np.linalg.norm(cent[:, None] - cent[None], axis=2)
    np.fill_diagonal(d, np.inf)
    return labels[int(np.argmax(d.min(axis=1)))]


def _core_indices(data, label):
    idx = np.flatnonzero(data.labels == label)
    pts = data.x[idx]
    mu = pts.mean(axis=0)
    cov = np.atleast_2d(np.cov(pts, rowvar=False))
    diff = pts - mu
    m2 = np.einsum("ia,ab,ib->i", diff, np.linalg.inv(cov), diff)
    core = idx[m2 < chi2.ppf(CORE_QUANTILE, data.dim)]
    return core if core.size else idx


def initialize(spec, data, K, rng):
    """Initial GMM parameters: π uniform, every Σ_k the data covariance."""
    x = data.x
    if x.shape[0] == 0:
        raise TooFewPoints("empty dataset")
    if spec.kind == "barycenter":
        jitter = rng.standard_normal((K, x.shape[1])) * spec.perturb_scale * x.std(axis=0)
        return _gmm_start(data, x.mean(axis=0) + jitter)
    if spec.kind == "random_points":
        if x.shape[0] < K:
            raise TooFewPoints(f"need at least {K} observations, got {x.shape[0]}")
        return _gmm_start(data, x[rng.choice(x.shape[0], size=K, replace=False)])
    if spec.kind == "two_v_one":
        if K != 3:
            raise InvalidConfig("two_v_one initialisation is defined for K = 3")
        iso = isolated_label(data)
        right = _core_indices(data, iso)
        others = [k for k in np.unique(data.labels) if k != iso]
        # lowest of the remaining clusters along the last coordinate
        low = min(others, key=lambda k: data.x[data.labels == k, -1].mean())
        left = _core_indices(data, low)
        if right.size < 2:
            raise TooFewPoints("isolated cluster has fewer than two observations")
        pick = rng.choice(right, size=2, replace=False)
        means = np.vstack([x[pick], x[rng.choice(left)]])
        return _gmm_start(data, means)
    raise InvalidConfig(f"init kind {spec.kind!r} does not apply to a Gaussian mixture")


def initialize_bg(spec, model_name, rng):
    """Initial Beta-Gaussian parameters for ``bg1d`` or ``bg2d``."""
    cls = BetaGaussParams1D if model_name == "bg1d" else BetaGaussParams2D
    names = cls.names()
    if spec.kind == "fixed":
        missing = [n for n in names if n not in spec.values]
        if missing:
            raise InvalidConfig(f"fixed init is missing {missing}")
        return cls.from_flat([spec.values[n] for n in names]).validate()
    if spec.kind == "random":
        vals = []
        for n in names:
            if n.startswith("sigma2"):
                lo, hi = spec.ranges.get(n.replace("sigma2", "sigma"), (0.5, 3.0))
                vals.append(rng.uniform(lo, hi) ** 2)
            else:
                lo, hi = spec.ranges.get(n, DEFAULT_BG_RANGES[n.rstrip("_12")])
                vals.append(rng.uniform(lo, hi))
        return cls.from_flat(vals).validate()
    raise InvalidConfig(f"init kind {spec.kind!r} does not apply to a Beta-Gaussian model")


DEFAULT_BG_RANGES = {"alpha": (0.5, 4.0), "lambda": (1.0, 10.0)}
