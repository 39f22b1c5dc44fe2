"""Gaussian observations driven by Beta(α, 1) latent variables.

1D model::

    z ~ Beta(α, 1),   x = λ z + σ ε

2D model, with independent z1 ~ Beta(α1, 1), z2 ~ Beta(α2, 1)::

    x1 = λ1 z1 + z2 + σ1 ε1
    x2 = z1 + λ2 z2 + σ2 ε2

The posterior normaliser has no closed form, so these models only
support Riemann (and tempered Riemann) E-steps. Observed likelihoods are
evaluated by composite Gauss-Legendre quadrature on [0, 1] (per axis),
after the substitution u = z^α when α < 1.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import xlogy

from approxem import kernels
from approxem.errors import DegenerateStatistics, InvalidConfig, NonFiniteWeight
from approxem.models.base import CurvedExpFamilyModel
from approxem.models.data import Dataset

#: the k = 0 Riemann anchor sits at ZETA / n instead of 0 (z^(α-1) blows up there for α < 1)
ZETA = 1e-3
_LOG_2PI = np.log(2.0 * np.pi)


@lru_cache(maxsize=16)
def composite_gauss_legendre(panels, order, grading=0.15, depth=16):
    """Nodes and weights of a composite Gauss-Legendre rule on [0, 1].

    ``panels`` uniform panels, with the first one split geometrically
    (ratio ``grading``, ``depth`` levels) toward 0, where z^(α-1) is not
    smooth.
    """
    t, w = np.polynomial.legendre.leggauss(order)
    graded = (1.0 / panels) * grading ** np.arange(depth, 0, -1)
    edges = np.concatenate([[0.0], graded, np.linspace(1.0 / panels, 1.0, panels)])
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


@dataclass(frozen=True)
class BetaGaussParams1D:
    alpha: float
    lam: float
    sigma2: float

    def validate(self):
        if not (self.alpha > 0 and self.sigma2 > 0):
            raise InvalidConfig("alpha and sigma2 must be positive")
        return self

    @property
    def sigma(self):
        return float(np.sqrt(self.sigma2))

    def flat(self):
        return np.array([self.alpha, self.lam, self.sigma2])

    @staticmethod
    def names():
        return ["alpha", "lambda", "sigma2"]

    def constraint_values(self):
        return np.array([self.alpha, self.sigma2])

    @classmethod
    def from_flat(cls, vec):
        a, l, s = (float(v) for v in vec)
        return cls(a, l, s)


@dataclass(frozen=True)
class BetaGaussParams2D:
    alpha1: float
    alpha2: float
    lam1: float
    lam2: float
    sigma2_1: float
    sigma2_2: float

    def validate(self):
        if min(self.alpha1, self.alpha2, self.sigma2_1, self.sigma2_2) <= 0:
            raise InvalidConfig("alphas and variances must be positive")
        return self

    def flat(self):
        return np.array([self.alpha1, self.alpha2, self.lam1, self.lam2, self.sigma2_1, self.sigma2_2])

    @staticmethod
    def names():
        return ["alpha1", "alpha2", "lambda1", "lambda2", "sigma2_1", "sigma2_2"]

    def constraint_values(self):
        return np.array([self.alpha1, self.alpha2, self.sigma2_1, self.sigma2_2])

    @classmethod
    def from_flat(cls, vec):
        return cls(*(float(v) for v in vec))


def bg_complete_likelihood(theta, z, x):
    """ln h(z; θ) = ln α + (α-1) ln z - ½ ln(2πσ²) - (x - λz)² / 2σ²."""
    z = np.asarray(z, dtype=float)
    with np.errstate(divide="ignore"):
        return (
            np.log(theta.alpha)
            + xlogy(theta.alpha - 1.0, z)
            - 0.5 * (_LOG_2PI + np.log(theta.sigma2))
            - (x - theta.lam * z) ** 2 / (2.0 * theta.sigma2)
        )


def bg2d_complete_likelihood(theta, z1, z2, x1, x2):
    z1 = np.asarray(z1, dtype=float)
    z2 = np.asarray(z2, dtype=float)
    r1 = x1 - theta.lam1 * z1 - z2
    r2 = x2 - z1 - theta.lam2 * z2
    with np.errstate(divide="ignore"):
        return (
            np.log(theta.alpha1)
            + np.log(theta.alpha2)
            + xlogy(theta.alpha1 - 1.0, z1)
            + xlogy(theta.alpha2 - 1.0, z2)
            - 0.5 * (2 * _LOG_2PI + np.log(theta.sigma2_1) + np.log(theta.sigma2_2))
            - r1 * r1 / (2.0 * theta.sigma2_1)
            - r2 * r2 / (2.0 * theta.sigma2_2)
        )


def _check_moments(m):
    if not np.all(np.isfinite(m)):
        raise NonFiniteWeight("Riemann E-step produced non-finite moments")
    return m


class BetaGaussian1D(CurvedExpFamilyModel):
    """Sufficient statistic ``S(z, x) = (ln z, x z, z², x²)``."""

    name = "bg1d"
    latent_kind = "bounded"
    latent_dim = 1
    param_dim = 3
    suffstat_dim = 4

    def __init__(self, quad_panels=64, quad_order=16, zeta=ZETA):
        self.quad_panels = quad_panels
        self.quad_order = quad_order
        self.zeta = zeta

    @property
    def nll_method(self):
        return f"composite Gauss-Legendre {self.quad_panels}x{self.quad_order} graded toward 0, u=z^alpha for alpha<1"

    def psi(self, theta):
        return np.log(theta.alpha) - 0.5 * (_LOG_2PI + np.log(theta.sigma2))

    def phi(self, theta):
        s2 = theta.sigma2
        return np.array([theta.alpha - 1.0, theta.lam / s2, -theta.lam**2 / (2 * s2), -1.0 / (2 * s2)])

    def sufficient_stat(self, z, x):
        x = float(np.ravel(x)[0])
        with np.errstate(divide="ignore"):
            return np.array([np.log(z), x * z, z * z, x * x])

    def log_complete_likelihood_direct(self, z, theta, x):
        return float(bg_complete_likelihood(theta, z, float(np.ravel(x)[0])))

    def log_h(self, theta, z, x):
        return bg_complete_likelihood(theta, z, float(np.ravel(x)[0]))

    def riemann_expected_stat(self, theta, data, n_cells, inv_temp=1.0):
        x = data.x[:, 0]
        m = _check_moments(
            kernels.riemann_moments_1d(x, theta.alpha, theta.lam, theta.sigma2, int(n_cells), float(inv_temp), self.zeta)
        )
        return np.array([m[:, 0].mean(), (x * m[:, 1]).mean(), m[:, 2].mean(), (x * x).mean()])

    def m_step(self, s):
        e_ln, e_xz, e_z2, e_x2 = s
        if not e_ln < 0:
            raise DegenerateStatistics("mean of Ψ∘ln z must be negative")
        if not e_z2 > 0:
            raise DegenerateStatistics("mean of Ψ∘z² must be positive")
        alpha = -1.0 / e_ln
        lam = e_xz / e_z2
        sigma2 = e_x2 - 2.0 * lam * e_xz + lam * lam * e_z2
        if not sigma2 > 0:
            raise DegenerateStatistics(f"non-positive variance estimate {sigma2:.3g}")
        return BetaGaussParams1D(alpha, lam, sigma2)

    def log_marginal(self, theta, data):
        nodes, weights = composite_gauss_legendre(self.quad_panels, self.quad_order)
        return kernels.bg1d_log_marginal(data.x[:, 0], theta.alpha, theta.lam, theta.sigma2, nodes, weights)

    def observed_neg_log_lik(self, theta, data):
        return -float(np.sum(self.log_marginal(theta, data)))

    def simulate(self, theta, N, rng):
        z = rng.random(N) ** (1.0 / theta.alpha)
        x = theta.lam * z + theta.sigma * rng.standard_normal(N)
        return Dataset(x[:, None])

    def param_from_flat(self, vec):
        return BetaGaussParams1D.from_flat(vec)


class BetaGaussian2D(CurvedExpFamilyModel):
    """Sufficient statistic, in order::

        ln z1, ln z2, x1 z1, x1 z2, x2 z1, x2 z2, z1², z2², z1 z2, x1², x2²
    """

    name = "bg2d"
    latent_kind = "bounded"
    latent_dim = 2
    param_dim = 6
    suffstat_dim = 11

    def __init__(self, quad_panels=16, quad_order=8, zeta=ZETA):
        self.quad_panels = quad_panels
        self.quad_order = quad_order
        self.zeta = zeta

    @property
    def nll_method(self):
        return (f"tensor composite Gauss-Legendre {self.quad_panels}x{self.quad_order} per axis graded toward 0, "
                "u=z^alpha per axis for alpha<1")

    def psi(self, theta):
        return (
            np.log(theta.alpha1)
            + np.log(theta.alpha2)
            - 0.5 * (2 * _LOG_2PI + np.log(theta.sigma2_1) + np.log(theta.sigma2_2))
        )

    def phi(self, theta):
        c1 = 1.0 / (2.0 * theta.sigma2_1)
        c2 = 1.0 / (2.0 * theta.sigma2_2)
        l1, l2 = theta.lam1, theta.lam2
        return np.array(
            [
                theta.alpha1 - 1.0,
                theta.alpha2 - 1.0,
                2 * l1 * c1,
                2 * c1,
                2 * c2,
                2 * l2 * c2,
                -(l1 * l1 * c1 + c2),
                -(c1 + l2 * l2 * c2),
                -2 * (l1 * c1 + l2 * c2),
                -c1,
                -c2,
            ]
        )

    def sufficient_stat(self, z, x):
        z1, z2 = z
        x1, x2 = np.ravel(x)[:2]
        with np.errstate(divide="ignore"):
            return np.array(
                [np.log(z1), np.log(z2), x1 * z1, x1 * z2, x2 * z1, x2 * z2, z1 * z1, z2 * z2, z1 * z2, x1 * x1, x2 * x2]
            )

    def log_complete_likelihood_direct(self, z, theta, x):
        x1, x2 = np.ravel(x)[:2]
        return float(bg2d_complete_likelihood(theta, z[0], z[1], x1, x2))

    def log_h(self, theta, z1, z2, x):
        x1, x2 = np.ravel(x)[:2]
        return bg2d_complete_likelihood(theta, z1, z2, x1, x2)

    def riemann_expected_stat(self, theta, data, n_cells, inv_temp=1.0):
        x1 = data.x[:, 0]
        x2 = data.x[:, 1]
        m = _check_moments(
            kernels.riemann_moments_2d(
                x1, x2, theta.alpha1, theta.alpha2, theta.lam1, theta.lam2,
                theta.sigma2_1, theta.sigma2_2, int(n_cells), float(inv_temp), self.zeta,
            )
        )
        ln1, ln2, ez1, ez2, ez11, ez22, ez12 = m.T
        return np.array(
            [
                ln1.mean(), ln2.mean(),
                (x1 * ez1).mean(), (x1 * ez2).mean(), (x2 * ez1).mean(), (x2 * ez2).mean(),
                ez11.mean(), ez22.mean(), ez12.mean(),
                (x1 * x1).mean(), (x2 * x2).mean(),
            ]
        )

    def m_step(self, s):
        ln1, ln2, x1z1, x1z2, x2z1, x2z2, z11, z22, z12, x11, x22 = s
        if not (ln1 < 0 and ln2 < 0):
            raise DegenerateStatistics("means of Ψ∘ln z must be negative")
        if not (z11 > 0 and z22 > 0):
            raise DegenerateStatistics("means of Ψ∘z² must be positive")
        lam1 = (x1z1 - z12) / z11
        lam2 = (x2z2 - z12) / z22
        # E (x1 - λ1 z1 - z2)²  and  E (x2 - z1 - λ2 z2)²
        s1 = x11 + lam1 * lam1 * z11 + z22 - 2 * lam1 * x1z1 - 2 * x1z2 + 2 * lam1 * z12
        s2 = x22 + z11 + lam2 * lam2 * z22 - 2 * x2z1 - 2 * lam2 * x2z2 + 2 * lam2 * z12
        if not (s1 > 0 and s2 > 0):
            raise DegenerateStatistics("non-positive variance estimate")
        return BetaGaussParams2D(-1.0 / ln1, -1.0 / ln2, lam1, lam2, s1, s2)

    def log_marginal(self, theta, data):
        nodes, weights = composite_gauss_legendre(self.quad_panels, self.quad_order)
        return kernels.bg2d_log_marginal(
            data.x[:, 0], data.x[:, 1], theta.alpha1, theta.alpha2, theta.lam1, theta.lam2,
            theta.sigma2_1, theta.sigma2_2, nodes, weights,
        )

    def observed_neg_log_lik(self, theta, data):
        return -float(np.sum(self.log_marginal(theta, data)))

    def simulate(self, theta, N, rng):
        z1 = rng.random(N) ** (1.0 / theta.alpha1)
        z2 = rng.random(N) ** (1.0 / theta.alpha2)
        e = rng.standard_normal((N, 2))
        x1 = theta.lam1 * z1 + z2 + np.sqrt(theta.sigma2_1) * e[:, 0]
        x2 = z1 + theta.lam2 * z2 + np.sqrt(theta.sigma2_2) * e[:, 1]
        return Dataset(np.column_stack([x1, x2]))

    def param_from_flat(self, vec):
        return BetaGaussParams2D.from_flat(vec)
