"""Gaussian mixture model with full covariances."""
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cholesky, solve_triangular
from scipy.special import logsumexp

from approxem.errors import DegenerateStatistics, DimensionMismatch, InvalidConfig, SingularCovariance
from approxem.models.base import CurvedExpFamilyModel
from approxem.models.data import Dataset

#: smallest covariance eigenvalue accepted by the M-step
EIG_FLOOR = 1e-10
_LOG_2PI = np.log(2.0 * np.pi)


@dataclass(frozen=True)
class GmmParams:
    weights: np.ndarray  # (K,)
    means: np.ndarray  # (K, p)
    covariances: np.ndarray  # (K, p, p)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        mu = np.asarray(self.means, dtype=float)
        cov = np.asarray(self.covariances, dtype=float)
        if mu.ndim == 1:
            mu = mu[:, None]
        if cov.ndim == 1:
            cov = cov[:, None, None]
        K, p = mu.shape
        if w.shape != (K,) or cov.shape != (K, p, p):
            raise DimensionMismatch(f"inconsistent GMM shapes {w.shape}, {mu.shape}, {cov.shape}")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "means", mu)
        object.__setattr__(self, "covariances", cov)

    @property
    def K(self):
        return self.means.shape[0]

    @property
    def p(self):
        return self.means.shape[1]

    @property
    def precisions(self):
        return np.linalg.inv(self.covariances)

    def validate(self):
        if np.any(self.weights <= 0) or (self.K > 1 and np.any(self.weights >= 1)):
            raise InvalidConfig("mixture weights must lie in (0, 1)")
        if abs(self.weights.sum() - 1.0) > 1e-12:
            raise InvalidConfig("mixture weights must sum to 1")
        if not np.allclose(self.covariances, np.swapaxes(self.covariances, 1, 2)):
            raise InvalidConfig("covariances must be symmetric")
        if np.any(np.linalg.eigvalsh(self.covariances) <= 0):
            raise SingularCovariance("covariances must be positive definite")
        return self

    def flat(self):
        return np.concatenate([self.weights, self.means.ravel(), self.covariances.ravel()])

    def names(self):
        K, p = self.K, self.p
        return (
            [f"pi_{k}" for k in range(K)]
            + [f"mu_{k}_{d}" for k in range(K) for d in range(p)]
            + [f"cov_{k}_{a}_{b}" for k in range(K) for a in range(p) for b in range(p)]
        )

    def constraint_values(self):
        """Quantities that must stay bounded away from 0: weights and covariance eigenvalues."""
        return np.concatenate([self.weights, np.linalg.eigvalsh(self.covariances).ravel()])

    @classmethod
    def from_flat(cls, vec, K, p):
        vec = np.asarray(vec, dtype=float)
        w = vec[:K]
        mu = vec[K : K + K * p].reshape(K, p)
        cov = vec[K + K * p :].reshape(K, p, p)
        return cls(w, mu, cov)

    def permuted(self, perm):
        perm = np.asarray(perm)
        return GmmParams(self.weights[perm], self.means[perm], self.covariances[perm])


def gmm_log_joint(theta, x):
    """``ln π_k + ln N(x_i; μ_k, Σ_k)`` as an (N, K) array."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.shape[1] != theta.p:
        raise DimensionMismatch(f"data dimension {x.shape[1]} != model dimension {theta.p}")
    out = np.empty((x.shape[0], theta.K))
    for k in range(theta.K):
        try:
            L = cholesky(theta.covariances[k], lower=True, check_finite=False)
        except LinAlgError as exc:
            raise SingularCovariance(f"covariance {k} is not positive definite") from exc
        diag = np.diag(L)
        if np.any(diag <= 0) or not np.all(np.isfinite(diag)):
            raise SingularCovariance(f"covariance {k} is numerically singular")
        sol = solve_triangular(L, (x - theta.means[k]).T, lower=True, check_finite=False)
        maha = np.einsum("ij,ij->j", sol, sol)
        logdet = 2.0 * np.sum(np.log(diag))
        with np.errstate(divide="ignore"):
            out[:, k] = np.log(theta.weights[k]) - 0.5 * (theta.p * _LOG_2PI + logdet + maha)
    return out


def gmm_responsibilities(theta, data):
    """Posterior class probabilities, rows normalised in the log domain."""
    lj = gmm_log_joint(theta, _as_x(data))
    return np.exp(lj - logsumexp(lj, axis=1, keepdims=True))


def gmm_neg_log_likelihood(theta, data):
    return -float(np.sum(logsumexp(gmm_log_joint(theta, _as_x(data)), axis=1)))


def gmm_m_step(resp, data, eig_floor=EIG_FLOOR):
    """Maximise the expected complete log-likelihood given responsibilities.

    Uses the responsibility-weighted scatter about the new means,
    normalised by each component's mass (the biased estimator).
    """
    x = _as_x(data)
    resp = np.asarray(resp, dtype=float)
    N = x.shape[0]
    Nk = resp.sum(axis=0)
    _check_mass(Nk, N)
    means = (resp.T @ x) / Nk[:, None]
    K, p = means.shape
    cov = np.empty((K, p, p))
    for k in range(K):
        d = x - means[k]
        cov[k] = (resp[:, k, None] * d).T @ d / Nk[k]
        cov[k] = 0.5 * (cov[k] + cov[k].T)
    _check_eigs(cov, eig_floor)
    return GmmParams(Nk / N, means, cov)


def _check_mass(Nk, N):
    if np.any(Nk < 10 * np.finfo(float).eps * N):
        raise DegenerateStatistics(f"component mass vanished: {Nk.min():.3g}")


def _check_eigs(cov, eig_floor):
    if not np.all(np.isfinite(cov)):
        raise DegenerateStatistics("non-finite covariance")
    low = np.linalg.eigvalsh(cov).min()
    if low < eig_floor:
        raise DegenerateStatistics(f"covariance eigenvalue {low:.3g} below floor {eig_floor:g}")


def _as_x(data):
    return data.x if isinstance(data, Dataset) else np.atleast_2d(np.asarray(data, dtype=float).T).T


class GaussianMixture(CurvedExpFamilyModel):
    """K-component, p-dimensional Gaussian mixture.

    Sufficient statistic of one observation, per component k and in
    component order: ``1[z=k]``, ``1[z=k] x`` (p entries) and
    ``1[z=k] vec(x xᵀ)`` (p² entries), so ``q = K (1 + p + p²)``.
    """

    name = "gmm"
    latent_kind = "discrete"

    def __init__(self, K, p, eig_floor=EIG_FLOOR):
        if K < 1 or p < 1:
            raise InvalidConfig("K and p must be positive")
        self.K = int(K)
        self.p = int(p)
        self.eig_floor = eig_floor
        self._cached = None

    def _log_joint(self, theta, data):
        """(log joint, row log-normaliser) for ``theta`` on ``data``.

        One-slot cache keyed on object identity: an EM run evaluates the
        nll of θ_n and then the E-step at the same θ_n.
        """
        c = self._cached
        if c is not None and c[0] is theta and c[1] is data:
            return c[2], c[3]
        lj = gmm_log_joint(theta, _as_x(data))
        lse = logsumexp(lj, axis=1, keepdims=True)
        self._cached = (theta, data, lj, lse)
        return lj, lse

    @property
    def param_dim(self):
        return self.K * (1 + self.p + self.p * self.p)

    @property
    def suffstat_dim(self):
        return self.K * (1 + self.p + self.p * self.p)

    @property
    def _block(self):
        return 1 + self.p + self.p * self.p

    def psi(self, theta):
        return 0.0

    def phi(self, theta):
        out = np.empty(self.suffstat_dim)
        prec = theta.precisions
        for k in range(self.K):
            mu = theta.means[k]
            P = prec[k]
            _, logdet_prec = np.linalg.slogdet(P)
            o = k * self._block
            out[o] = np.log(theta.weights[k]) + 0.5 * logdet_prec - 0.5 * self.p * _LOG_2PI - 0.5 * mu @ P @ mu
            out[o + 1 : o + 1 + self.p] = P @ mu
            out[o + 1 + self.p : o + self._block] = -0.5 * P.ravel()
        return out

    def sufficient_stat(self, z, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros(self.suffstat_dim)
        o = int(z) * self._block
        out[o] = 1.0
        out[o + 1 : o + 1 + self.p] = x
        out[o + 1 + self.p : o + self._block] = np.outer(x, x).ravel()
        return out

    def log_complete_likelihood_direct(self, z, theta, x):
        """``ln π_z + ln N(x; μ_z, Σ_z)`` evaluated without the exponential-family split."""
        return float(gmm_log_joint(theta, np.atleast_2d(x))[0, int(z)])

    def expected_stat_from_weights(self, weights, data):
        x = _as_x(data)
        W = np.asarray(weights, dtype=float)
        N = x.shape[0]
        s = np.empty((self.K, self._block))
        s[:, 0] = W.sum(axis=0)
        s[:, 1 : 1 + self.p] = W.T @ x
        xx = np.einsum("ia,ib->iab", x, x).reshape(N, -1)
        s[:, 1 + self.p :] = W.T @ xx
        return s.ravel() / N

    def posterior_log_weights(self, theta, data):
        lj, lse = self._log_joint(theta, data)
        return lj - lse

    def exact_expected_stat(self, theta, data):
        return self.expected_stat_from_weights(np.exp(self.posterior_log_weights(theta, data)), data)

    def m_step(self, s):
        s = np.asarray(s, dtype=float).reshape(self.K, self._block)
        mass = s[:, 0]
        # s is an average over N observations; the mass floor is stated per observation
        if np.any(mass < 10 * np.finfo(float).eps):
            raise DegenerateStatistics(f"component mass vanished: {mass.min():.3g}")
        means = s[:, 1 : 1 + self.p] / mass[:, None]
        second = s[:, 1 + self.p :].reshape(self.K, self.p, self.p) / mass[:, None, None]
        cov = second - np.einsum("ka,kb->kab", means, means)
        cov = 0.5 * (cov + np.swapaxes(cov, 1, 2))
        _check_eigs(cov, self.eig_floor)
        return GmmParams(mass / mass.sum(), means, cov)

    def observed_neg_log_lik(self, theta, data):
        return -float(np.sum(self._log_joint(theta, data)[1]))

    def simulate(self, theta, N, rng):
        labels = rng.choice(self.K, size=N, p=theta.weights)
        chol = np.linalg.cholesky(theta.covariances)
        eps = rng.standard_normal((N, self.p))
        x = theta.means[labels] + np.einsum("nab,nb->na", chol[labels], eps)
        return Dataset(x, labels=labels)

    def param_from_flat(self, vec):
        return GmmParams.from_flat(vec, self.K, self.p)
