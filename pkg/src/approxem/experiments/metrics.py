"""Error metrics after optimal cluster matching."""
import itertools
from dataclasses import dataclass

import numpy as np

from approxem.errors import DimensionMismatch

MAX_EXHAUSTIVE_K = 8


@dataclass(frozen=True)
class MetricReport:
    """Per true cluster k: ``mu_errors[k] = ‖μ̂_σ(k) − μ_k‖² / ‖μ_k‖²`` and
    ``kl[k] = KL(Σ_k, Σ̂_σ(k))`` (NaN when the run is degenerate)."""

    mu_errors: np.ndarray
    kl: np.ndarray
    nll: float
    degenerate: bool
    permutation: tuple

    def as_row(self):
        row = {}
        for k, v in enumerate(self.mu_errors):
            row[f"mu_err_{k}"] = float(v)
        for k, v in enumerate(self.kl):
            row[f"kl_{k}"] = float(v)
        row["nll"] = float(self.nll)
        row["degenerate"] = int(self.degenerate)
        row["permutation"] = "-".join(str(int(i)) for i in self.permutation)
        return row


def gaussian_kl(cov, cov_hat):
    """KL(N(0, Σ) ‖ N(0, Σ̂)) = ½(ln det Θ/det Θ̂ + tr(Σ Θ̂) − p) with Θ = Σ⁻¹."""
    cov = np.atleast_2d(cov)
    cov_hat = np.atleast_2d(cov_hat)
    p = cov.shape[0]
    _, ld = np.linalg.slogdet(cov)
    _, ld_hat = np.linalg.slogdet(cov_hat)
    # ln det Θ − ln det Θ̂ = ln det Σ̂ − ln det Σ
    return 0.5 * (ld_hat - ld + np.trace(np.linalg.solve(cov_hat, cov)) - p)


def best_permutation(est_means, true_means):
    """Permutation σ minimising Σ_k ‖μ̂_σ(k) − μ_k‖² (exhaustive; first minimiser in lexicographic order)."""
    K = true_means.shape[0]
    if K > MAX_EXHAUSTIVE_K:
        raise DimensionMismatch(f"exhaustive matching is limited to K <= {MAX_EXHAUSTIVE_K}")
    cost = ((est_means[:, None, :] - true_means[None, :, :]) ** 2).sum(axis=2)  # cost[i, k]
    best, best_cost = None, np.inf
    cols = np.arange(K)
    for perm in itertools.permutations(range(K)):
        c = cost[list(perm), cols].sum()
        if c < best_cost:
            best, best_cost = perm, c
    return best


def match_and_score(est, truth, nll=np.nan, degenerate=False):
    if est.K != truth.K or est.p != truth.p:
        raise DimensionMismatch(f"estimate is K={est.K}, p={est.p}; truth is K={truth.K}, p={truth.p}")
    perm = best_permutation(est.means, truth.means)
    m = est.means[list(perm)]
    mu_err = ((m - truth.means) ** 2).sum(axis=1) / (truth.means**2).sum(axis=1)
    if degenerate:
        kl = np.full(truth.K, np.nan)
    else:
        kl = np.array([gaussian_kl(truth.covariances[k], est.covariances[perm[k]]) for k in range(truth.K)])
    return MetricReport(mu_err, kl, float(nll), bool(degenerate), tuple(int(i) for i in perm))


def relative_squared_errors(est, truth):
    """``(θ̂_i − θ_i)² / θ_i²`` per named Beta-Gaussian parameter, with σ in place of σ²."""
    out = {}
    for name, a, b in zip(truth.names(), est.flat(), truth.flat()):
        if name.startswith("sigma2"):
            name, a, b = name.replace("sigma2", "sigma"), np.sqrt(a), np.sqrt(b)
        out[f"err_{name}"] = float((a - b) ** 2 / b**2)
    return out
