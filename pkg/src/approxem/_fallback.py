"""Pure NumPy versions of the hot kernels.

Signatures and return layouts match ``approxem._kernels`` exactly; see
``approxem.kernels`` for the dispatch.
"""
import numpy as np
from scipy.special import logsumexp

from approxem._cells import anchors, cell_integrals

_LOG_2PI = np.log(2.0 * np.pi)


def _log_prior_grid(alpha, z):
    # (alpha - 1) ln z without the 0 * (-inf) trap at alpha == 1
    if alpha == 1.0:
        return np.zeros_like(z)
    return (alpha - 1.0) * np.log(z)


def riemann_moments_1d(x, alpha, lam, sigma2, n, inv_temp, zeta):
    """Per-observation step-posterior moments ``[E ln z, E z, E z²]``, shape (N, 3).

    The step posterior takes the value ``h(z_k)^β / (1/n Σ_l h(z_l)^β)`` on
    cell ``k``; moments integrate each integrand exactly over each cell.
    """
    x = np.asarray(x, dtype=float)
    z = anchors(n, zeta)
    base = _log_prior_grid(alpha, z)
    lw = inv_temp * (base[None, :] - (x[:, None] - lam * z[None, :]) ** 2 / (2.0 * sigma2))
    lw -= logsumexp(lw, axis=1, keepdims=True)
    w = np.exp(lw) * n
    A = np.stack([cell_integrals("ln_z", n), cell_integrals("z", n), cell_integrals("z2", n)], axis=1)
    return w @ A


def riemann_moments_2d(x1, x2, alpha1, alpha2, lam1, lam2, sigma2_1, sigma2_2, n, inv_temp, zeta):
    """Moments ``[E ln z1, E ln z2, E z1, E z2, E z1², E z2², E z1 z2]``, shape (N, 7)."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    z = anchors(n, zeta)
    b1 = _log_prior_grid(alpha1, z)
    b2 = _log_prior_grid(alpha2, z)
    c1 = 1.0 / (2.0 * sigma2_1)
    c2 = 1.0 / (2.0 * sigma2_2)
    Aln = cell_integrals("ln_z", n)
    Az = cell_integrals("z", n)
    Az2 = cell_integrals("z2", n)
    prior = b1[:, None] + b2[None, :]
    z1 = z[:, None]
    z2 = z[None, :]
    out = np.empty((x1.shape[0], 7))
    for i in range(x1.shape[0]):
        r1 = x1[i] - lam1 * z1 - z2
        r2 = x2[i] - z1 - lam2 * z2
        lw = inv_temp * (prior - c1 * r1 * r1 - c2 * r2 * r2)
        lw -= lw.max()
        e = np.exp(lw)
        S = e.sum()
        m1 = e.sum(axis=1)
        m2 = e.sum(axis=0)
        out[i, 0] = m1 @ Aln
        out[i, 1] = m2 @ Aln
        out[i, 2] = m1 @ Az
        out[i, 3] = m2 @ Az
        out[i, 4] = m1 @ Az2
        out[i, 5] = m2 @ Az2
        out[i, 6] = n * (Az @ e @ Az)
        out[i, :] *= n / S
    return out


def bg1d_log_marginal(x, alpha, lam, sigma2, nodes, weights):
    """``ln ∫_0^1 h(z; θ) dz`` per observation by a fixed quadrature rule on [0, 1].

    For ``alpha < 1`` the substitution ``u = z^alpha`` removes the endpoint
    singularity: the integral becomes ``∫_0^1 N(x; λ u^{1/α}, σ²) du``.
    """
    x = np.asarray(x, dtype=float)
    if alpha < 1.0:
        z = nodes ** (1.0 / alpha)
        lp = np.zeros_like(z)
    else:
        z = nodes
        lp = np.log(alpha) + _log_prior_grid(alpha, z)
    lw = np.log(weights) + lp
    ll = -0.5 * (_LOG_2PI + np.log(sigma2)) - (x[:, None] - lam * z[None, :]) ** 2 / (2.0 * sigma2)
    return logsumexp(ll + lw[None, :], axis=1)


def _axis_rule(alpha, nodes, weights):
    if alpha < 1.0:
        return nodes ** (1.0 / alpha), np.log(weights)
    return nodes, np.log(weights) + np.log(alpha) + _log_prior_grid(alpha, nodes)


def bg2d_log_marginal(x1, x2, alpha1, alpha2, lam1, lam2, sigma2_1, sigma2_2, nodes, weights):
    """Two-dimensional analogue of :func:`bg1d_log_marginal` on a tensor rule."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    z1, lw1 = _axis_rule(alpha1, nodes, weights)
    z2, lw2 = _axis_rule(alpha2, nodes, weights)
    const = -0.5 * (2 * _LOG_2PI + np.log(sigma2_1) + np.log(sigma2_2))
    lw = lw1[:, None] + lw2[None, :] + const
    Z1 = z1[:, None]
    Z2 = z2[None, :]
    out = np.empty(x1.shape[0])
    for i in range(x1.shape[0]):
        r1 = x1[i] - lam1 * Z1 - Z2
        r2 = x2[i] - Z1 - lam2 * Z2
        out[i] = logsumexp(lw - r1 * r1 / (2.0 * sigma2_1) - r2 * r2 / (2.0 * sigma2_2))
    return out
