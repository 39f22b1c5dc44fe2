"""Tempering of discrete and step-function posteriors: p ↦ p^(1/T) / ∫ p^(1/T).

Any finite non-zero T is accepted. T < 0 (only reachable with an
unclamped schedule) favours the least likely latent values.
"""
import numpy as np
from scipy.special import logsumexp

from approxem.errors import NonFiniteWeight
from approxem.estep.riemann import StepPosterior


def _check_temperature(T):
    if T == 0 or not np.isfinite(T):
        raise ValueError(f"temperature must be finite and non-zero, got {T}")


def temper_log_weights(log_weights, T, axis=-1):
    """Temper normalised log-probabilities along ``axis`` and renormalise."""
    _check_temperature(T)
    lw = np.asarray(log_weights, dtype=float) / T
    if np.any(np.isnan(lw)) or np.any(lw == np.inf):
        raise NonFiniteWeight("non-finite log weights")
    return lw - logsumexp(lw, axis=axis, keepdims=True)


def temper_discrete(weights, T):
    """Tempered probability vector (or rows of a matrix)."""
    w = np.asarray(weights, dtype=float)
    if np.any(~np.isfinite(w)) or np.any(w < 0):
        raise NonFiniteWeight("weights must be finite and non-negative")
    with np.errstate(divide="ignore"):
        lw = np.log(w)
    return np.exp(temper_log_weights(lw, T))


def temper_step_posterior(post, T):
    _check_temperature(T)
    lw = post.log_weights / T
    if np.any(np.isnan(lw)) or np.any(lw == np.inf):
        raise NonFiniteWeight("non-finite log weights")
    log_norm = logsumexp(lw) + np.log(post.cell_measure)
    return StepPosterior(post.dim, post.n_per_axis, lw - log_norm)
