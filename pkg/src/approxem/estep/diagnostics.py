"""Numerical check that approximate posteriors approach the exact one in L².

``l2_posterior_gap`` evaluates ``max_θ ∫ (p̃_θ,n(z) - p_θ(z))² dz`` over a
finite grid of parameters spanning a compact set.
"""
import itertools

import numpy as np

from approxem.estep.riemann import riemann_posterior_1d
from approxem.estep.tempering import temper_step_posterior
from approxem.models.betagauss import BetaGaussian1D, BetaGaussParams1D, bg_complete_likelihood


def compact_grid(box, points_per_axis=5):
    """Cartesian grid with ``points_per_axis`` evenly spaced values per ``(lo, hi)`` pair."""
    axes = [np.linspace(lo, hi, points_per_axis) for lo, hi in box]
    return list(itertools.product(*axes))


def l2_posterior_gap(approx, reference, thetas, z=None):
    """Largest squared L² distance between two posterior families.

    ``approx(θ)`` and ``reference(θ)`` return density values on the grid
    ``z`` (integrated with the trapezoid rule) or, when ``z`` is None,
    probability vectors over a finite latent space (summed).
    """
    worst = 0.0
    for theta in thetas:
        d = np.asarray(approx(theta), dtype=float) - np.asarray(reference(theta), dtype=float)
        gap = float(np.sum(d * d)) if z is None else float(np.trapezoid(d * d, z))
        worst = max(worst, gap)
    return worst


def bg1d_reference_density(theta, x, z):
    """Exact Beta-Gaussian posterior density on the grid ``z``, normalised by the trapezoid rule."""
    lh = bg_complete_likelihood(theta, z, x)
    p = np.exp(lh - lh.max())
    return p / np.trapezoid(p, z)


def bg1d_riemann_gap(
    n,
    box=((1.0, 3.0), (4.0, 6.0), (1.0, 2.0)),
    x=(1.0, 3.0, 5.0),
    temperature=1.0,
    panels=10**5,
    points_per_axis=5,
):
    """Riemann (optionally tempered) gap for the 1D Beta-Gaussian model.

    ``box`` bounds (α, λ, σ); the maximum is also taken over the
    observation values in ``x``.
    """
    model = BetaGaussian1D()
    z = np.linspace(0.0, 1.0, panels + 1)
    thetas = [BetaGaussParams1D(a, l, s * s) for a, l, s in compact_grid(box, points_per_axis)]
    worst = 0.0
    for xi in np.atleast_1d(x):

        def approx(theta, xi=xi):
            post = riemann_posterior_1d(model, theta, xi, n)
            if temperature != 1.0:
                post = temper_step_posterior(post, temperature)
            return post.evaluate(z)

        worst = max(worst, l2_posterior_gap(approx, lambda th, xi=xi: bg1d_reference_density(th, xi, z), thetas, z))
    return worst
