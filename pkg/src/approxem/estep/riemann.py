"""Riemann step-function posteriors, the Ψ operator and the Beta-Gaussian M-steps.

A step posterior over [0, 1] (or [0, 1]²) is stored by its log density
values on the grid cells, anchored at the left endpoints ``k/n``. These
are explicit objects, one per observation; the EM providers use the
fused kernels in ``approxem.kernels`` instead, which compute the same
expectations without building them.
"""
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from approxem._cells import anchors, cell_integrals
from approxem.errors import AllZeroMass, DegenerateStatistics, NonFiniteWeight, UnknownIntegrand
from approxem.models.betagauss import BetaGaussParams1D, BetaGaussParams2D


@dataclass(frozen=True)
class StepPosterior:
    dim: int
    n_per_axis: int
    log_weights: np.ndarray  # length n (1D) or n*n, row-major over (k1, k2)

    @property
    def cell_measure(self):
        return float(self.n_per_axis) ** (-self.dim)

    @property
    def density(self):
        """Density values of the step function on each cell."""
        return np.exp(self.log_weights)

    def total_mass(self):
        return float(np.exp(logsumexp(self.log_weights)) * self.cell_measure)

    def grid(self):
        """Density values as an (n,) or (n, n) array."""
        d = self.density
        return d if self.dim == 1 else d.reshape(self.n_per_axis, self.n_per_axis)

    def evaluate(self, z):
        """Step density at points z in [0, 1] (1D only); z = 1 maps to the last cell."""
        k = np.minimum(np.floor(np.asarray(z) * self.n_per_axis).astype(int), self.n_per_axis - 1)
        return self.density[k]

    def entropy(self):
        """Differential entropy -∫ p ln p of the step density."""
        lw = self.log_weights
        return float(-np.sum(np.exp(lw) * lw) * self.cell_measure)

    def argmax(self):
        return int(np.argmax(self.log_weights))


def normalize_log_values(log_values, n, dim):
    """Turn log step-values into a normalised StepPosterior (Σ p̃ · cell = 1)."""
    lv = np.asarray(log_values, dtype=float).ravel()
    if np.any(np.isnan(lv)) or np.any(lv == np.inf):
        raise NonFiniteWeight("complete likelihood grid contains NaN or +inf")
    if np.all(lv == -np.inf):
        raise AllZeroMass("complete likelihood vanishes on every grid cell")
    log_norm = logsumexp(lv) - dim * np.log(n)
    return StepPosterior(dim, int(n), lv - log_norm)


def riemann_posterior_1d(model, theta, x, n_intervals):
    """Step posterior ``h(k/n) / (1/n Σ_l h(l/n))`` for one observation."""
    z = anchors(n_intervals, model.zeta)
    return normalize_log_values(model.log_h(theta, z, x), n_intervals, 1)


def riemann_posterior_2d(model, theta, x, n_per_axis):
    z = anchors(n_per_axis, model.zeta)
    lh = model.log_h(theta, z[:, None], z[None, :], x)
    return normalize_log_values(lh, n_per_axis, 2)


def _A(kind, n):
    return cell_integrals(kind, n)


def _psi_1d(post, f, ctx):
    n = post.n_per_axis
    p = post.density
    one, z, z2 = 1.0 / n, _A("z", n), _A("z2", n)
    if f == "const1":
        a = np.full(n, one)
    elif f == "ln_z":
        a = _A("ln_z", n)
    elif f == "z":
        a = z
    elif f == "z2":
        a = z2
    elif f == "x_z":
        a = ctx["x"] * z
    elif f == "resid_sq":
        x, lam = ctx["x"], ctx["lam"]
        a = x * x * one - 2 * lam * x * z + lam * lam * z2
    else:
        raise UnknownIntegrand(f)
    return float(p @ a)


def _psi_2d(post, f, ctx):
    n = post.n_per_axis
    P = post.grid()
    A = {"1": np.full(n, 1.0 / n), "z": _A("z", n), "z2": _A("z2", n), "ln": _A("ln_z", n)}

    def sep(fa, fb):
        return float(A[fa] @ P @ A[fb])

    if f == "const1":
        return sep("1", "1")
    if f == "ln_z1":
        return sep("ln", "1")
    if f == "ln_z2":
        return sep("1", "ln")
    if f == "z1":
        return sep("z", "1")
    if f == "z2":
        return sep("1", "z")
    if f == "z1_sq":
        return sep("z2", "1")
    if f == "z2_sq":
        return sep("1", "z2")
    if f == "z1z2":
        return sep("z", "z")
    if f == "x1z1_minus_z2z1":
        return ctx["x1"] * sep("z", "1") - sep("z", "z")
    if f == "x2z2_minus_z1z2":
        return ctx["x2"] * sep("1", "z") - sep("z", "z")
    if f == "resid1_sq":
        x1, l1 = ctx["x1"], ctx["lam1"]
        return (
            x1 * x1 * sep("1", "1") - 2 * l1 * x1 * sep("z", "1") - 2 * x1 * sep("1", "z")
            + l1 * l1 * sep("z2", "1") + 2 * l1 * sep("z", "z") + sep("1", "z2")
        )
    if f == "resid2_sq":
        x2, l2 = ctx["x2"], ctx["lam2"]
        return (
            x2 * x2 * sep("1", "1") - 2 * x2 * sep("z", "1") - 2 * l2 * x2 * sep("1", "z")
            + sep("z2", "1") + 2 * l2 * sep("z", "z") + l2 * l2 * sep("1", "z2")
        )
    raise UnknownIntegrand(f)


def psi_apply(post, f, context=None):
    """Ψ∘f = Σ_cells p̃(cell) ∫_cell f, with cell integrals in closed form.

    1D integrands: ``const1, ln_z, z, z2, x_z`` (context ``x``),
    ``resid_sq`` = (x - λz)² (context ``x, lam``).
    2D integrands: ``const1, ln_z1, ln_z2, z1, z2, z1_sq, z2_sq, z1z2,
    x1z1_minus_z2z1, x2z2_minus_z1z2`` and ``resid1_sq`` = (x1 - λ1 z1 - z2)²,
    ``resid2_sq`` = (x2 - z1 - λ2 z2)².
    """
    ctx = context or {}
    try:
        if post.dim == 1:
            return _psi_1d(post, f, ctx)
        return _psi_2d(post, f, ctx)
    except KeyError as exc:
        if isinstance(exc, UnknownIntegrand):
            raise
        raise UnknownIntegrand(f"integrand {f!r} needs context {exc}") from exc


def riemann_m_step_bg1d(posteriors, data):
    """α̂ = -N / ΣΨ∘ln z,  λ̂ = ΣΨ∘(xz) / ΣΨ∘z²,  σ̂² = 1/N ΣΨ∘(x - λ̂z)²."""
    x = data.x[:, 0]
    N = len(x)
    s_ln = sum(psi_apply(p, "ln_z") for p in posteriors)
    s_z2 = sum(psi_apply(p, "z2") for p in posteriors)
    s_xz = sum(psi_apply(p, "x_z", {"x": xi}) for p, xi in zip(posteriors, x))
    if not s_z2 > 0:
        raise DegenerateStatistics("ΣΨ∘z² vanished")
    if not s_ln < 0:
        raise DegenerateStatistics("ΣΨ∘ln z is not negative")
    lam = s_xz / s_z2
    sigma2 = sum(psi_apply(p, "resid_sq", {"x": xi, "lam": lam}) for p, xi in zip(posteriors, x)) / N
    if not sigma2 > 0:
        raise DegenerateStatistics("non-positive variance")
    return BetaGaussParams1D(-N / s_ln, lam, sigma2)


def riemann_m_step_bg2d(posteriors, data):
    x1, x2 = data.x[:, 0], data.x[:, 1]
    N = len(x1)
    s_ln1 = sum(psi_apply(p, "ln_z1") for p in posteriors)
    s_ln2 = sum(psi_apply(p, "ln_z2") for p in posteriors)
    s_11 = sum(psi_apply(p, "z1_sq") for p in posteriors)
    s_22 = sum(psi_apply(p, "z2_sq") for p in posteriors)
    if not (s_11 > 0 and s_22 > 0):
        raise DegenerateStatistics("ΣΨ∘z² vanished")
    if not (s_ln1 < 0 and s_ln2 < 0):
        raise DegenerateStatistics("ΣΨ∘ln z is not negative")
    lam1 = sum(psi_apply(p, "x1z1_minus_z2z1", {"x1": a}) for p, a in zip(posteriors, x1)) / s_11
    lam2 = sum(psi_apply(p, "x2z2_minus_z1z2", {"x2": b}) for p, b in zip(posteriors, x2)) / s_22
    v1 = sum(psi_apply(p, "resid1_sq", {"x1": a, "lam1": lam1}) for p, a in zip(posteriors, x1)) / N
    v2 = sum(psi_apply(p, "resid2_sq", {"x2": b, "lam2": lam2}) for p, b in zip(posteriors, x2)) / N
    if not (v1 > 0 and v2 > 0):
        raise DegenerateStatistics("non-positive variance")
    return BetaGaussParams2D(-N / s_ln1, -N / s_ln2, lam1, lam2, v1, v2)
