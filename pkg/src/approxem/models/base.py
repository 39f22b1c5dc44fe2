"""Common interface of curved-exponential-family models.

A model's complete log-likelihood for one observation ``x`` and latent
value ``z`` decomposes as ``psi(θ) + <S(z, x), phi(θ)>``. The EM engine
only talks to models through this class: it asks for expected sufficient
statistics (exact, from posterior weights, or from a Riemann grid) and
maps them back to parameters with ``m_step``.
"""
import numpy as np

from approxem.errors import NoClosedFormEStep, VariantUnsupported


class CurvedExpFamilyModel:
    name = "abstract"
    #: how ``observed_neg_log_lik`` is evaluated ("exact" or a quadrature rule)
    nll_method = "exact"
    #: "discrete" latents support tempering of posterior weights,
    #: "bounded" latents in [0, 1]^d support Riemann E-steps
    latent_kind = "discrete"

    @property
    def param_dim(self):
        raise NotImplementedError

    @property
    def suffstat_dim(self):
        raise NotImplementedError

    def psi(self, theta):
        raise NotImplementedError

    def phi(self, theta):
        raise NotImplementedError

    def sufficient_stat(self, z, x):
        raise NotImplementedError

    def log_complete_likelihood(self, z, theta, x):
        return self.psi(theta) + float(np.dot(self.sufficient_stat(z, x), self.phi(theta)))

    def m_step(self, s):
        raise NotImplementedError

    def observed_neg_log_lik(self, theta, data):
        raise NotImplementedError

    def exact_expected_stat(self, theta, data):
        raise NoClosedFormEStep(f"{self.name} has no closed-form posterior expectation")

    def posterior_log_weights(self, theta, data):
        raise VariantUnsupported(f"{self.name} has no discrete posterior to temper")

    def expected_stat_from_weights(self, weights, data):
        raise VariantUnsupported(f"{self.name} has no discrete posterior")

    def riemann_expected_stat(self, theta, data, n_cells, inv_temp=1.0):
        raise VariantUnsupported(f"Riemann E-steps need a bounded continuous latent; {self.name} has none")

    def simulate(self, theta, N, rng):
        raise NotImplementedError

    def param_from_flat(self, vec):
        raise NotImplementedError
