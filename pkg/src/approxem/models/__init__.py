from approxem.models.base import CurvedExpFamilyModel
from approxem.models.betagauss import (
    ZETA,
    BetaGaussian1D,
    BetaGaussian2D,
    BetaGaussParams1D,
    BetaGaussParams2D,
    bg2d_complete_likelihood,
    bg_complete_likelihood,
)
from approxem.models.data import Dataset, read_dataset_csv, write_dataset_csv
from approxem.models.gmm import (
    GaussianMixture,
    GmmParams,
    gmm_log_joint,
    gmm_m_step,
    gmm_neg_log_likelihood,
    gmm_responsibilities,
)
from approxem.models.io import params_from_text, params_to_text, read_params, write_params


def model_for(theta):
    """The model instance matching a parameter object."""
    if isinstance(theta, GmmParams):
        return GaussianMixture(theta.K, theta.p)
    if isinstance(theta, BetaGaussParams1D):
        return BetaGaussian1D()
    if isinstance(theta, BetaGaussParams2D):
        return BetaGaussian2D()
    raise TypeError(f"unknown parameter type {type(theta).__name__}")


def simulate(theta, N, rng):
    """Draw N observations from the model of ``theta`` (GMM datasets carry labels)."""
    if N < 1:
        raise ValueError("N must be at least 1")
    return model_for(theta).simulate(theta, N, rng)


__all__ = [
    "CurvedExpFamilyModel",
    "ZETA",
    "BetaGaussian1D",
    "BetaGaussian2D",
    "BetaGaussParams1D",
    "BetaGaussParams2D",
    "bg_complete_likelihood",
    "bg2d_complete_likelihood",
    "Dataset",
    "read_dataset_csv",
    "write_dataset_csv",
    "GaussianMixture",
    "GmmParams",
    "gmm_log_joint",
    "gmm_m_step",
    "gmm_neg_log_likelihood",
    "gmm_responsibilities",
    "params_from_text",
    "params_to_text",
    "read_params",
    "write_params",
    "model_for",
    "simulate",
]
