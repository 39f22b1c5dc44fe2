"""Deterministic approximate EM for curved exponential families.

Exact EM, Riemann-sum E-steps for bounded continuous latents, tempered
E-steps, their composition, and the stable truncation onto growing
compacts, with Gaussian-mixture and Beta-Gaussian models.
"""
from approxem.em import (
    CompactFamily,
    IterRecord,
    RunTrace,
    StoppingRule,
    approximate_em_step,
    exact_em_step,
    run_stable_em,
    stopping_check,
)
from approxem.kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CompactFamily",
    "IterRecord",
    "RunTrace",
    "StoppingRule",
    "approximate_em_step",
    "exact_em_step",
    "run_stable_em",
    "stopping_check",
]
