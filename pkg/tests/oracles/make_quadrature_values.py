"""Freeze Simpson-quadrature posterior moments for the Beta-Gaussian models.

Independent of approxem: the posterior is written out from the model
definition and integrated with scipy's composite Simpson rule.
Run from the repository root: ``python3 tests/oracles/make_quadrature_values.py``.
"""
import json

import mpmath as mp
import numpy as np
from scipy.integrate import simpson

PANELS_1D = 10**6
PANELS_2D = 2000

THETA_1D = {"alpha": 2.0, "lam": 5.0, "sigma": 1.5}
X_1D = [3.0, -0.5, 0.4, 1.1, 1.9, 2.6, 3.7, 4.4, 5.2, 6.5]
THETA_2D = {"alpha1": 1.0, "alpha2": 3.0, "lam1": 10.0, "lam2": -10.0, "sigma1": 2.0, "sigma2": 3.0}
X_2D = [2.0, -2.0]


def moments_1d(x, alpha, lam, sigma):
    z = np.linspace(0.0, 1.0, PANELS_1D + 1)
    # unnormalised posterior; the constant factors cancel
    logp = (alpha - 1) * np.log(np.where(z > 0, z, 1.0)) - (x - lam * z) ** 2 / (2 * sigma**2)
    p = np.exp(logp - logp.max())
    p[0] = 0.0 if alpha > 1 else p[0]
    lnz = np.where(z > 0, np.log(np.where(z > 0, z, 1.0)), 0.0)
    norm = simpson(p, x=z)
    return {
        "E_ln_z": simpson(p * lnz, x=z) / norm,
        "E_z": simpson(p * z, x=z) / norm,
        "E_z2": simpson(p * z * z, x=z) / norm,
    }


def moments_2d(x1, x2, alpha1, alpha2, lam1, lam2, sigma1, sigma2):
    g = np.linspace(0.0, 1.0, PANELS_2D + 1)
    z1, z2 = np.meshgrid(g, g, indexing="ij")
    with np.errstate(divide="ignore"):
        logp = (
            (alpha1 - 1) * np.log(z1) if alpha1 != 1 else 0.0
        ) + (alpha2 - 1) * np.log(z2) - (x1 - lam1 * z1 - z2) ** 2 / (2 * sigma1**2) - (x2 - z1 - lam2 * z2) ** 2 / (
            2 * sigma2**2
        )
    p = np.exp(logp - logp[np.isfinite(logp)].max())
    p[~np.isfinite(p)] = 0.0
    norm = simpson(simpson(p, x=g, axis=1), x=g)
    return {
        "E_z1": simpson(simpson(p * z1, x=g, axis=1), x=g) / norm,
        "E_z2": simpson(simpson(p * z2, x=g, axis=1), x=g) / norm,
    }


def log_h_mp(alpha, lam, sigma, z, x):
    mp.mp.dps = 40
    a, l, s, z, x = (mp.mpf(v) for v in (alpha, lam, sigma, z, x))
    return mp.log(a) + (a - 1) * mp.log(z) - mp.log(mp.sqrt(2 * mp.pi * s * s)) - (x - l * z) ** 2 / (2 * s * s)


def main():
    t = THETA_1D
    out = {
        "theta_1d": t,
        "moments_1d": {repr(x): moments_1d(x, t["alpha"], t["lam"], t["sigma"]) for x in X_1D},
        "theta_2d": THETA_2D,
        "x_2d": X_2D,
        "moments_2d": moments_2d(*X_2D, *THETA_2D.values()),
        "log_h_2_5_1.5_z0.3_x1.2": float(log_h_mp(2, 5, 1.5, "0.3", "1.2")),
    }
    with open("tests/data/quadrature_values.json", "w") as fh:
        json.dump(out, fh, indent=1)


if __name__ == "__main__":
    main()
