"""Exact integrals of elementary integrands over the cells of a uniform grid on [0, 1]."""
import numpy as np

# Antiderivatives F with F(0) = 0 (the ln z one extends continuously to 0).
_ANTIDERIVATIVES = {
    "const1": lambda z: z,
    "z": lambda z: 0.5 * z * z,
    "z2": lambda z: z * z * z / 3.0,
    "ln_z": lambda z: np.where(z > 0, z * np.log(np.where(z > 0, z, 1.0)) - z, 0.0),
}


def cell_edges(n):
    return np.arange(n + 1, dtype=float) / n


def cell_integrals(kind, n):
    """Return ``[∫_{k/n}^{(k+1)/n} f(z) dz for k in range(n)]`` for a named ``f``."""
    F = _ANTIDERIVATIVES[kind](cell_edges(n))
    return np.diff(F)


def anchors(n, zeta):
    """Left endpoints ``k/n``; the ``k = 0`` node is moved to ``zeta / n``."""
    z = np.arange(n, dtype=float) / n
    z[0] = zeta / n
    return z
