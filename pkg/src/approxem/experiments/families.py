"""Synthetic Gaussian-mixture configurations.

Three-cluster families share one isolated right cluster and a left pair
whose means move closer from family 1 to family 3; every other parameter
is identical across families. Family ``"six"`` is a six-cluster layout.
"""
from dataclasses import dataclass

import numpy as np

from approxem.errors import UnknownFamily
from approxem.models.gmm import GmmParams


@dataclass(frozen=True)
class FamilyGeometry:
    right: tuple = (6.0, 0.0)
    left_x: float = -4.0
    half_gaps: tuple = (2.0, 1.2, 0.6)
    cov_diag: tuple = (2.0, 1.0)


DEFAULT_GEOMETRY = FamilyGeometry()

SIX_MEANS = ((-6.0, 4.0), (0.0, 5.0), (6.0, 4.0), (-5.0, -3.0), (1.0, -4.0), (6.0, -2.0))
SIX_COV_DIAG = ((1.0, 0.6), (0.8, 0.8), (1.2, 0.5), (0.7, 1.1), (1.0, 1.0), (0.5, 0.9))
SIX_WEIGHTS = (0.2, 0.15, 0.2, 0.1, 0.2, 0.15)


def family_ids():
    return (1, 2, 3, "six")


def _parse_id(family_id):
    if isinstance(family_id, str) and family_id.isdigit():
        family_id = int(family_id)
    if family_id not in family_ids():
        raise UnknownFamily(f"unknown cluster family {family_id!r}")
    return family_id


def make_family(family_id, geometry=DEFAULT_GEOMETRY):
    """Ground-truth parameters of a named family (1, 2, 3 or ``"six"``).

    In the three-cluster families components 0 and 1 are the left pair
    (upper then lower) and component 2 is the isolated cluster.
    """
    family_id = _parse_id(family_id)
    if family_id == "six":
        cov = np.array([np.diag(d) for d in SIX_COV_DIAG])
        return GmmParams(np.array(SIX_WEIGHTS), np.array(SIX_MEANS), cov).validate()
    d = geometry.half_gaps[family_id - 1]
    means = np.array([[geometry.left_x, d], [geometry.left_x, -d], list(geometry.right)])
    cov = np.repeat(np.diag(geometry.cov_diag)[None], 3, axis=0)
    return GmmParams(np.full(3, 1.0 / 3.0), means, cov).validate()
