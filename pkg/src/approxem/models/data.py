"""Datasets and their CSV form."""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from approxem.errors import DimensionMismatch, InvalidConfig

FLOAT_FMT = "%.17g"


@dataclass(frozen=True)
class Dataset:
    """N observations of dimension p, stored as an (N, p) array.

    ``labels`` carries simulated latent classes (GMM) when known; it is
    never written to CSV.
    """

    x: np.ndarray
    labels: Optional[np.ndarray] = None

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        if x.ndim == 1:
            x = x[:, None]
        if x.ndim != 2 or x.shape[0] < 1:
            raise InvalidConfig("a dataset needs at least one observation")
        if not np.all(np.isfinite(x)):
            raise InvalidConfig("dataset contains non-finite entries")
        object.__setattr__(self, "x", x)
        if self.labels is not None:
            labels = np.asarray(self.labels, dtype=int)
            if labels.shape != (x.shape[0],):
                raise DimensionMismatch("labels must have one entry per observation")
            object.__setattr__(self, "labels", labels)

    @property
    def N(self):
        return self.x.shape[0]

    @property
    def dim(self):
        return self.x.shape[1]


def write_dataset_csv(data, path):
    with open(path, "w") as fh:
        fh.write(f"# dim={data.dim}\n")
        np.savetxt(fh, data.x, delimiter=",", fmt=FLOAT_FMT)


def read_dataset_csv(path):
    with open(path) as fh:
        header = fh.readline().strip()
        if not header.startswith("# dim="):
            raise InvalidConfig(f"{path}: missing '# dim=p' header")
        dim = int(header.split("=", 1)[1])
        x = np.loadtxt(fh, delimiter=",", ndmin=2)
    if x.shape[1] != dim:
        raise DimensionMismatch(f"{path}: header says dim={dim}, rows have {x.shape[1]} columns")
    return Dataset(x)
