"""Random streams.

Every stream is a NumPy ``Generator`` over the counter-based ``Philox``
bit generator, keyed by a ``SeedSequence(master_seed, spawn_key=keys)``.
Replicate ``i`` of a batch uses keys ``(i, 0)`` for its data and
``(i, 1)`` for its initialisation, so its draws never depend on other
replicates.
"""
import numpy as np

DATA_STREAM = 0
INIT_STREAM = 1


def make_rng(seed, *keys):
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.Philox(ss))
