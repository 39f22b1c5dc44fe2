import json
import os

import numpy as np
import pytest
from hypothesis import settings

from approxem.models import GaussianMixture, GmmParams, simulate
from approxem.rng import make_rng

settings.register_profile("ci", deadline=None, max_examples=40, derandomize=True)
settings.load_profile("ci")

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


def load_oracle(name):
    with open(os.path.join(DATA_DIR, name)) as fh:
        return json.load(fh)


def random_spd(rng, p, low=0.3, high=2.0):
    q, _ = np.linalg.qr(rng.standard_normal((p, p)))
    return q @ np.diag(rng.uniform(low, high, p)) @ q.T


def random_gmm(rng, K, p, spread=4.0):
    w = rng.dirichlet(np.full(K, 3.0))
    mu = rng.uniform(-spread, spread, (K, p))
    cov = np.array([random_spd(rng, p) for _ in range(K)])
    return GmmParams(w, mu, cov)


def random_gmm_instance(seed, N=500, K=None, p=None):
    """Random truth, data from it, and an independent random start."""
    rng = make_rng(seed, 0)
    K = K or int(rng.integers(2, 7))
    p = p or int(rng.integers(1, 3))
    truth = random_gmm(rng, K, p)
    data = simulate(truth, N, make_rng(seed, 1))
    theta0 = random_gmm(make_rng(seed, 2), K, p)
    return GaussianMixture(K, p), truth, data, theta0


@pytest.fixture
def oracle_schedules():
    return load_oracle("schedule_values.json")


@pytest.fixture
def oracle_quadrature():
    return load_oracle("quadrature_values.json")


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
