"""EM engine: exact and approximate steps, stable truncation onto growing compacts.

The stable approximate EM accepts a candidate ``F_n(θ_n)`` only while it
stays in the current compact ``K_j``; otherwise it restarts from ``θ_0``
with ``j ← j + 1``.
"""
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from approxem.errors import DegenerateStatistics, InitOutsideK0, NonFiniteWeight
from approxem.models.data import FLOAT_FMT

STOP_REASONS = ("max_iter", "param_tol", "nll_tol", "degenerate")


@dataclass(frozen=True)
class CompactFamily:
    """Compacts ``K_j = {θ : ‖θ‖∞ ≤ R0 ρ^j, constraints ≥ ε0 · decay^j}``.

    "Constraints" are the model's positivity-bound quantities (mixture
    weights, covariance eigenvalues, α, σ²). Membership is monotone in j
    and every valid parameter lies in some K_j.
    """

    base_bound: float = 1e6
    growth: float = 10.0
    constraint_margin: float = 1e-8
    margin_decay: float = 0.1

    def __post_init__(self):
        if not (self.base_bound > 0 and self.growth > 1 and self.constraint_margin > 0 and 0 < self.margin_decay < 1):
            raise ValueError("invalid compact family parameters")

    def bound(self, j):
        return self.base_bound * self.growth**j

    def margin(self, j):
        return self.constraint_margin * self.margin_decay**j

    def contains(self, theta, j):
        v = theta.flat()
        if not np.all(np.isfinite(v)):
            return False
        if np.max(np.abs(v)) > self.bound(j):
            return False
        c = theta.constraint_values()
        return bool(np.all(c >= self.margin(j)))

    def smallest_index(self, theta, max_j=1000):
        for j in range(max_j):
            if self.contains(theta, j):
                return j
        return None


@dataclass(frozen=True)
class StoppingRule:
    """Stop when ‖Δθ‖∞ < param_tol or |Δnll| < nll_tol (None disables a test).

    Tests are suppressed while ``|T_n - 1| > settle_tol``, so tempered runs
    are not stopped at a tempered fixed point.
    """

    param_tol: Optional[float] = 1e-8
    nll_tol: Optional[float] = None
    max_iter: int = 1000
    settle_tol: float = 0.05


@dataclass(frozen=True)
class IterRecord:
    theta: object
    nll: float
    j: int
    T: float
    grid: int


@dataclass
class RunTrace:
    """Per-iteration history. Row ``n`` holds θ_n, nll(θ_n), j_n, and the
    temperature and grid size of the step that produced θ_n (NaN and 0
    for the initial row)."""

    iterations: List[IterRecord] = field(default_factory=list)
    converged: bool = False
    stop_reason: str = "max_iter"
    nll_method: str = "exact"

    @property
    def final(self):
        return self.iterations[-1]

    @property
    def theta(self):
        return self.iterations[-1].theta

    @property
    def nll(self):
        return np.array([r.nll for r in self.iterations])

    @property
    def j(self):
        return np.array([r.j for r in self.iterations])

    @property
    def n_steps(self):
        return len(self.iterations) - 1

    def cumulative_grid(self):
        return int(sum(r.grid for r in self.iterations))

    def columns(self):
        return ["iter", "nll", "j", "T", "grid"] + list(self.iterations[0].theta.names())

    def to_csv(self, path_or_file):
        own = isinstance(path_or_file, str)
        fh = open(path_or_file, "w") if own else path_or_file
        try:
            fh.write(",".join(self.columns()) + "\n")
            for n, r in enumerate(self.iterations):
                vals = [FLOAT_FMT % r.nll, str(r.j), FLOAT_FMT % r.T, str(r.grid)]
                vals += [FLOAT_FMT % v for v in r.theta.flat()]
                fh.write(f"{n}," + ",".join(vals) + "\n")
        finally:
            if own:
                fh.close()


def exact_em_step(model, theta, data):
    """θ̂(S̄(θ)) with the model's closed-form posterior expectation."""
    return model.m_step(model.exact_expected_stat(theta, data))


def approximate_em_step(model, estep, theta, n, data):
    """θ̂(S̃_n(θ)) where S̃_n is the expectation of S under the provider's posterior."""
    s = np.asarray(estep.expected_stat(model, theta, n, data), dtype=float)
    if not np.all(np.isfinite(s)):
        raise NonFiniteWeight(f"non-finite expected statistics at step {n}")
    return model.m_step(s)


def stopping_check(prev, curr, param_tol=1e-8, nll_tol=None, settle_tol=math.inf):
    """Stop reason for the transition ``prev → curr``, or None.

    Never fires on a truncation step (j changed) nor while the step's
    temperature is further than ``settle_tol`` from 1.
    """
    if curr.j != prev.j:
        return None
    if not math.isnan(curr.T) and abs(curr.T - 1.0) > settle_tol:
        return None
    if param_tol is not None:
        dtheta = np.max(np.abs(curr.theta.flat() - prev.theta.flat()))
        if dtheta < param_tol:
            return "param_tol"
    if nll_tol is not None and abs(curr.nll - prev.nll) < nll_tol:
        return "nll_tol"
    return None


def run_stable_em(model, estep, theta0, data, compacts=None, stop=None, step=None):
    """Run the stable approximate EM from ``theta0``.

    ``step(model, estep, θ, n, data)`` defaults to :func:`approximate_em_step`
    and may be replaced (e.g. by a mock) for testing truncation.
    A DegenerateStatistics error is re-raised with the partial trace
    attached as ``exc.trace``.
    """
    compacts = compacts or CompactFamily()
    stop = stop or StoppingRule()
    step = step or approximate_em_step
    if not compacts.contains(theta0, 0):
        raise InitOutsideK0("initial parameter is outside K_0")
    check = getattr(estep, "check", None)
    if check is not None:
        check(model)

    trace = RunTrace(nll_method=model.nll_method)
    trace.iterations.append(IterRecord(theta0, model.observed_neg_log_lik(theta0, data), 0, math.nan, 0))
    theta, j = theta0, 0
    for n in range(stop.max_iter):
        T = estep.temperature(n)
        grid = estep.grid(n)
        try:
            cand = step(model, estep, theta, n, data)
        except DegenerateStatistics as exc:
            trace.stop_reason = "degenerate"
            exc.trace = trace
            raise
        if compacts.contains(cand, j):
            theta = cand
        else:
            theta, j = theta0, j + 1
        rec = IterRecord(theta, model.observed_neg_log_lik(theta, data), j, T, grid)
        trace.iterations.append(rec)
        reason = stopping_check(trace.iterations[-2], rec, stop.param_tol, stop.nll_tol, stop.settle_tol)
        if reason is not None:
            trace.converged = True
            trace.stop_reason = reason
            return trace
    trace.stop_reason = "max_iter"
    return trace
