"""Replicated comparisons of EM variants.

Replicate ``i`` draws its dataset from stream ``(seed, i, 0)`` and its
initial parameters from ``(seed, i, 1)``; every variant then starts from
the same θ₀ on the same data. Replicates are independent, so they may
run in any order or in parallel; rows are always reported sorted by
replicate id, then by variant order in the config.
"""
import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError

from approxem.em import run_stable_em
from approxem.errors import ApproxEMError, DegenerateStatistics
from approxem.estep.providers import make_estep
from approxem.experiments.init import initialize, initialize_bg
from approxem.experiments.metrics import match_and_score, relative_squared_errors
from approxem.experiments.truth import resolve_truth
from approxem.models import model_for, simulate
from approxem.models.data import FLOAT_FMT
from approxem.rng import DATA_STREAM, INIT_STREAM, make_rng

STATUSES = ("converged", "max_iter", "degenerate", "error")
LEAD_COLUMNS = ["replicate", "seed", "variant", "status", "stop_reason"]
COUNT_COLUMNS = ["n_runs", "n_degenerate", "n_error"]
RUN_COLUMNS = ["n_iter", "grid_total", "j_final", "nll_init", "nll_final"]


def metric_columns(truth):
    if truth.__class__.__name__ == "GmmParams":
        return [f"mu_err_{k}" for k in range(truth.K)] + [f"kl_{k}" for k in range(truth.K)]
    return ["err_" + n.replace("sigma2", "sigma") for n in truth.names()]


def batch_columns(truth):
    extra = ["permutation"] if truth.__class__.__name__ == "GmmParams" else []
    return LEAD_COLUMNS + COUNT_COLUMNS + RUN_COLUMNS + metric_columns(truth) + extra + ["error"]


@dataclass
class BatchResult:
    columns: list
    rows: list  # per replicate and variant
    aggregates: list  # mean then std per variant

    def all_rows(self):
        return self.rows + self.aggregates

    def rows_for(self, variant):
        return [r for r in self.rows if r["variant"] == variant]

    def aggregate(self, variant, stat="mean"):
        for r in self.aggregates:
            if r["variant"] == variant and r["replicate"] == stat:
                return r
        raise KeyError((variant, stat))


def _initial_params(cfg, truth, data, rng):
    if cfg.model == "gmm":
        return initialize(cfg.init, data, truth.K, rng)
    return initialize_bg(cfg.init, cfg.model, rng)


def _score(cfg, truth, theta, nll, degenerate):
    if cfg.model == "gmm":
        return match_and_score(theta, truth, nll, degenerate).as_row()
    return relative_squared_errors(theta, truth)


def run_replicate(cfg, i):
    """All variant rows for replicate ``i`` (never raises for run failures)."""
    truth = resolve_truth(cfg.model, cfg.truth)
    model = model_for(truth)
    base = {"replicate": i, "seed": cfg.seed, "n_runs": 1}
    try:
        data = simulate(truth, cfg.N, make_rng(cfg.seed, i, DATA_STREAM))
        theta0 = _initial_params(cfg, truth, data, make_rng(cfg.seed, i, INIT_STREAM))
    except (ApproxEMError, ValueError, LinAlgError) as exc:
        return [dict(base, variant=v["name"], status="error", n_error=1, error=_msg(exc)) for v in cfg.variants]

    rows = []
    for v in cfg.variants:
        row = dict(base, variant=v["name"], n_degenerate=0, n_error=0)
        try:
            trace = run_stable_em(model, make_estep(v), theta0, data, cfg.compacts, cfg.stop)
            row["status"] = "converged" if trace.converged else "max_iter"
        except DegenerateStatistics as exc:
            trace = exc.trace
            row["status"] = "degenerate"
            row["n_degenerate"] = 1
        except (ApproxEMError, ValueError, LinAlgError, FloatingPointError) as exc:
            row.update(status="error", n_error=1, error=_msg(exc))
            rows.append(row)
            continue
        row.update(
            stop_reason=trace.stop_reason,
            n_iter=trace.n_steps,
            grid_total=trace.cumulative_grid(),
            j_final=int(trace.final.j),
            nll_init=trace.iterations[0].nll,
            nll_final=trace.final.nll,
        )
        row.update(_score(cfg, truth, trace.theta, trace.final.nll, row["status"] == "degenerate"))
        if cfg.trace_dir:
            os.makedirs(cfg.trace_dir, exist_ok=True)
            trace.to_csv(os.path.join(cfg.trace_dir, f"replicate_{i:05d}_{v['name']}.csv"))
        rows.append(row)
    return rows


def _msg(exc):
    return f"{type(exc).__name__}: {exc}".replace("\n", " ")


def aggregate_rows(rows, variants, columns):
    """Mean and population std (ddof=0) per variant over non-failed runs.

    NaN entries (e.g. KL of degenerate runs) are excluded per column.
    """
    numeric = [c for c in columns if c in RUN_COLUMNS or c.startswith(("mu_err_", "kl_", "err_"))]
    out = []
    for v in variants:
        vr = [r for r in rows if r["variant"] == v]
        counts = {c: int(sum(r.get(c, 0) for r in vr)) for c in COUNT_COLUMNS}
        mean = {"replicate": "mean", "variant": v, **counts}
        std = {"replicate": "std", "variant": v, **counts}
        for c in numeric:
            vals = np.array([r[c] for r in vr if r["status"] != "error" and c in r], dtype=float)
            vals = vals[np.isfinite(vals)]
            mean[c] = float(vals.mean()) if vals.size else math.nan
            std[c] = float(vals.std()) if vals.size else math.nan
        out += [mean, std]
    return out


def run_batch(cfg, jobs=None):
    """Run every replicate of an :class:`ExperimentConfig`; write ``cfg.output`` when set."""
    cfg.validate()
    truth = resolve_truth(cfg.model, cfg.truth)
    columns = batch_columns(truth)
    jobs = int(jobs or cfg.jobs)
    ids = range(int(cfg.replicates))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            per_rep = list(pool.map(run_replicate, [cfg] * len(ids), ids))
    else:
        per_rep = [run_replicate(cfg, i) for i in ids]
    rows = [r for rep in sorted(per_rep, key=lambda rs: rs[0]["replicate"]) for r in rep]
    variants = [v["name"] for v in cfg.variants]
    result = BatchResult(columns, rows, aggregate_rows(rows, variants, columns))
    if cfg.output:
        write_batch_csv(result, cfg.output)
    return result


def _fmt(v):
    if isinstance(v, float):
        return FLOAT_FMT % v
    return "" if v is None else str(v)


def write_batch_csv(result, path_or_file):
    own = isinstance(path_or_file, str)
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(result.columns)
        for r in result.all_rows():
            w.writerow([_fmt(r.get(c)) for c in result.columns])
    finally:
        if own:
            fh.close()


def read_batch_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
