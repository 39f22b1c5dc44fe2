"""Command-line entry point ``approxem``.

Subcommands: simulate, fit, experiment, dump-schedule, score. Each takes
``--config <yaml>``; ``--emit-default`` prints a complete default config
for the subcommand instead of running it.

Exit codes: 0 success; 2 invalid config, unreadable input or a variant
the model cannot use; 3 degenerate statistics during a fit (the partial
trace is still written); 4 fit stopped at max_iter.
"""
import argparse
import csv
import dataclasses
import os
import sys

from approxem.config import FitConfig, default_config, dump_config, load_config
from approxem.em import run_stable_em
from approxem.errors import ApproxEMError, DegenerateStatistics, InvalidConfig
from approxem.estep.providers import make_estep
from approxem.estep.schedules import IntervalProfile, TemperatureSchedule, interval_count, temperature
from approxem.experiments.batch import run_batch
from approxem.experiments.init import InitSpec, initialize, initialize_bg
from approxem.experiments.metrics import match_and_score, relative_squared_errors
from approxem.experiments.truth import resolve_truth
from approxem.models import BetaGaussian1D, BetaGaussian2D, GaussianMixture, model_for, simulate
from approxem.models.data import FLOAT_FMT, read_dataset_csv, write_dataset_csv
from approxem.models.gmm import GmmParams
from approxem.models.io import read_params, write_params
from approxem.rng import DATA_STREAM, INIT_STREAM, make_rng

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DEGENERATE = 3
EXIT_MAX_ITER = 4

COMMANDS = ("simulate", "fit", "experiment", "dump-schedule", "score")


def _log(args, msg):
    if not args.quiet:
        print(msg, file=sys.stderr)


def _override(cfg, args):
    changes = {}
    if args.seed is not None and hasattr(cfg, "seed"):
        changes["seed"] = args.seed
    if args.jobs is not None and hasattr(cfg, "jobs"):
        changes["jobs"] = args.jobs
    if args.out is not None:
        if isinstance(cfg, FitConfig):
            stem = os.path.splitext(args.out)[0]
            changes.update(trace_output=args.out, params_output=stem + "_params.txt")
        else:
            changes["output"] = args.out
    return dataclasses.replace(cfg, **changes).validate() if changes else cfg


def cmd_simulate(cfg, args):
    truth = resolve_truth(cfg.model, cfg.truth)
    data = simulate(truth, int(cfg.N), make_rng(cfg.seed, 0, DATA_STREAM))
    write_dataset_csv(data, cfg.output)
    _log(args, f"wrote {data.N} observations to {cfg.output}")
    return EXIT_OK


def _model_for_fit(cfg, data):
    if cfg.model == "gmm":
        if cfg.K is None or int(cfg.K) < 1:
            raise InvalidConfig("a Gaussian-mixture fit needs K >= 1")
        return GaussianMixture(int(cfg.K), data.dim)
    expected = 1 if cfg.model == "bg1d" else 2
    if data.dim != expected:
        raise InvalidConfig(f"{cfg.model} needs {expected}-column data, got {data.dim}")
    return BetaGaussian1D() if cfg.model == "bg1d" else BetaGaussian2D()


def _initial_params(cfg, model, data):
    if "params_file" in cfg.init:
        theta0 = read_params(cfg.init["params_file"])
        if type(model_for(theta0)) is not type(model):
            raise InvalidConfig("initial parameter file does not match the model")
        return theta0
    spec = InitSpec.from_dict(cfg.init)
    rng = make_rng(cfg.seed, 0, INIT_STREAM)
    if cfg.model == "gmm":
        return initialize(spec, data, model.K, rng)
    return initialize_bg(spec, cfg.model, rng)


def cmd_fit(cfg, args):
    data = read_dataset_csv(cfg.data)
    model = _model_for_fit(cfg, data)
    estep = make_estep(cfg.variant)
    estep.check(model)
    theta0 = _initial_params(cfg, model, data)
    try:
        trace = run_stable_em(model, estep, theta0, data, cfg.compacts, cfg.stop)
        code = EXIT_OK if trace.converged else EXIT_MAX_ITER
    except DegenerateStatistics as exc:
        trace = exc.trace
        code = EXIT_DEGENERATE
        _log(args, f"degenerate statistics: {exc}")
    trace.to_csv(cfg.trace_output)
    write_params(trace.theta, cfg.params_output)
    _log(args, f"{trace.stop_reason} after {trace.n_steps} steps, nll {trace.final.nll:.6f}")
    return code


def cmd_experiment(cfg, args):
    result = run_batch(cfg)
    for v in cfg.variants:
        agg = result.aggregate(v["name"])
        _log(args, f"{v['name']}: mean final nll {agg['nll_final']:.6f}, degenerate {agg['n_degenerate']}, "
                   f"errors {agg['n_error']}")
    return EXIT_OK


def cmd_dump_schedule(cfg, args):
    sched = TemperatureSchedule.from_dict(cfg.schedule) if cfg.schedule is not None else None
    prof = IntervalProfile.from_dict(cfg.profile) if cfg.profile is not None else None
    cols = ["n"] + (["T"] if sched else []) + (["grid"] if prof else [])
    with open(cfg.output, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for n in range(cfg.n_start, cfg.n_stop + 1):
            row = [n]
            if sched:
                row.append(FLOAT_FMT % temperature(sched, n))
            if prof:
                row.append(interval_count(prof, n))
            w.writerow(row)
    _log(args, f"wrote {cfg.n_stop - cfg.n_start + 1} rows to {cfg.output}")
    return EXIT_OK


def cmd_score(cfg, args):
    est = read_params(cfg.estimate)
    truth = resolve_truth("gmm" if isinstance(est, GmmParams) else _bg_name(est), cfg.truth)
    nll = float("nan")
    if cfg.data is not None:
        nll = model_for(est).observed_neg_log_lik(est, read_dataset_csv(cfg.data))
    if isinstance(est, GmmParams):
        row = match_and_score(est, truth, nll).as_row()
    else:
        row = dict(relative_squared_errors(est, truth), nll=nll)
    with open(cfg.output, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(row))
        w.writerow([FLOAT_FMT % v if isinstance(v, float) else v for v in row.values()])
    _log(args, f"wrote score to {cfg.output}")
    return EXIT_OK


def _bg_name(theta):
    return "bg1d" if len(theta.names()) == 3 else "bg2d"


HANDLERS = {
    "simulate": cmd_simulate,
    "fit": cmd_fit,
    "experiment": cmd_experiment,
    "dump-schedule": cmd_dump_schedule,
    "score": cmd_score,
}


def build_parser():
    p = argparse.ArgumentParser(prog="approxem", description="Deterministic approximate EM runs and experiments.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--config", help="YAML config file")
        s.add_argument("--seed", type=int, help="override the config seed")
        s.add_argument("--out", help="override the output path")
        s.add_argument("--jobs", type=int, help="worker processes (experiment)")
        s.add_argument("--quiet", action="store_true", help="no progress messages")
        s.add_argument("--emit-default", action="store_true", help="print the default config and exit")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.emit_default:
        sys.stdout.write(dump_config(default_config(args.command)))
        return EXIT_OK
    try:
        if not args.config:
            raise InvalidConfig("--config is required")
        cfg = load_config(args.config)
        if cfg.command != args.command:
            raise InvalidConfig(f"config is for {cfg.command!r}, not {args.command!r}")
        cfg = _override(cfg, args)
        return HANDLERS[args.command](cfg, args)
    except (ApproxEMError, OSError, ValueError) as exc:
        print(f"approxem {args.command}: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
