"""YAML run configurations.

Every config is a mapping with ``schema_version`` (currently 1) and
``command`` (simulate, fit, experiment, dump-schedule, score). Parsing
validates the whole config before anything is computed; ``to_dict``
emits a mapping that parses back to an equal config.

Ground truth (``truth``) is given as ``{family: 1}`` for a Gaussian
mixture, as named Beta-Gaussian values such as ``{alpha: 2, lambda: 5,
sigma: 1.5}`` (``sigma2`` also accepted), or as ``{file: params.txt}``.
"""
from dataclasses import dataclass, field, fields
from typing import Optional

import yaml

from approxem.em import CompactFamily, StoppingRule
from approxem.errors import InvalidConfig
from approxem.estep.providers import make_estep
from approxem.estep.schedules import IntervalProfile, TemperatureSchedule
from approxem.experiments.init import InitSpec
from approxem.experiments.truth import resolve_truth

SCHEMA_VERSION = 1
MODELS = ("gmm", "bg1d", "bg2d")


def _check_model(model):
    if model not in MODELS:
        raise InvalidConfig(f"model must be one of {MODELS}, got {model!r}")


def _stop_from(d):
    try:
        return StoppingRule(**d)
    except TypeError as exc:
        raise InvalidConfig(f"bad stop rule: {exc}") from exc


def _compacts_from(d):
    try:
        return CompactFamily(**d)
    except (TypeError, ValueError) as exc:
        raise InvalidConfig(f"bad compact family: {exc}") from exc


def _dataclass_dict(obj):
    return {f.name: getattr(obj, f.name) for f in fields(obj)}


def _check_variants(variants):
    if not variants:
        raise InvalidConfig("at least one variant is required")
    names = set()
    for v in variants:
        if "name" not in v:
            raise InvalidConfig(f"variant {v!r} needs a name")
        if v["name"] in names:
            raise InvalidConfig(f"duplicate variant name {v['name']!r}")
        names.add(v["name"])
        make_estep(v)


@dataclass(frozen=True)
class SimulateConfig:
    model: str = "gmm"
    truth: dict = field(default_factory=lambda: {"family": 1})
    N: int = 500
    seed: int = 0
    output: str = "data.csv"

    command = "simulate"

    def validate(self):
        _check_model(self.model)
        if int(self.N) < 1:
            raise InvalidConfig("N must be at least 1")
        resolve_truth(self.model, self.truth)
        return self


@dataclass(frozen=True)
class FitConfig:
    """One EM run on a dataset file.

    ``init`` is either ``{params_file: path}`` or an init spec
    (``K`` is required for Gaussian-mixture specs).
    """

    model: str = "gmm"
    data: str = "data.csv"
    K: Optional[int] = 3
    init: dict = field(default_factory=lambda: {"kind": "barycenter", "perturb_scale": 1e-3})
    variant: dict = field(default_factory=lambda: {"name": "em", "kind": "exact"})
    stop: StoppingRule = field(default_factory=StoppingRule)
    compacts: CompactFamily = field(default_factory=CompactFamily)
    seed: int = 0
    trace_output: str = "trace.csv"
    params_output: str = "params.txt"

    command = "fit"

    def validate(self):
        _check_model(self.model)
        if "params_file" not in self.init:
            InitSpec.from_dict(self.init)
        make_estep(self.variant)
        return self


@dataclass(frozen=True)
class ExperimentConfig:
    """A batch of replicates comparing EM variants on shared data and inits."""

    name: str = "experiment"
    model: str = "gmm"
    truth: dict = field(default_factory=lambda: {"family": 1})
    N: int = 500
    replicates: int = 100
    seed: int = 0
    init: InitSpec = field(default_factory=InitSpec)
    variants: tuple = (
        {"name": "em", "kind": "exact"},
        {"name": "tmp-em", "kind": "tempered",
         "schedule": {"kind": "oscillating", "T0": 100.0, "r": 1.5, "a": 0.02, "b": 20.0}},
    )
    stop: StoppingRule = field(default_factory=StoppingRule)
    compacts: CompactFamily = field(default_factory=CompactFamily)
    jobs: int = 1
    output: Optional[str] = "experiment.csv"
    trace_dir: Optional[str] = None

    command = "experiment"

    def validate(self):
        _check_model(self.model)
        if int(self.N) < 1:
            raise InvalidConfig("N must be at least 1")
        if int(self.replicates) < 1:
            raise InvalidConfig("replicates must be at least 1")
        if int(self.jobs) < 1:
            raise InvalidConfig("jobs must be at least 1")
        resolve_truth(self.model, self.truth)
        _check_variants(self.variants)
        return self


@dataclass(frozen=True)
class DumpScheduleConfig:
    """Temperatures and/or interval counts for ``n_start ≤ n ≤ n_stop``."""

    schedule: Optional[dict] = field(default_factory=lambda: {"kind": "simple", "T0": 100.0, "r": 1.5})
    profile: Optional[dict] = None
    n_start: int = 0
    n_stop: int = 100
    output: str = "schedule.csv"

    command = "dump-schedule"

    def validate(self):
        if self.schedule is None and self.profile is None:
            raise InvalidConfig("dump-schedule needs a schedule or a profile")
        if self.schedule is not None:
            TemperatureSchedule.from_dict(self.schedule)
        if self.profile is not None:
            IntervalProfile.from_dict(self.profile)
            if self.n_start < 1:
                raise InvalidConfig("interval profiles start at n = 1")
        if self.n_stop < self.n_start:
            raise InvalidConfig("n_stop must be >= n_start")
        return self


@dataclass(frozen=True)
class ScoreConfig:
    estimate: str = "params.txt"
    truth: dict = field(default_factory=lambda: {"family": 1})
    data: Optional[str] = None
    output: str = "score.csv"

    command = "score"

    def validate(self):
        return self


CONFIG_CLASSES = {c.command: c for c in (SimulateConfig, FitConfig, ExperimentConfig, DumpScheduleConfig, ScoreConfig)}


def config_from_dict(d):
    if not isinstance(d, dict):
        raise InvalidConfig("config must be a mapping")
    d = dict(d)
    version = d.pop("schema_version", None)
    if version != SCHEMA_VERSION:
        raise InvalidConfig(f"unsupported schema_version {version!r} (expected {SCHEMA_VERSION})")
    command = d.pop("command", None)
    if command not in CONFIG_CLASSES:
        raise InvalidConfig(f"unknown command {command!r}")
    cls = CONFIG_CLASSES[command]
    known = {f.name for f in fields(cls)}
    extra = set(d) - known
    if extra:
        raise InvalidConfig(f"unknown {command} config keys: {sorted(extra)}")
    if "stop" in d:
        d["stop"] = _stop_from(d["stop"])
    if "compacts" in d:
        d["compacts"] = _compacts_from(d["compacts"])
    if "init" in d and cls is ExperimentConfig:
        d["init"] = InitSpec.from_dict(d["init"])
    if "variants" in d:
        d["variants"] = tuple(dict(v) for v in d["variants"])
    try:
        cfg = cls(**d)
    except TypeError as exc:
        raise InvalidConfig(str(exc)) from exc
    return cfg.validate()


def config_to_dict(cfg):
    out = {"schema_version": SCHEMA_VERSION, "command": cfg.command}
    for k, v in _dataclass_dict(cfg).items():
        if isinstance(v, (StoppingRule, CompactFamily)):
            v = _dataclass_dict(v)
        elif isinstance(v, InitSpec):
            v = v.to_dict()
        elif isinstance(v, tuple) and k == "variants":
            v = [dict(x) for x in v]
        out[k] = v
    return out


def load_config(path):
    try:
        with open(path) as fh:
            d = yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        raise InvalidConfig(f"cannot parse {path}: {exc}") from exc
    return config_from_dict(d)


def dump_config(cfg):
    return yaml.safe_dump(config_to_dict(cfg), sort_keys=False)


def default_config(command):
    if command not in CONFIG_CLASSES:
        raise InvalidConfig(f"unknown command {command!r}")
    return CONFIG_CLASSES[command]()
