"""E-step providers consumed by the EM engine.

A provider maps ``(model, θ, n, data)`` to the dataset-averaged expected
sufficient statistic under its (approximate) posterior at iteration
``n``. Providers hold no iteration state: the engine passes ``n``.

Index convention: the step that produces θ_{n+1} from θ_n has index
``n`` (starting at 0), uses temperature ``T_n`` and, for Riemann
variants, ``φ(n + 1)`` intervals per axis.
"""
import numpy as np

from approxem.errors import InvalidConfig, NonFiniteWeight, VariantUnsupported
from approxem.estep.schedules import IntervalProfile, TemperatureSchedule, interval_count, temperature
from approxem.estep.tempering import temper_log_weights


class ExactEStep:
    name = "exact"

    def temperature(self, n):
        return 1.0

    def grid(self, n):
        return 0

    def check(self, model):
        if model.latent_kind != "discrete":
            raise VariantUnsupported(f"exact E-step is not available for {model.name}")

    def expected_stat(self, model, theta, n, data):
        return model.exact_expected_stat(theta, data)


class TemperedEStep:
    """Posterior weights raised to 1/T_n and renormalised (discrete latents)."""

    name = "tempered"

    def __init__(self, schedule):
        self.schedule = schedule

    def temperature(self, n):
        return temperature(self.schedule, n)

    def grid(self, n):
        return 0

    def check(self, model):
        if model.latent_kind != "discrete":
            raise VariantUnsupported(f"tempered E-step needs a discrete latent; use tempered-riemann for {model.name}")

    def expected_stat(self, model, theta, n, data):
        lw = model.posterior_log_weights(theta, data)
        W = np.exp(temper_log_weights(lw, self.temperature(n), axis=1))
        if not np.all(np.isfinite(W)):
            raise NonFiniteWeight("tempered responsibilities are not finite")
        return model.expected_stat_from_weights(W, data)


class RiemannEStep:
    name = "riemann"

    def __init__(self, profile):
        self.profile = profile

    def temperature(self, n):
        return 1.0

    def grid(self, n):
        return interval_count(self.profile, n + 1)

    def check(self, model):
        if model.latent_kind != "bounded":
            raise VariantUnsupported(f"Riemann E-step needs a bounded continuous latent; {model.name} has none")

    def expected_stat(self, model, theta, n, data):
        return model.riemann_expected_stat(theta, data, self.grid(n), 1.0)


class TemperedRiemannEStep(RiemannEStep):
    name = "tempered-riemann"

    def __init__(self, profile, schedule):
        super().__init__(profile)
        self.schedule = schedule

    def temperature(self, n):
        return temperature(self.schedule, n)

    def expected_stat(self, model, theta, n, data):
        return model.riemann_expected_stat(theta, data, self.grid(n), 1.0 / self.temperature(n))


def make_estep(spec):
    """Build a provider from a dict such as
    ``{"kind": "tempered-riemann", "profile": {"kind": "medium"},
    "schedule": {"kind": "oscillating", "T0": 150, "r": 3, "a": 0.02, "b": 40}}``.
    """
    kind = spec.get("kind")
    try:
        if kind == "exact":
            return ExactEStep()
        if kind == "tempered":
            return TemperedEStep(TemperatureSchedule.from_dict(spec["schedule"]))
        if kind == "riemann":
            return RiemannEStep(IntervalProfile.from_dict(spec["profile"]))
        if kind == "tempered-riemann":
            return TemperedRiemannEStep(
                IntervalProfile.from_dict(spec["profile"]), TemperatureSchedule.from_dict(spec["schedule"])
            )
    except KeyError as exc:
        raise InvalidConfig(f"variant {kind!r} needs {exc}") from exc
    raise InvalidConfig(f"unknown E-step variant {kind!r}")
