from approxem.estep.diagnostics import bg1d_riemann_gap, compact_grid, l2_posterior_gap
from approxem.estep.providers import (
    ExactEStep,
    RiemannEStep,
    TemperedEStep,
    TemperedRiemannEStep,
    make_estep,
)
from approxem.estep.riemann import (
    StepPosterior,
    psi_apply,
    riemann_m_step_bg1d,
    riemann_m_step_bg2d,
    riemann_posterior_1d,
    riemann_posterior_2d,
)
from approxem.estep.schedules import (
    EPS_T,
    IntervalProfile,
    TemperatureSchedule,
    interval_count,
    raw_temperature,
    temperature,
)
from approxem.estep.tempering import temper_discrete, temper_log_weights, temper_step_posterior

__all__ = [
    "bg1d_riemann_gap",
    "compact_grid",
    "l2_posterior_gap",
    "ExactEStep",
    "RiemannEStep",
    "TemperedEStep",
    "TemperedRiemannEStep",
    "make_estep",
    "StepPosterior",
    "psi_apply",
    "riemann_m_step_bg1d",
    "riemann_m_step_bg2d",
    "riemann_posterior_1d",
    "riemann_posterior_2d",
    "EPS_T",
    "IntervalProfile",
    "TemperatureSchedule",
    "interval_count",
    "raw_temperature",
    "temperature",
    "temper_discrete",
    "temper_log_weights",
    "temper_step_posterior",
]
