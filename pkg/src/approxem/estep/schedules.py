"""Temperature schedules and Riemann interval-count profiles."""
import math
from dataclasses import asdict, dataclass
from typing import Optional

from approxem.errors import InvalidConfig

#: positivity clamp applied to every temperature
EPS_T = 1e-2

_SINC_CONVENTIONS = ("normalized", "unnormalized")


@dataclass(frozen=True)
class TemperatureSchedule:
    """Iteration-indexed temperature ``T_n``.

    kinds
        ``constant``     T_n = T
        ``simple``       T_n = 1 + (T0 - 1) exp(-r n)
        ``oscillating``  T_n = tanh(n / 2r) + (T0 - b 2√2 / 3π) a^(n/r) + b sinc(3π/4 + n/r)

    ``sinc`` selects sin(πx)/(πx) ("normalized") or sin(x)/x
    ("unnormalized"). Every value is clamped below at ``eps`` unless
    ``clamp`` is False, in which case the oscillating form may return
    the few negative values its formula produces early on (a negative
    temperature inverts the posterior's preferences for that step).
    """

    kind: str = "constant"
    T: float = 1.0
    T0: Optional[float] = None
    r: Optional[float] = None
    a: Optional[float] = None
    b: Optional[float] = None
    sinc: str = "normalized"
    eps: float = EPS_T
    clamp: bool = True

    def __post_init__(self):
        need = {"constant": ("T",), "simple": ("T0", "r"), "oscillating": ("T0", "r", "a", "b")}
        if self.kind not in need:
            raise InvalidConfig(f"unknown temperature schedule kind {self.kind!r}")
        for f in need[self.kind]:
            if getattr(self, f) is None:
                raise InvalidConfig(f"{self.kind} schedule needs {f}")
        if self.kind != "constant" and self.r <= 0:
            raise InvalidConfig("schedule rate r must be positive")
        if self.kind == "oscillating" and not 0 < self.a < 1:
            raise InvalidConfig("oscillating schedule needs 0 < a < 1")
        if self.sinc not in _SINC_CONVENTIONS:
            raise InvalidConfig(f"sinc must be one of {_SINC_CONVENTIONS}")
        if self.eps <= 0:
            raise InvalidConfig("eps must be positive")

    @classmethod
    def constant(cls, T=1.0):
        return cls("constant", T=T)

    @classmethod
    def simple(cls, T0, r):
        return cls("simple", T0=T0, r=r)

    @classmethod
    def oscillating(cls, T0, r, a, b, sinc="normalized", clamp=True):
        return cls("oscillating", T0=T0, r=r, a=a, b=b, sinc=sinc, clamp=clamp)

    def to_dict(self):
        return {k: v for k, v in asdict(self).items() if v is not None}

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(**d)
        except TypeError as exc:
            raise InvalidConfig(f"bad schedule {d!r}: {exc}") from exc

    def __call__(self, n):
        return temperature(self, n)


def _sinc(x, convention):
    if x == 0:
        return 1.0
    if convention == "normalized":
        return math.sin(math.pi * x) / (math.pi * x)
    return math.sin(x) / x


def raw_temperature(schedule, n):
    """Schedule formula before the positivity clamp."""
    s = schedule
    if s.kind == "constant":
        return float(s.T)
    if s.kind == "simple":
        return 1.0 + (s.T0 - 1.0) * math.exp(-s.r * n)
    u = n / s.r
    return (
        math.tanh(n / (2.0 * s.r))
        + (s.T0 - s.b * 2.0 * math.sqrt(2.0) / (3.0 * math.pi)) * s.a**u
        + s.b * _sinc(3.0 * math.pi / 4.0 + u, s.sinc)
    )


def temperature(schedule, n):
    if n < 0:
        raise ValueError("iteration index must be non-negative")
    T = raw_temperature(schedule, n)
    return max(T, schedule.eps) if schedule.clamp else T


_PROFILES = {
    "low": lambda n: n + 1,
    "medium": lambda n: n + 100,
    "high": lambda n: n + 1000,
    "linear": lambda n: 10 * n + 1,
    "sqrt": lambda n: math.isqrt(n) + 1,
    "five_sqrt": lambda n: 5 * math.isqrt(n),
}


@dataclass(frozen=True)
class IntervalProfile:
    """Number of Riemann intervals (per axis) used at EM iteration ``n ≥ 1``.

    ``low`` n+1, ``medium`` n+100, ``high`` n+1000, ``linear`` 10n+1,
    ``sqrt`` ⌊√n⌋+1, ``five_sqrt`` 5⌊√n⌋, ``constant`` c.
    """

    kind: str = "medium"
    c: Optional[int] = None

    def __post_init__(self):
        if self.kind == "constant":
            if self.c is None or int(self.c) < 1:
                raise InvalidConfig("constant profile needs c >= 1")
        elif self.kind not in _PROFILES:
            raise InvalidConfig(f"unknown interval profile {self.kind!r}")

    def to_dict(self):
        return {k: v for k, v in asdict(self).items() if v is not None}

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(**d)
        except TypeError as exc:
            raise InvalidConfig(f"bad profile {d!r}: {exc}") from exc

    def __call__(self, n):
        return interval_count(self, n)


def interval_count(profile, n):
    if n < 1:
        raise ValueError("interval profiles are defined for n >= 1")
    if profile.kind == "constant":
        return int(profile.c)
    return int(_PROFILES[profile.kind](int(n)))
