"""Tap stimulus schedules as pure functions of time.

Three generators, matching the two tap methods plus the sustained-press
stimulus:

* amplitude tap: the radiation-pressure amplitude oscillates with an
  exponentially decaying depth and settles at its maximum;
* lateral tap: the focus sweeps along a line whose extent shrinks
  exponentially while the amplitude stays at maximum;
* stationary lateral: a slow (5-15 Hz), sub-millimeter sweep at constant
  amplitude, which reads as steady pressure rather than vibration.

Each generator maps a time to one (amplitude scale, focus offset) sample;
series sampling is defined pointwise so sampled values are bit-identical
to individual calls.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Tuple, Union

TWO_PI = 2.0 * math.pi

#: Sustained-press stimulus bounds; outside them the pressure-like
#: (low-vibration) character of the stimulus is not established.
STATIONARY_F_MIN = 5.0
STATIONARY_F_MAX = 15.0
STATIONARY_SIZE_MAX = 0.001


def _unit_axis(axis) -> Tuple[float, float]:
    ax, ay = float(axis[0]), float(axis[1])
    n = math.hypot(ax, ay)
    if n == 0.0:
        raise ValueError("oscillation axis must be non-zero")
    return (ax / n, ay / n)


@dataclass(frozen=True)
class AmTapParams:
    """Amplitude-tap parameters.

    f_am: oscillation frequency (Hz) during the decaying interval.
    tau: decay time constant (s) of the modulation depth.
    t_att: duration (s) of the decaying interval; amplitude is exactly
        a_max from then on.
    a_max: terminal amplitude scale in (0, 1].
    """

    f_am: float = 200.0
    tau: float = 0.03
    t_att: float = 0.1
    a_max: float = 1.0

    def __post_init__(self):
        if self.f_am <= 0:
            raise ValueError(f"f_am must be positive, got {self.f_am}")
        if self.tau <= 0 or self.t_att <= 0:
            raise ValueError("tau and t_att must be positive")
        if not 0.0 < self.a_max <= 1.0:
            raise ValueError(f"a_max must be in (0, 1], got {self.a_max}")


@dataclass(frozen=True)
class LmTapParams:
    """Lateral-tap parameters: sweep extent decays, amplitude is constant."""

    f_lm: float = 100.0
    size_max: float = 0.010
    size_min: float = 0.0006
    tau: float = 0.03
    t_att: float = 0.1
    a_max: float = 1.0
    axis: Tuple[float, float] = (1.0, 0.0)

    def __post_init__(self):
        if self.f_lm <= 0:
            raise ValueError(f"f_lm must be positive, got {self.f_lm}")
        if not self.size_max > self.size_min >= 0.0:
            raise ValueError("need size_max > size_min >= 0")
        if self.tau <= 0 or self.t_att <= 0:
            raise ValueError("tau and t_att must be positive")
        if not 0.0 < self.a_max <= 1.0:
            raise ValueError(f"a_max must be in (0, 1], got {self.a_max}")
        object.__setattr__(self, "axis", _unit_axis(self.axis))


@dataclass(frozen=True)
class StationaryLmParams:
    """Sustained-press stimulus: bounds are enforced at construction."""

    f_lm: float = 10.0
    size: float = 0.0006
    a_max: float = 1.0
    axis: Tuple[float, float] = (1.0, 0.0)

    def __post_init__(self):
        if not STATIONARY_F_MIN <= self.f_lm <= STATIONARY_F_MAX:
            raise ValueError(
                f"stationary sweep frequency must be within "
                f"[{STATIONARY_F_MIN:g}, {STATIONARY_F_MAX:g}] Hz, got {self.f_lm}")
        if not 0.0 < self.size <= STATIONARY_SIZE_MAX:
            raise ValueError(
                f"stationary sweep size must be within "
                f"(0, {STATIONARY_SIZE_MAX * 1000.0:g}] mm, got {self.size * 1000.0:g} mm")
        if not 0.0 < self.a_max <= 1.0:
            raise ValueError(f"a_max must be in (0, 1], got {self.a_max}")
        object.__setattr__(self, "axis", _unit_axis(self.axis))


ProfileParams = Union[AmTapParams, LmTapParams, StationaryLmParams]


@dataclass(frozen=True)
class DriveSample:
    """One control-tick stimulus command, relative to the contact anchor."""

    amplitude_scale: float
    focus_offset: Tuple[float, float]  # m, in the interaction plane


_ZERO_OFFSET = (0.0, 0.0)


def am_tap_sample(t: float, p: AmTapParams) -> DriveSample:
    """Amplitude tap at time t (seconds since stimulus onset).

    Modulation depth m(t) = exp(-t/tau) while t < t_att, then 0. The
    amplitude starts at zero, oscillates with shrinking depth and rising
    mean, and is exactly a_max from t_att on. The focus never moves.
    """
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    if t >= p.t_att:
        return DriveSample(p.a_max, _ZERO_OFFSET)
    m = math.exp(-t / p.tau)
    osc = (1.0 + math.sin(TWO_PI * p.f_am * t - math.pi / 2.0)) / 2.0
    return DriveSample(p.a_max * ((1.0 - m) + m * osc), _ZERO_OFFSET)


def lm_tap_sample(t: float, p: LmTapParams) -> DriveSample:
    """Lateral tap at time t: extent L(t) decays, amplitude stays a_max."""
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    if t >= p.t_att:
        size = p.size_min
    else:
        size = max(p.size_min, p.size_max * math.exp(-t / p.tau))
    off = (size / 2.0) * math.sin(TWO_PI * p.f_lm * t)
    return DriveSample(p.a_max, (off * p.axis[0], off * p.axis[1]))


def stationary_lm_sample(t: float, p: StationaryLmParams) -> DriveSample:
    """Sustained-press sweep at time t; |offset| never exceeds size/2."""
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    off = (p.size / 2.0) * math.sin(TWO_PI * p.f_lm * t)
    return DriveSample(p.a_max, (off * p.axis[0], off * p.axis[1]))


def generator_for(profile: ProfileParams) -> Callable[[float], DriveSample]:
    """Bind a params object to its sampling function."""
    if isinstance(profile, AmTapParams):
        return lambda t: am_tap_sample(t, profile)
    if isinstance(profile, LmTapParams):
        return lambda t: lm_tap_sample(t, profile)
    if isinstance(profile, StationaryLmParams):
        return lambda t: stationary_lm_sample(t, profile)
    raise TypeError(f"not a profile params object: {profile!r}")


@dataclass(frozen=True)
class FrameSeries:
    """Control-rate samples; sample n is at t0 + n/rate."""

    rate: float
    t0: float
    samples: Tuple[DriveSample, ...]

    def __post_init__(self):
        if self.rate <= 0:
            raise ValueError("frame rate must be positive")
        if not self.samples:
            raise ValueError("frame series must not be empty")

    def __len__(self) -> int:
        return len(self.samples)

    def time(self, n: int) -> float:
        return self.t0 + n / self.rate


def sample_profile(profile, rate: float, duration: float,
                   t0: float = 0.0) -> FrameSeries:
    """Sample a profile at a fixed rate: floor(duration*rate) frames.

    `profile` is a params object or any t -> DriveSample callable. Each
    sample equals the pointwise generator at t0 + n/rate exactly.
    """
    if rate <= 0:
        raise ValueError(f"rate must be positive, got {rate}")
    if duration <= 0:
        raise ValueError(f"duration must be positive, got {duration}")
    gen = profile if callable(profile) else generator_for(profile)
    n = int(math.floor(duration * rate))
    if n < 1:
        raise ValueError(f"duration {duration} s yields no frames at {rate} Hz")
    return FrameSeries(float(rate), float(t0),
                       tuple(gen(t0 + i / rate) for i in range(n)))
