"""Ride-comfort, road-holding and transient performance metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy import signal

from .errors import ConfigError, DomainError
from .model import VehicleParams

MIN_SAMPLE_RATE = 500.0


@dataclass(frozen=True)
class WkFilter:
    """Vertical whole-body weighting as a cascade of analog second-order stages.

    Band limiting is a Butterworth high-pass/low-pass pair; the shaping stages
    are the acceleration-velocity transition and the upward step.
    """

    f_highpass: float = 0.4
    f_lowpass: float = 100.0
    q_band: float = 1.0 / math.sqrt(2.0)
    f_transition: float = 12.5
    f_transition_pole: float = 12.5
    q_transition: float = 0.63
    f_step_zero: float = 2.37
    q_step_zero: float = 0.91
    f_step_pole: float = 3.35
    q_step_pole: float = 0.91

    def analog_sections(self) -> list[tuple[np.ndarray, np.ndarray]]:
        """``(b, a)`` polynomials in ``s`` for each stage, highest power first."""
        w1 = 2 * math.pi * self.f_highpass
        w2 = 2 * math.pi * self.f_lowpass
        w3 = 2 * math.pi * self.f_transition
        w4 = 2 * math.pi * self.f_transition_pole
        w5 = 2 * math.pi * self.f_step_zero
        w6 = 2 * math.pi * self.f_step_pole
        q = self.q_band
        return [
            (np.array([1.0, 0.0, 0.0]), np.array([1.0, w1 / q, w1 ** 2])),
            (np.array([0.0, 0.0, w2 ** 2]), np.array([1.0, w2 / q, w2 ** 2])),
            # (1 + s/w3) / (1 + s/(Q4 w4) + s^2/w4^2)
            (np.array([0.0, w4 ** 2 / w3, w4 ** 2]), np.array([1.0, w4 / self.q_transition, w4 ** 2])),
            # gain w5^2/w6^2 at DC rising to 1
            (np.array([1.0, w5 / self.q_step_zero, w5 ** 2]), np.array([1.0, w6 / self.q_step_pole, w6 ** 2])),
        ]

    def analog_response(self, f) -> np.ndarray:
        s = 2j * math.pi * np.asarray(f, dtype=float)
        h = np.ones_like(s)
        for b, a in self.analog_sections():
            h = h * np.polyval(b, s) / np.polyval(a, s)
        return h

    def sos(self, sample_rate: float) -> np.ndarray:
        """Bilinear-transform discretization as second-order sections."""
        if sample_rate < MIN_SAMPLE_RATE:
            raise ConfigError(f"Wk weighting needs at least {MIN_SAMPLE_RATE:g} Hz, got {sample_rate:g}")
        return _sos(self, float(sample_rate))

    def digital_response(self, f, sample_rate: float) -> np.ndarray:
        _, h = signal.sosfreqz(self.sos(sample_rate), worN=np.asarray(f, dtype=float), fs=sample_rate)
        return h


@lru_cache(maxsize=32)
def _sos(wk: WkFilter, sample_rate: float) -> np.ndarray:
    rows = []
    for b, a in wk.analog_sections():
        bz, az = signal.bilinear(b, a, fs=sample_rate)
        bz = np.pad(bz, (0, 3 - len(bz)))
        az = np.pad(az, (0, 3 - len(az)))
        rows.append(np.concatenate([bz / az[0], az / az[0]]))
    sos = np.array(rows)
    sos.setflags(write=False)
    return sos


WK = WkFilter()


def weight_acceleration(a_s, sample_rate: float, wk: WkFilter = WK) -> np.ndarray:
    """Wk-weighted acceleration, filtered from rest."""
    return signal.sosfilt(np.array(wk.sos(sample_rate)), np.asarray(a_s, dtype=float))


def weighted_rms(a_w, exposure: float) -> float:
    """RMS over ``[0, exposure]`` by the trapezoidal rule; samples are uniform."""
    a_w = np.asarray(a_w, dtype=float)
    if a_w.size < 2:
        raise DomainError("need at least two samples")
    if not exposure > 0:
        raise DomainError("exposure time must be positive")
    dt = exposure / (a_w.size - 1)
    sq = a_w * a_w
    integral = dt * (sq.sum() - 0.5 * (sq[0] + sq[-1]))
    return math.sqrt(integral / exposure)


@dataclass(frozen=True)
class ComfortLevel:
    label: str
    low: float
    high: float

    def contains(self, value: float) -> bool:
        if self.low == 0.0:
            return value < self.high
        if math.isinf(self.high):
            return value > self.low
        return self.low <= value <= self.high


COMFORT_LEVELS = (
    ComfortLevel("not uncomfortable", 0.0, 0.315),
    ComfortLevel("a little uncomfortable", 0.315, 0.63),
    ComfortLevel("fairly uncomfortable", 0.5, 1.0),
    ComfortLevel("uncomfortable", 0.8, 1.6),
    ComfortLevel("very uncomfortable", 1.25, 2.5),
    ComfortLevel("extremely uncomfortable", 2.0, math.inf),
)


def classify_comfort(sigma_aw: float) -> list[str]:
    """All comfort labels whose (overlapping) range contains ``sigma_aw``, mildest first."""
    if not sigma_aw >= 0:
        raise DomainError("weighted RMS acceleration must be non-negative")
    return [lvl.label for lvl in COMFORT_LEVELS if lvl.contains(sigma_aw)]


def contact_force_ratio(f_t, params: VehicleParams) -> float:
    """Population standard deviation of the tire force over the static load."""
    f_t = np.asarray(f_t, dtype=float)
    if f_t.size == 0:
        raise DomainError("empty tire-force series")
    return float(np.std(f_t)) / params.static_load


class Settling(NamedTuple):
    time: float  # [s] after the end of the disturbance; the horizon if unsettled
    settled: bool


def settling_time(
    x_s,
    t,
    disturbance_end: float,
    band: float = 0.05,
    final_value: float | None = None,
    tail: float = 0.1,
) -> Settling:
    """Time after ``disturbance_end`` for ``x_s`` to stay inside a band around its final value.

    The band is ``band`` times the peak excursion after the disturbance.  The
    final value defaults to the last sample.  A response whose last exit from
    the band falls inside the final ``tail`` fraction of the horizon is
    reported as unsettled, with the horizon length as its time.
    """
    x_s = np.asarray(x_s, dtype=float)
    t = np.asarray(t, dtype=float)
    if x_s.shape != t.shape or x_s.size < 2:
        raise DomainError("x_s and t must be matching series of at least two samples")
    i0 = int(np.searchsorted(t, disturbance_end))
    if i0 >= t.size - 1:
        raise DomainError("series ends before the disturbance does")
    ref = x_s[-1] if final_value is None else float(final_value)
    dev = np.abs(x_s[i0:] - ref)
    horizon = float(t[-1] - t[i0])
    peak = float(dev.max())
    if peak == 0.0:
        return Settling(0.0, True)
    outside = np.flatnonzero(dev > band * peak)
    if outside.size == 0:
        return Settling(0.0, True)
    last = int(outside[-1])
    if last + 1 >= dev.size:
        return Settling(horizon, False)
    t_in = float(t[i0 + last + 1] - t[i0])
    if t_in > (1.0 - tail) * horizon:
        return Settling(horizon, False)
    return Settling(t_in, True)
