"""Fixed-step RK4 traversal of a road excitation at constant speed."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from numba import njit

from . import road
from .errors import ConfigError, SimulationError
from .model import (
    DEFAULT_EPS,
    SuspensionDesign,
    VehicleParams,
    derive_physical,
    static_equilibrium,
)

TRANSIENT_SPEED = 5.0  # [m/s]
SETTLE_MARGIN = 10.0  # simulated time past the end of a transient input [s]


@dataclass(frozen=True)
class SimConfig:
    """Integration and sampling controls.

    ``duration=None`` means the time to traverse a synthetic profile
    (``L / v``) or the end of a transient input plus ``SETTLE_MARGIN``.
    """

    speed: float = 40.0  # [m/s]
    duration: float | None = None  # [s]
    dt: float = 1e-3  # output sampling interval [s]
    max_step: float = 1e-3  # upper bound on the internal RK4 step [s]
    eps: float = DEFAULT_EPS
    warmup: float = 2.0  # discarded before stationary metrics [s]

    def __post_init__(self):
        if not self.speed > 0:
            raise ConfigError("speed must be positive")
        if self.duration is not None and not self.duration > 0:
            raise ConfigError("duration must be positive")
        if not (self.dt > 0 and self.max_step > 0):
            raise ConfigError("dt and max_step must be positive")
        if not self.eps > 0:
            raise ConfigError("eps must be positive")
        if self.warmup < 0:
            raise ConfigError("warmup must be non-negative")


@dataclass(frozen=True, eq=False)
class SimResult:
    t: np.ndarray
    x_u: np.ndarray
    v_u: np.ndarray
    x_s: np.ndarray
    v_s: np.ndarray
    a_s: np.ndarray
    f_t: np.ndarray
    y: np.ndarray  # road height under the tire
    sample_rate: float

    @property
    def wheel_travel(self) -> np.ndarray:
        """Suspension extension ``x_s - x_u`` [m]."""
        return self.x_s - self.x_u

    def after(self, t0: float) -> "SimResult":
        """Samples with ``t >= t0``."""
        i = int(np.searchsorted(self.t, t0 - 0.5 / self.sample_rate))
        return SimResult(
            *(getattr(self, k)[i:] for k in ("t", "x_u", "v_u", "x_s", "v_s", "a_s", "f_t", "y")),
            sample_rate=self.sample_rate,
        )

    def columns(self) -> dict[str, np.ndarray]:
        return {
            "t": self.t,
            "a_s": self.a_s,
            "f_t": self.f_t,
            "x_s": self.x_s,
            "x_u": self.x_u,
            "wheel_travel": self.wheel_travel,
            "y": self.y,
        }


@njit(cache=True, nogil=True)
def _rhs(x_u, v_u, x_s, v_s, y, m_s, m_u, k_t, g, k_s, c_p, c_n, eps):
    v_rel = v_s - v_u
    c = 0.5 * (c_p + c_n) + 0.5 * (c_p - c_n) * v_rel / (abs(v_rel) + eps)
    d = y - x_u
    kt = 0.5 * k_t * (1.0 + d / (abs(d) + eps))
    f_susp = k_s * (x_u - x_s) - c * v_rel
    f_tire = kt * d
    return v_u, (f_tire - f_susp) / m_u - g, v_s, f_susp / m_s - g, f_tire


@njit(cache=True, nogil=True)
def _integrate(x0, y_half, h, n_steps, stride, m_s, m_u, k_t, g, k_s, c_p, c_n, eps, out):
    """RK4 over ``n_steps`` steps of size ``h``.

    ``y_half[j]`` is the road height at time ``j h / 2``.  ``out`` has shape
    ``(n_out, 6)`` for ``x_u, v_u, x_s, v_s, a_s, f_t``; it is written every
    ``stride`` steps.  Returns the first step index with a non-finite state,
    or -1.
    """
    xu, vu, xs, vs = x0[0], x0[1], x0[2], x0[3]
    row = 0
    for i in range(n_steps + 1):
        if i % stride == 0:
            r = _rhs(xu, vu, xs, vs, y_half[2 * i], m_s, m_u, k_t, g, k_s, c_p, c_n, eps)
            out[row, 0] = xu
            out[row, 1] = vu
            out[row, 2] = xs
            out[row, 3] = vs
            out[row, 4] = r[3]
            out[row, 5] = r[4]
            row += 1
        if i == n_steps:
            break
        y0 = y_half[2 * i]
        y1 = y_half[2 * i + 1]
        y2 = y_half[2 * i + 2]
        k1 = _rhs(xu, vu, xs, vs, y0, m_s, m_u, k_t, g, k_s, c_p, c_n, eps)
        k2 = _rhs(xu + 0.5 * h * k1[0], vu + 0.5 * h * k1[1], xs + 0.5 * h * k1[2],
                  vs + 0.5 * h * k1[3], y1, m_s, m_u, k_t, g, k_s, c_p, c_n, eps)
        k3 = _rhs(xu + 0.5 * h * k2[0], vu + 0.5 * h * k2[1], xs + 0.5 * h * k2[2],
                  vs + 0.5 * h * k2[3], y1, m_s, m_u, k_t, g, k_s, c_p, c_n, eps)
        k4 = _rhs(xu + h * k3[0], vu + h * k3[1], xs + h * k3[2],
                  vs + h * k3[3], y2, m_s, m_u, k_t, g, k_s, c_p, c_n, eps)
        xu += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
        vu += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
        xs += h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
        vs += h / 6.0 * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3])
        if not (math.isfinite(xu) and math.isfinite(vu) and math.isfinite(xs) and math.isfinite(vs)):
            return i + 1
    return -1


def _default_duration(excitation, config: SimConfig) -> float:
    if config.duration is not None:
        return config.duration
    if isinstance(excitation, road.SyntheticProfile):
        if excitation.length is None:
            raise ConfigError("synthetic profile without a length needs an explicit duration")
        return excitation.length / config.speed
    return excitation.end / config.speed + SETTLE_MARGIN


def _grid(duration: float, config: SimConfig) -> tuple[float, int, int]:
    """Internal step, number of steps and output stride."""
    stride = max(1, math.ceil(config.dt / config.max_step - 1e-9))
    h = config.dt / stride
    n_out = int(round(duration / config.dt))
    if n_out < 1:
        raise ConfigError("duration shorter than one output interval")
    return h, n_out * stride, stride


@lru_cache(maxsize=16)
def _road_samples(excitation, speed: float, h: float, n_steps: int) -> np.ndarray:
    dx = speed * 0.5 * h
    if isinstance(excitation, road.SyntheticProfile):
        y = excitation.height_grid(dx, 2 * n_steps + 1)
    else:
        y = np.asarray(road.evaluate(excitation, dx * np.arange(2 * n_steps + 1)), dtype=float)
    y.setflags(write=False)
    return y


def road_samples(excitation, config: SimConfig) -> np.ndarray:
    """Road heights at the RK4 half-step times (cached per excitation)."""
    duration = _default_duration(excitation, config)
    h, n_steps, _ = _grid(duration, config)
    return _road_samples(excitation, config.speed, h, n_steps)


def simulate(
    params: VehicleParams,
    design: SuspensionDesign,
    excitation,
    config: SimConfig = SimConfig(),
    initial_state=None,
) -> SimResult:
    """Integrate the quarter car over ``excitation`` starting from static equilibrium."""
    if isinstance(excitation, road.SyntheticProfile):
        nyquist = 0.5 / config.dt
        f_max = float(np.max(excitation.frequencies)) * config.speed
        if nyquist <= f_max:
            raise ConfigError(
                f"dt={config.dt} gives Nyquist {nyquist:.1f} Hz below the excitation maximum {f_max:.1f} Hz"
            )
    duration = _default_duration(excitation, config)
    h, n_steps, stride = _grid(duration, config)
    y_half = _road_samples(excitation, config.speed, h, n_steps)

    phys = derive_physical(design, params)
    if initial_state is None:
        initial_state = static_equilibrium(params, design, config.eps)
    x0 = np.asarray(
        initial_state.as_array() if hasattr(initial_state, "as_array") else initial_state, dtype=float
    )
    n_out = n_steps // stride + 1
    out = np.empty((n_out, 6))
    bad = _integrate(
        x0, y_half, h, n_steps, stride,
        params.m_s, params.m_u, params.k_t_nom, params.g,
        phys.k_s, phys.c_p, phys.c_n, config.eps, out,
    )
    if bad >= 0:
        raise SimulationError(f"non-finite state at t={bad * h:.6g} s for {design}", time=bad * h)
    t = np.arange(n_out) * config.dt
    return SimResult(
        t=t,
        x_u=out[:, 0].copy(),
        v_u=out[:, 1].copy(),
        x_s=out[:, 2].copy(),
        v_s=out[:, 3].copy(),
        a_s=out[:, 4].copy(),
        f_t=out[:, 5].copy(),
        y=y_half[::2 * stride].copy(),
        sample_rate=1.0 / config.dt,
    )


def simulate_transient(
    params: VehicleParams,
    design: SuspensionDesign,
    excitation=None,
    config: SimConfig | None = None,
    speed: float = TRANSIENT_SPEED,
) -> SimResult:
    """Bump or step traversal at low speed, long enough for the body motion to decay."""
    if excitation is None:
        excitation = road.Bump()
    if isinstance(excitation, road.SyntheticProfile):
        raise ConfigError("transient runs take a Bump, Step or Flat input")
    config = replace(config or SimConfig(), speed=speed)
    return simulate(params, design, excitation, config)


def disturbance_end(excitation, speed: float) -> float:
    """Time at which the tire leaves a transient input [s]."""
    return excitation.end / speed


def export_timeseries(result: SimResult, path, provenance=None):
    from .io import write_columns

    return write_columns(path, result.columns(), provenance)
