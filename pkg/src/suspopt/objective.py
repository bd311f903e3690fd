"""Scalar design objective built from a full scenario simulation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from . import metrics, road
from .errors import ConfigError, SimulationError
from .model import SuspensionDesign, VehicleParams
from .simulation import SimConfig, disturbance_end, simulate, simulate_transient

PRESETS = {
    # name: (A_s, A_f)
    "min_sigma": (1.0, 0.0),
    "min_rft": (0.0, 1.0),
    "min_sigma_given_rft": (1.0, 100.0),
    "min_rft_given_sigma": (100.0, 1.0),
}


@dataclass(frozen=True)
class ObjectiveConfig:
    a_s: float = 1.0
    a_f: float = 0.0
    sigma_ref: float = 0.0
    r_ref: float = 0.0
    preset: str = "custom"

    def __post_init__(self):
        if self.a_s < 0 or self.a_f < 0:
            raise ConfigError("objective weights must be non-negative")
        if self.a_s == 0 and self.a_f == 0:
            raise ConfigError("at least one objective weight must be positive")
        if self.sigma_ref < 0 or self.r_ref < 0:
            raise ConfigError("reference values must be non-negative")

    @classmethod
    def from_preset(cls, name: str, sigma_ref: float = 0.0, r_ref: float = 0.0) -> "ObjectiveConfig":
        """Weights of a named preset.

        ``min_sigma_given_rft`` uses ``r_ref`` and ``min_rft_given_sigma`` uses
        ``sigma_ref``; the other reference is zero for every preset.
        """
        try:
            a_s, a_f = PRESETS[name]
        except KeyError:
            raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
        if name == "min_sigma_given_rft":
            return cls(a_s, a_f, 0.0, r_ref, name)
        if name == "min_rft_given_sigma":
            return cls(a_s, a_f, sigma_ref, 0.0, name)
        return cls(a_s, a_f, 0.0, 0.0, name)

    def __call__(self, sigma_aw: float, r_ft: float) -> float:
        return self.a_s * abs(sigma_aw - self.sigma_ref) + self.a_f * abs(r_ft - self.r_ref)


@dataclass(frozen=True)
class Scenario:
    """Operating condition at a fixed natural frequency.

    ``seed`` seeds the first road realization; realization ``k`` uses
    ``seed + k``.  The transient input is traversed at ``transient_speed``
    when settling time is requested.
    """

    params: VehicleParams
    f_n: float = 1.5
    road_class: str = "B"
    length: float = 1000.0
    seed: int = 0
    speed: float = 40.0
    n_components: int = 1000
    n_realizations: int = 1
    sim: SimConfig = field(default_factory=SimConfig)
    transient: object = field(default_factory=road.Bump)
    transient_speed: float = 5.0
    settle_band: float = 0.05

    def __post_init__(self):
        if self.n_realizations < 1:
            raise ConfigError("need at least one road realization")
        road.ProfileSpec(self.road_class, self.length, n_components=self.n_components, seed=self.seed)

    def profile_specs(self) -> list[road.ProfileSpec]:
        return [
            road.ProfileSpec(self.road_class, self.length, n_components=self.n_components, seed=self.seed + k)
            for k in range(self.n_realizations)
        ]

    def sim_config(self) -> SimConfig:
        return replace(self.sim, speed=self.speed)

    def design(self, zeta) -> SuspensionDesign:
        zeta_n, zeta_p = (float(z) for z in zeta)
        return SuspensionDesign(f_n=self.f_n, zeta_p=zeta_p, zeta_n=zeta_n)


@lru_cache(maxsize=64)
def profile(spec: road.ProfileSpec) -> road.SyntheticProfile:
    """Memoized synthesis so repeated evaluations share one profile object."""
    return road.synthesize(spec)


@dataclass(frozen=True)
class Evaluation:
    J: float
    sigma_aw: float
    r_ft: float
    t_s: float = math.nan
    settled: bool | None = None

    def as_dict(self) -> dict:
        return {"J": self.J, "sigma_aw": self.sigma_aw, "r_ft": self.r_ft, "t_s": self.t_s, "settled": self.settled}


class EvaluationError(RuntimeError):
    def __init__(self, message, zeta):
        super().__init__(message)
        self.zeta = tuple(zeta)


def stochastic_metrics(design: SuspensionDesign, scenario: Scenario) -> tuple[float, float]:
    """``(sigma_aw, R_ft)`` averaged over the scenario's road realizations."""
    cfg = scenario.sim_config()
    sigmas, ratios = [], []
    for spec in scenario.profile_specs():
        res = simulate(scenario.params, design, profile(spec), cfg)
        a_w = metrics.weight_acceleration(res.a_s, res.sample_rate)
        i0 = int(np.searchsorted(res.t, cfg.warmup - 0.5 / res.sample_rate))
        a_w = a_w[i0:]
        exposure = (a_w.size - 1) / res.sample_rate
        sigmas.append(metrics.weighted_rms(a_w, exposure))
        ratios.append(metrics.contact_force_ratio(res.f_t[i0:], scenario.params))
    return float(np.mean(sigmas)), float(np.mean(ratios))


def transient_settling(design: SuspensionDesign, scenario: Scenario) -> metrics.Settling:
    res = simulate_transient(
        scenario.params, design, scenario.transient,
        replace(scenario.sim, duration=None), speed=scenario.transient_speed,
    )
    t_end = disturbance_end(scenario.transient, scenario.transient_speed)
    return metrics.settling_time(res.x_s, res.t, t_end, band=scenario.settle_band)


def evaluate(zeta, scenario: Scenario, objective: ObjectiveConfig, settling: bool = False) -> Evaluation:
    """Objective value and raw metrics for ``zeta = (zeta_n, zeta_p)``.

    Settling time is computed only when ``settling`` is set; it never enters ``J``.
    """
    try:
        design = scenario.design(zeta)
        sigma_aw, r_ft = stochastic_metrics(design, scenario)
        t_s, settled = (math.nan, None)
        if settling:
            t_s, settled = transient_settling(design, scenario)
    except (SimulationError, FloatingPointError) as exc:
        raise EvaluationError(f"evaluation failed at zeta={tuple(zeta)}: {exc}", zeta) from exc
    return Evaluation(objective(sigma_aw, r_ft), sigma_aw, r_ft, t_s, settled)


def make_objective(scenario: Scenario, objective: ObjectiveConfig):
    """``x -> J`` closure over ``x = (zeta_n, zeta_p)`` for the optimizer."""

    def J(x):
        return evaluate(x, scenario, objective).J

    return J
