"""Quarter-car model: parameters, design variables and the smoothed nonlinear dynamics.

State ordering follows ``X = [x_u, v_u, x_s, v_s]`` and the input vector is
``U = [y, g]``.  Displacements are measured from the unloaded configuration,
so the static sag under gravity is part of the solution rather than removed
from the equations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

DEFAULT_EPS = 1e-6

FN_BOUNDS = (1.0, 2.0)
ZETA_BOUNDS = (0.0, 1.0)


@dataclass(frozen=True)
class VehicleParams:
    """Masses and tire stiffness of one vehicle corner."""

    m_s: float  # sprung mass [kg]
    m_u: float  # unsprung mass [kg]
    k_t_nom: float  # tire stiffness while in contact [N/m]
    g: float = 9.81

    def __post_init__(self):
        for name in ("m_s", "m_u", "k_t_nom"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be positive, got {value!r}")
        if not (math.isfinite(self.g) and self.g >= 0):
            raise DomainError(f"g must be non-negative, got {self.g!r}")

    @property
    def static_load(self) -> float:
        """Static tire load ``(m_s + m_u) g`` [N]."""
        return (self.m_s + self.m_u) * self.g


LIGHT = VehicleParams(m_s=250.0, m_u=40.0, k_t_nom=200_000.0)
MID_HEAVY = VehicleParams(m_s=500.0, m_u=50.0, k_t_nom=250_000.0)

VEHICLES = {"light": LIGHT, "mid-heavy": MID_HEAVY}


@dataclass(frozen=True)
class SuspensionDesign:
    """Normalized suspension design: natural frequency and the two damping ratios."""

    f_n: float  # [Hz]
    zeta_p: float  # rebound (extension) damping ratio
    zeta_n: float  # compression damping ratio

    def __post_init__(self):
        lo, hi = FN_BOUNDS
        if not lo <= self.f_n <= hi:
            raise DomainError(f"f_n={self.f_n!r} outside [{lo}, {hi}] Hz")
        zlo, zhi = ZETA_BOUNDS
        for name in ("zeta_p", "zeta_n"):
            value = getattr(self, name)
            if not zlo <= value <= zhi:
                raise DomainError(f"{name}={value!r} outside [{zlo}, {zhi}]")


@dataclass(frozen=True)
class PhysicalSuspension:
    k_s: float  # [N/m]
    c_p: float  # rebound damping coefficient [N s/m]
    c_n: float  # compression damping coefficient [N s/m]


@dataclass(frozen=True)
class State:
    x_u: float
    v_u: float
    x_s: float
    v_s: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x_u, self.v_u, self.x_s, self.v_s])

    @classmethod
    def from_array(cls, arr) -> "State":
        x_u, v_u, x_s, v_s = (float(a) for a in arr)
        return cls(x_u, v_u, x_s, v_s)


@dataclass(frozen=True)
class Outputs:
    a_s: float  # sprung-mass acceleration [m/s^2]
    f_t: float  # tire contact force, compressive positive [N]


def derive_physical(design: SuspensionDesign, params: VehicleParams) -> PhysicalSuspension:
    """Spring stiffness and damping coefficients from the normalized design."""
    if not isinstance(design, SuspensionDesign):
        raise DomainError("design must be a SuspensionDesign")
    k_s = (2.0 * math.pi * design.f_n) ** 2 * params.m_s
    c_crit = 2.0 * math.sqrt(k_s * params.m_s)
    return PhysicalSuspension(k_s=k_s, c_p=design.zeta_p * c_crit, c_n=design.zeta_n * c_crit)


def smoothed_damping(v_rel, phys: PhysicalSuspension, eps: float = DEFAULT_EPS):
    """Regularized asymmetric damping coefficient.

    ``v_rel = v_s - v_u``; extension (``v_rel >= 0``) uses the rebound
    coefficient ``c_p`` and compression uses ``c_n``.  Accepts scalars or arrays.
    """
    v_rel = np.asarray(v_rel, dtype=float)
    mean = 0.5 * (phys.c_p + phys.c_n)
    half = 0.5 * (phys.c_p - phys.c_n)
    out = mean + half * v_rel / (np.abs(v_rel) + eps)
    return out if out.ndim else float(out)


def smoothed_tire_stiffness(deflection, params: VehicleParams, eps: float = DEFAULT_EPS):
    """Regularized lift-off stiffness; ``deflection = y - x_u`` (compression positive)."""
    d = np.asarray(deflection, dtype=float)
    out = 0.5 * params.k_t_nom * (1.0 + d / (np.abs(d) + eps))
    return out if out.ndim else float(out)


def piecewise_damping(v_rel, phys: PhysicalSuspension):
    """Unregularized switching law (reference for the smoothed form)."""
    v_rel = np.asarray(v_rel, dtype=float)
    out = np.where(v_rel >= 0.0, phys.c_p, phys.c_n)
    return out if out.ndim else float(out)


def piecewise_tire_stiffness(deflection, params: VehicleParams):
    d = np.asarray(deflection, dtype=float)
    out = np.where(d >= 0.0, params.k_t_nom, 0.0)
    return out if out.ndim else float(out)


def _forces(state: State, road_height: float, params, phys, eps):
    v_rel = state.v_s - state.v_u
    c_s = smoothed_damping(v_rel, phys, eps)
    deflection = road_height - state.x_u
    k_t = smoothed_tire_stiffness(deflection, params, eps)
    # suspension force acting upward on the sprung mass
    f_susp = phys.k_s * (state.x_u - state.x_s) - c_s * v_rel
    f_tire = k_t * deflection
    return f_susp, f_tire


def state_derivative(
    state: State,
    road_height: float,
    params: VehicleParams,
    design: SuspensionDesign,
    eps: float = DEFAULT_EPS,
) -> np.ndarray:
    """Time derivative ``[v_u, a_u, v_s, a_s]`` of the state."""
    phys = derive_physical(design, params)
    f_susp, f_tire = _forces(state, road_height, params, phys, eps)
    a_u = (f_tire - f_susp) / params.m_u - params.g
    a_s = f_susp / params.m_s - params.g
    out = np.array([state.v_u, a_u, state.v_s, a_s])
    if not np.all(np.isfinite(out)):
        raise FloatingPointError(f"non-finite state derivative at {state}")
    return out


def outputs(
    state: State,
    road_height: float,
    params: VehicleParams,
    design: SuspensionDesign,
    eps: float = DEFAULT_EPS,
) -> Outputs:
    phys = derive_physical(design, params)
    f_susp, f_tire = _forces(state, road_height, params, phys, eps)
    return Outputs(a_s=f_susp / params.m_s - params.g, f_t=f_tire)


def static_tire_deflection(params: VehicleParams, eps: float = DEFAULT_EPS) -> float:
    """Tire compression carrying the static load under the smoothed stiffness law.

    Solves ``k_t(d) d = (m_s + m_u) g`` for ``d >= 0``; with the regularized
    law this reduces to ``2 d^2 + (eps - b) d - b eps = 0`` where
    ``b = 2 (m_s + m_u) g / k_t``.
    """
    b = 2.0 * params.static_load / params.k_t_nom
    if b == 0.0:
        return 0.0
    q = b - eps
    return (q + math.sqrt(q * q + 8.0 * b * eps)) / 4.0


def static_equilibrium(
    params: VehicleParams, design: SuspensionDesign, eps: float = DEFAULT_EPS
) -> State:
    """Resting state on a flat road at height zero."""
    phys = derive_physical(design, params)
    x_u = -static_tire_deflection(params, eps)
    x_s = x_u - params.m_s * params.g / phys.k_s
    return State(x_u=x_u, v_u=0.0, x_s=x_s, v_s=0.0)
