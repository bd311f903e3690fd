"""Scenario-driven optimization of passive quarter-car suspensions with asymmetric damping."""

__version__ = "0.1.0"

from .ce import CEConfig, CEResult, optimize
from .model import (
    LIGHT,
    MID_HEAVY,
    PhysicalSuspension,
    State,
    SuspensionDesign,
    VehicleParams,
    derive_physical,
    static_equilibrium,
)
from .objective import ObjectiveConfig, Scenario, evaluate
from .road import Bump, Flat, ProfileSpec, Step, synthesize
from .simulation import SimConfig, SimResult, simulate, simulate_transient

__all__ = [
    "Bump", "CEConfig", "CEResult", "Flat", "LIGHT", "MID_HEAVY", "ObjectiveConfig",
    "PhysicalSuspension", "ProfileSpec", "Scenario", "SimConfig", "SimResult", "State", "Step",
    "SuspensionDesign", "VehicleParams", "derive_physical", "evaluate", "optimize",
    "simulate", "simulate_transient", "static_equilibrium", "synthesize",
]
