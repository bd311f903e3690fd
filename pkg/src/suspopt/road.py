"""ISO 8608 road profiles and deterministic transient inputs.

Random profiles are sums of sinusoids on a uniform spatial-frequency grid,
``y(x) = sum A_i sin(2 pi n_i x + phi_i)`` with ``A_i = sqrt(G_d(n_i) dn)``
and phases drawn uniformly from ``[0, 2 pi)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np

from .errors import DomainError

N0 = 0.1  # reference spatial frequency [cycles/m]
WAVINESS = 2.0
BAND = (0.011, 2.83)  # [cycles/m]

# G_d(n0) per class in units of 1e-6 m^3
ROAD_CLASSES = {
    "A": 16.0,
    "B": 64.0,
    "C": 256.0,
    "D": 1024.0,
    "E": 4096.0,
    "F": 16384.0,
    "G": 65536.0,
    "H": 262144.0,
}


@dataclass(frozen=True)
class RoadClass:
    label: str

    def __post_init__(self):
        if self.label not in ROAD_CLASSES:
            raise DomainError(f"unknown ISO 8608 class {self.label!r}")

    @property
    def gd_n0(self) -> float:
        """PSD at the reference frequency [m^3]."""
        return ROAD_CLASSES[self.label] * 1e-6


def _as_class(road_class) -> RoadClass:
    return road_class if isinstance(road_class, RoadClass) else RoadClass(str(road_class).upper())


def psd(road_class, n):
    """Displacement PSD ``G_d(n)`` [m^3] of an ISO 8608 class."""
    rc = _as_class(road_class)
    n = np.asarray(n, dtype=float)
    if np.any(~(n > 0)):
        raise DomainError("spatial frequency must be positive")
    out = rc.gd_n0 * (n / N0) ** (-WAVINESS)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class ProfileSpec:
    road_class: str = "B"
    length: float = 1000.0  # [m]
    n_min: float = BAND[0]
    n_max: float = BAND[1]
    n_components: int = 1000
    seed: int = 0

    def __post_init__(self):
        _as_class(self.road_class)
        lo, hi = BAND
        if not (lo <= self.n_min < self.n_max <= hi):
            raise DomainError(
                f"band [{self.n_min}, {self.n_max}] must satisfy {lo} <= n_min < n_max <= {hi}"
            )
        if self.n_components < 2:
            raise DomainError("need at least two sinusoidal components")
        if not self.length > 0:
            raise DomainError("profile length must be positive")


@dataclass(frozen=True, eq=False)
class SyntheticProfile:
    amplitudes: np.ndarray  # [m]
    frequencies: np.ndarray  # [cycles/m]
    phases: np.ndarray  # [rad]
    spec: ProfileSpec | None = None

    @property
    def delta_n(self) -> float:
        if self.spec is None:
            return float(self.frequencies[1] - self.frequencies[0])
        return (self.spec.n_max - self.spec.n_min) / self.spec.n_components

    @property
    def length(self) -> float | None:
        return None if self.spec is None else self.spec.length

    def components(self):
        return list(zip(self.amplitudes.tolist(), self.frequencies.tolist(), self.phases.tolist()))

    def height(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty_like(x)
        k = 2.0 * math.pi * self.frequencies
        # chunked to bound the (len(x), N) temporary
        step = max(1, 4_000_000 // len(k))
        for start in range(0, len(x), step):
            xs = x[start:start + step]
            out[start:start + step] = np.sin(np.outer(xs, k) + self.phases) @ self.amplitudes
        return out

    def height_grid(self, dx: float, n: int, block: int = 1024) -> np.ndarray:
        """Heights at ``x = j dx`` for ``j = 0 .. n-1``.

        Same values as ``height`` to rounding, but each component's phasor is
        split into an exact block-start term and a shared in-block table, so the
        sum becomes one complex matrix product.
        """
        k = 2.0 * math.pi * self.frequencies
        n_blocks = -(-n // block)
        starts = dx * block * np.arange(n_blocks)
        lead = self.amplitudes * np.exp(1j * (np.outer(starts, k) + self.phases))
        table = np.exp(1j * np.outer(k, dx * np.arange(block)))
        return (lead @ table).imag.ravel()[:n]

    def variance(self) -> float:
        """Ensemble variance of the height, ``sum A_i^2 / 2``."""
        return 0.5 * float(np.sum(self.amplitudes ** 2))


def synthesize(spec: ProfileSpec) -> SyntheticProfile:
    dn = (spec.n_max - spec.n_min) / spec.n_components
    n_i = spec.n_min + (np.arange(spec.n_components) + 0.5) * dn
    amplitudes = np.sqrt(psd(spec.road_class, n_i) * dn)
    rng = np.random.default_rng(spec.seed)
    phases = rng.uniform(0.0, 2.0 * math.pi, spec.n_components)
    return SyntheticProfile(amplitudes=amplitudes, frequencies=n_i, phases=phases, spec=spec)


@dataclass(frozen=True)
class Step:
    height: float = 0.05
    x0: float = 2.5

    def __post_init__(self):
        if self.height < 0:
            raise DomainError("step height must be non-negative")

    @property
    def end(self) -> float:
        return self.x0

    def height_at(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x >= self.x0, self.height, 0.0)


@dataclass(frozen=True)
class Bump:
    """Half-sine bump of the given height and base length starting at ``x0``."""

    height: float = 0.05
    length: float = 3.7
    x0: float = 2.5

    def __post_init__(self):
        if self.height < 0:
            raise DomainError("bump height must be non-negative")
        if not self.length > 0:
            raise DomainError("bump length must be positive")

    @property
    def end(self) -> float:
        return self.x0 + self.length

    def height_at(self, x):
        x = np.asarray(x, dtype=float)
        u = (x - self.x0) / self.length
        inside = (u >= 0.0) & (u <= 1.0)
        return np.where(inside, self.height * np.sin(math.pi * np.clip(u, 0.0, 1.0)), 0.0)


@dataclass(frozen=True)
class Flat:
    end: float = 0.0

    def height_at(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))


RoadExcitation = Union[SyntheticProfile, Step, Bump, Flat]


def evaluate(excitation: RoadExcitation, x):
    """Road height ``y`` [m] at longitudinal position(s) ``x``."""
    x_arr = np.asarray(x, dtype=float)
    if isinstance(excitation, SyntheticProfile):
        out = excitation.height(x_arr).reshape(x_arr.shape)
    elif isinstance(excitation, (Step, Bump, Flat)):
        out = np.asarray(excitation.height_at(x_arr), dtype=float)
    else:
        raise DomainError(f"unsupported excitation {type(excitation).__name__}")
    return out if out.ndim else float(out)


# `eval` is the name the rest of the toolkit documents; keep both spellings.
eval = evaluate  # noqa: A001


def export_profile(excitation: RoadExcitation, path, length: float, dx: float = 0.05) -> Path:
    """Write ``x, y`` columns of a sampled profile to a CSV file."""
    from .io import write_columns

    x = np.arange(0.0, length + 0.5 * dx, dx)
    y = evaluate(excitation, x)
    return write_columns(path, {"x": x, "y": y})
