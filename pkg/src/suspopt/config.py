"""Declarative study configuration loaded from TOML.

Schema (every table and key is optional; defaults shown)::

    [study]
    seed = 0                 # road realization and optimizer seed
    output_dir = "results"
    workers = 1

    [vehicle]
    class = "light"          # "light", "mid-heavy" or "custom"
    # m_s, m_u, k_t, g override the class values

    [road]
    class = "B"
    length = 1000.0
    n_components = 1000
    realizations = 1         # road realizations averaged per evaluation

    [operating]
    speed = 40.0
    fn = 1.5                 # contour/transient/simulate natural frequency
    fn_grid = [1.0, 1.25, 1.5, 1.75, 2.0]

    [simulation]
    dt = 0.001
    max_step = 0.001
    eps = 1e-6
    warmup = 2.0

    [objective]
    presets = ["min_sigma", "min_rft"]
    sigma_ref = 0.0          # used by min_rft_given_sigma
    r_ref = 0.0              # used by min_sigma_given_rft

    [optimizer]
    population = 75
    elite_fraction = 0.1
    alpha = 0.8
    max_iter = 25
    tol = 0.001

    [contour]
    resolution = 41

    [transient]
    kind = "bump"            # "bump" or "step"
    height = 0.05
    length = 3.7             # bump base length
    x0 = 2.5
    speed = 5.0
    band = 0.05
    designs = []             # list of [zeta_n, zeta_p]

    [realizations]
    n_seeds = 10
"""

from __future__ import annotations

import copy
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import road
from .ce import CEConfig
from .errors import ConfigError
from .model import FN_BOUNDS, VEHICLES, VehicleParams
from .objective import PRESETS, ObjectiveConfig, Scenario
from .simulation import SimConfig

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

DEFAULTS = {
    "study": {"seed": 0, "output_dir": "results", "workers": 1},
    "vehicle": {"class": "light"},
    "road": {"class": "B", "length": 1000.0, "n_components": 1000, "realizations": 1},
    "operating": {"speed": 40.0, "fn": 1.5, "fn_grid": [1.0, 1.25, 1.5, 1.75, 2.0]},
    "simulation": {"dt": 1e-3, "max_step": 1e-3, "eps": 1e-6, "warmup": 2.0},
    "objective": {"presets": ["min_sigma", "min_rft"], "sigma_ref": 0.0, "r_ref": 0.0},
    "optimizer": {"population": 75, "elite_fraction": 0.1, "alpha": 0.8, "max_iter": 25, "tol": 1e-3},
    "contour": {"resolution": 41},
    "transient": {
        "kind": "bump", "height": 0.05, "length": 3.7, "x0": 2.5,
        "speed": 5.0, "band": 0.05, "designs": [],
    },
    "realizations": {"n_seeds": 10},
}


def _merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        if key not in out:
            raise ConfigError(f"unknown configuration key {key!r}")
        if isinstance(out[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"[{key}] must be a table")
            for sub, v in value.items():
                if sub not in out[key] and not (key == "vehicle" and sub in ("m_s", "m_u", "k_t", "g")):
                    raise ConfigError(f"unknown key {sub!r} in [{key}]")
                out[key][sub] = v
        else:
            out[key] = value
    return out


@dataclass
class StudyConfig:
    data: dict = field(default_factory=lambda: copy.deepcopy(DEFAULTS))

    def __post_init__(self):
        self.validate()

    @classmethod
    def from_dict(cls, raw: dict) -> "StudyConfig":
        return cls(_merge(DEFAULTS, raw))

    @classmethod
    def load(cls, path) -> "StudyConfig":
        with Path(path).open("rb") as fh:
            try:
                raw = tomllib.load(fh)
            except tomllib.TOMLDecodeError as exc:
                raise ConfigError(f"{path}: {exc}") from exc
        return cls.from_dict(raw)

    def with_overrides(self, **kw) -> "StudyConfig":
        """Apply CLI-style overrides; ``None`` values are ignored."""
        d = copy.deepcopy(self.data)
        mapping = {
            "seed": ("study", "seed"),
            "out": ("study", "output_dir"),
            "workers": ("study", "workers"),
            "road_class": ("road", "class"),
            "speed": ("operating", "speed"),
            "fn": ("operating", "fn"),
            "n_seeds": ("realizations", "n_seeds"),
            "resolution": ("contour", "resolution"),
        }
        for key, value in kw.items():
            if value is None:
                continue
            if key == "preset":
                d["objective"]["presets"] = [value] if isinstance(value, str) else list(value)
            elif key == "designs":
                d["transient"]["designs"] = [list(map(float, z)) for z in value]
            elif key in mapping:
                table, sub = mapping[key]
                d[table][sub] = value
            else:
                raise ConfigError(f"unknown override {key!r}")
        return StudyConfig(d)

    def validate(self):
        d = self.data
        self.vehicle()
        try:
            road.RoadClass(str(d["road"]["class"]).upper())
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        lo, hi = FN_BOUNDS
        grid = [float(f) for f in d["operating"]["fn_grid"]]
        if not grid or any(not lo <= f <= hi for f in grid + [float(d["operating"]["fn"])]):
            raise ConfigError(f"natural frequencies must lie in [{lo}, {hi}] Hz")
        for p in d["objective"]["presets"]:
            if p not in PRESETS:
                raise ConfigError(f"unknown preset {p!r}; choose from {sorted(PRESETS)}")
        if int(d["contour"]["resolution"]) < 11:
            raise ConfigError("contour resolution must be at least 11")
        if d["transient"]["kind"] not in ("bump", "step"):
            raise ConfigError("transient kind must be 'bump' or 'step'")
        if int(d["study"]["workers"]) < 1:
            raise ConfigError("workers must be at least 1")
        self.sim_config()
        self.ce_config()
        self.transient_input()

    # -- builders ---------------------------------------------------------

    @property
    def seed(self) -> int:
        return int(self.data["study"]["seed"])

    @property
    def workers(self) -> int:
        return int(self.data["study"]["workers"])

    @property
    def output_dir(self) -> Path:
        return Path(self.data["study"]["output_dir"])

    @property
    def fn(self) -> float:
        return float(self.data["operating"]["fn"])

    @property
    def fn_grid(self) -> list[float]:
        return [float(f) for f in self.data["operating"]["fn_grid"]]

    @property
    def presets(self) -> list[str]:
        return list(self.data["objective"]["presets"])

    def vehicle(self) -> VehicleParams:
        v = self.data["vehicle"]
        cls = v.get("class", "light")
        if cls == "custom":
            missing = [k for k in ("m_s", "m_u", "k_t") if k not in v]
            if missing:
                raise ConfigError(f"custom vehicle needs {missing}")
            base = {}
        elif cls in VEHICLES:
            p = VEHICLES[cls]
            base = {"m_s": p.m_s, "m_u": p.m_u, "k_t": p.k_t_nom, "g": p.g}
        else:
            raise ConfigError(f"unknown vehicle class {cls!r}")
        merged = {**base, **{k: v[k] for k in ("m_s", "m_u", "k_t", "g") if k in v}}
        try:
            return VehicleParams(
                m_s=float(merged["m_s"]), m_u=float(merged["m_u"]),
                k_t_nom=float(merged["k_t"]), g=float(merged.get("g", 9.81)),
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def sim_config(self) -> SimConfig:
        s = self.data["simulation"]
        return SimConfig(
            speed=float(self.data["operating"]["speed"]),
            dt=float(s["dt"]), max_step=float(s["max_step"]),
            eps=float(s["eps"]), warmup=float(s["warmup"]),
        )

    def ce_config(self, seed: int | None = None) -> CEConfig:
        o = self.data["optimizer"]
        return CEConfig(
            population=int(o["population"]), elite_fraction=float(o["elite_fraction"]),
            alpha=float(o["alpha"]), max_iter=int(o["max_iter"]), tol=float(o["tol"]),
            seed=self.seed if seed is None else seed,
        )

    def objective(self, preset: str) -> ObjectiveConfig:
        o = self.data["objective"]
        return ObjectiveConfig.from_preset(preset, sigma_ref=float(o["sigma_ref"]), r_ref=float(o["r_ref"]))

    def transient_input(self, kind: str | None = None):
        t = self.data["transient"]
        kind = t["kind"] if kind is None else kind
        try:
            if kind == "bump":
                return road.Bump(height=float(t["height"]), length=float(t["length"]), x0=float(t["x0"]))
            return road.Step(height=float(t["height"]), x0=float(t["x0"]))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def scenario(self, f_n: float | None = None, seed: int | None = None) -> Scenario:
        r = self.data["road"]
        t = self.data["transient"]
        try:
            return Scenario(
                params=self.vehicle(),
                f_n=self.fn if f_n is None else float(f_n),
                road_class=str(r["class"]).upper(),
                length=float(r["length"]),
                seed=self.seed if seed is None else seed,
                speed=float(self.data["operating"]["speed"]),
                n_components=int(r["n_components"]),
                n_realizations=int(r["realizations"]),
                sim=self.sim_config(),
                transient=self.transient_input(),
                transient_speed=float(t["speed"]),
                settle_band=float(t["band"]),
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def to_dict(self) -> dict:
        return copy.deepcopy(self.data)
