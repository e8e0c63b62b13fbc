"""Flat key=value run configuration.

One file configures the detector, the steering stage and the closed-loop
trial.  Lines are `key=value`, `#` starts a comment line, blank lines are
ignored.  Unknown keys are rejected by name so typos fail loudly.
Command-line overrides are applied on top of file values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

from .competition import NormParams
from .errors import ConfigError
from .flightsim import TrialConfig
from .layers import CoreParams
from .steering import SteeringParams
from .stimulus import CameraModel


@dataclass(frozen=True)
class RunConfig:
    """Every tunable knob with its default, one flat namespace."""

    # excitation / inhibition / grouping
    inhibition_delay: int = 0
    delta_c: float = 0.5
    c_w: float = 4.0
    c_de: float = 0.5
    t_de: float = 15.0
    # normalization and spiking
    c1: float = 0.005
    c2: float | None = None
    t_s: float = 150.0
    n_sp: int = 4
    # escape steering
    speed_0: float = 0.6
    hold_duration: float = 1.0
    # camera
    width: int = 100
    height: int = 100
    hfov_deg: float = 90.0
    # closed-loop trial
    cruise_speed: float = 1.0
    placement: str = "left"
    obstacle_distance: float = 4.0
    obstacle_radius: float = 0.3
    obstacle_offset: float = 0.25
    obstacle_vx: float = 0.0
    obstacle_vy: float = 0.0
    obstacle_vz: float = 0.0
    obstacle_luminance: float = 224.0
    background: float = 32.0
    noise_amplitude: float = 0.0
    noise_seed: int = 0
    arena_xmin: float = -1.0
    arena_xmax: float = 6.0
    arena_ymin: float = -3.0
    arena_ymax: float = 3.0
    arena_zmin: float = -3.0
    arena_zmax: float = 3.0
    dt: float = 0.02
    max_duration: float = 20.0
    margin: float = 0.1
    tau: float = 0.3
    seed: int = 0

    def core_params(self) -> CoreParams:
        return CoreParams(
            inhibition_delay=self.inhibition_delay,
            delta_c=self.delta_c,
            c_w=self.c_w,
            c_de=self.c_de,
            t_de=self.t_de,
        )

    def norm_params(self, width: int | None = None, height: int | None = None) -> NormParams:
        width = width if width is not None else self.width
        height = height if height is not None else self.height
        return NormParams(
            n_cell=width * height,
            c1=self.c1,
            c2=self.c2,
            t_s=self.t_s,
            n_sp=self.n_sp,
        )

    def steering_params(self) -> SteeringParams:
        return SteeringParams(speed_0=self.speed_0, hold_duration=self.hold_duration)

    def camera_model(self) -> CameraModel:
        return CameraModel(
            hfov=math.radians(self.hfov_deg), width=self.width, height=self.height
        )

    def trial_config(self) -> TrialConfig:
        return TrialConfig(
            cruise_speed=self.cruise_speed,
            placement=self.placement,
            obstacle_distance=self.obstacle_distance,
            obstacle_radius=self.obstacle_radius,
            obstacle_offset=self.obstacle_offset,
            obstacle_velocity=(self.obstacle_vx, self.obstacle_vy, self.obstacle_vz),
            obstacle_luminance=self.obstacle_luminance,
            background=self.background,
            noise_amplitude=self.noise_amplitude,
            noise_seed=self.noise_seed,
            arena=(
                self.arena_xmin,
                self.arena_xmax,
                self.arena_ymin,
                self.arena_ymax,
                self.arena_zmin,
                self.arena_zmax,
            ),
            dt=self.dt,
            max_duration=self.max_duration,
            margin=self.margin,
            tau=self.tau,
            camera=self.camera_model(),
            core=self.core_params(),
            norm=self.norm_params(),
            steering=self.steering_params(),
        )


_INT_FIELDS = {"inhibition_delay", "n_sp", "width", "height", "noise_seed", "seed"}
_STR_FIELDS = {"placement"}
_KNOWN_KEYS = {f.name for f in fields(RunConfig)}


def _convert(key: str, text: str):
    try:
        if key in _INT_FIELDS:
            return int(text)
        if key in _STR_FIELDS:
            return text
        return float(text)
    except ValueError:
        raise ConfigError(f"invalid value for {key}: {text!r}") from None


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    """key=value lines to a raw string mapping; comments and blanks skipped."""
    mapping: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        mapping[key.strip()] = value.strip()
    return mapping


def load_config_file(path) -> dict[str, str]:
    with open(path, "r") as handle:
        return parse_config_text(handle.read(), source=str(path))


def config_from_mappings(*mappings: dict[str, str]) -> RunConfig:
    """Later mappings override earlier ones; unknown keys are rejected."""
    merged: dict[str, str] = {}
    for mapping in mappings:
        merged.update(mapping)
    values = {}
    for key, text in merged.items():
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"unknown config key: {key}")
        values[key] = _convert(key, text)
    return RunConfig(**values)
