"""Run configuration: a nested YAML document validated into typed parameters.

Unknown keys are rejected so typos fail loudly before anything runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .errors import ConfigError
from .experiment import ExperimentConfig
from .growth import BrightnessModel, GrowthParams, SaturationConfig
from .handeye import CalibrationError
from .insertion import InsertionModel
from .perception import CameraModel, NoiseParams
from .pipette import CalibrationCurve, DispenseNoise
from .servo import ServoParams
from .spiral import ContactModel, SpiralParams

__all__ = ["RunConfig", "load_config"]


@dataclass
class RunConfig:
    seed: int = 42
    speedup: float = 600.0
    max_hours: float = 15.0
    experiment: ExperimentConfig = field(default_factory=ExperimentConfig)
    calibration_curve: CalibrationCurve = field(default_factory=CalibrationCurve)
    calib_error: CalibrationError = field(default_factory=CalibrationError)
    out_dir: Path = Path(".")
    listen_addr: str | None = None


_SECTION_BUILDERS = {
    "servo": ServoParams,
    "spiral": SpiralParams,
    "contact": ContactModel,
    "noise": NoiseParams,
    "camera": CameraModel,
    "insertion": InsertionModel,
    "dispense_noise": DispenseNoise,
    "growth": GrowthParams,
    "brightness": BrightnessModel,
    "saturation": SaturationConfig,
}

_EXPERIMENT_SCALARS = {
    "max_hours", "grasp_offset_mm", "patch_image_s", "action_s",
    "allow_rack_refill", "auto_blank_split", "idle_tick_s",
}

_TOP_LEVEL_KEYS = (
    {"seed", "speedup", "max_hours", "calibration_curve", "calib_error",
     "out_dir", "listen_addr", "experiment"}
    | set(_SECTION_BUILDERS)
)


def _build_section(name: str, cls, data: dict):
    if not isinstance(data, dict):
        raise ConfigError(f"section '{name}' must be a mapping")
    valid = set(cls.__dataclass_fields__)
    unknown = set(data) - valid
    if unknown:
        raise ConfigError(f"unknown keys in '{name}': {sorted(unknown)}")
    try:
        return cls(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid '{name}' section: {exc}") from exc


def _build_calib_error(data: dict) -> CalibrationError:
    valid = {"axis", "angle_deg", "translation_mm"}
    unknown = set(data) - valid
    if unknown:
        raise ConfigError(f"unknown keys in 'calib_error': {sorted(unknown)}")
    axis = data.get("axis", [0.0, 0.0, 1.0])
    angle = np.deg2rad(float(data.get("angle_deg", 0.0)))
    p_eps = np.asarray(data.get("translation_mm", [0.0, 0.0, 0.0]), dtype=float) / 1000.0
    return CalibrationError.from_axis_angle(axis, angle, p_eps)


def load_config(path: str | Path | None = None, overrides: dict | None = None) -> RunConfig:
    """Load and validate a run config; ``overrides`` wins over the file contents."""
    data: dict = {}
    if path is not None:
        p = Path(path)
        if not p.exists():
            raise ConfigError(f"config file not found: {p}")
        try:
            loaded = yaml.safe_load(p.read_text())
        except yaml.YAMLError as exc:
            raise ConfigError(f"config parse error: {exc}") from exc
        if loaded is None:
            loaded = {}
        if not isinstance(loaded, dict):
            raise ConfigError("config root must be a mapping")
        data = loaded
    if overrides:
        data = {**data, **{k: v for k, v in overrides.items() if v is not None}}

    unknown = set(data) - _TOP_LEVEL_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    exp_kwargs = {}
    for name, cls in _SECTION_BUILDERS.items():
        if name in data:
            built = _build_section(name, cls, data[name])
            exp_kwargs["cam" if name == "camera" else name] = built

    exp_extra = data.get("experiment", {})
    if not isinstance(exp_extra, dict):
        raise ConfigError("'experiment' must be a mapping")
    unknown = set(exp_extra) - _EXPERIMENT_SCALARS
    if unknown:
        raise ConfigError(f"unknown keys in 'experiment': {sorted(unknown)}")
    exp_kwargs.update(exp_extra)

    seed = int(data.get("seed", 42))
    max_hours = float(data.get("max_hours", exp_kwargs.pop("max_hours", 15.0)))
    experiment = ExperimentConfig(seed=seed, max_hours=max_hours, **exp_kwargs)

    curve = CalibrationCurve()
    if "calibration_curve" in data:
        try:
            curve = CalibrationCurve(tuple(map(tuple, data["calibration_curve"])))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid calibration_curve: {exc}") from exc

    calib = CalibrationError()
    if "calib_error" in data:
        calib = _build_calib_error(data["calib_error"])

    return RunConfig(
        seed=seed,
        speedup=float(data.get("speedup", 600.0)),
        max_hours=max_hours,
        experiment=experiment,
        calibration_curve=curve,
        calib_error=calib,
        out_dir=Path(data.get("out_dir", ".")),
        listen_addr=data.get("listen_addr"),
    )
