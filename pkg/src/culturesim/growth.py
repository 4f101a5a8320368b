"""Per-well logistic growth, brightness readout, patch imaging, plateau detection.

Cell density follows the logistic closed form while the plate is shaking (cells
in suspension); brightness is the HSV value-channel proxy, linear in density up
to the carrying capacity.  Saturation is declared when the smoothed derivative
of a group curve, having risen past a floor, stays below a fraction of its peak
for several consecutive samples.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .errors import UnsupportedPlate
from .plates import PlateTemplate, PlateType

__all__ = [
    "WellStatus",
    "Group",
    "WellContents",
    "GrowthParams",
    "BrightnessModel",
    "GrowthSeries",
    "SaturationConfig",
    "step_growth",
    "brightness_of",
    "patch_schedule",
    "rolling_average",
    "detect_saturation",
]


class WellStatus(Enum):
    EMPTY = "empty"
    MEDIA_ONLY = "media_only"
    SEEDED = "seeded"
    VOIDED = "voided"


class Group(Enum):
    HIGH_50M = "high_50m"
    MID_30M = "mid_30m"
    LOW_10M = "low_10m"
    BLANK = "blank"


@dataclass(frozen=True)
class WellContents:
    status: WellStatus = WellStatus.EMPTY
    cells_per_mL: float = 0.0
    volume_mL: float = 0.0
    group: Group | None = None
    grow_age_hr: float = 0.0  # shaking time since this well was (re)seeded

    def __post_init__(self):
        if self.status == WellStatus.EMPTY and self.volume_mL > 0:
            raise ValueError("empty well cannot hold volume")
        if self.cells_per_mL < 0 or self.volume_mL < 0:
            raise ValueError("negative density or volume")


@dataclass(frozen=True)
class GrowthParams:
    r_per_hr: float = 0.6
    k_cells_per_mL: float = 2.0e8
    lag_hr: float = 1.5

    def __post_init__(self):
        if self.r_per_hr <= 0 or self.k_cells_per_mL <= 0 or self.lag_hr < 0:
            raise ValueError("invalid growth parameters")


@dataclass(frozen=True)
class BrightnessModel:
    b0: float = 60.0
    b1: float = 150.0
    noise_sd: float = 0.8

    def __post_init__(self):
        if self.b0 < 0 or self.b1 < 0:
            raise ValueError("b0 and b1 must be >= 0")


@dataclass(frozen=True)
class GrowthSeries:
    times_hr: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times_hr, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.shape != v.shape:
            raise ValueError("times and values must have equal length")
        if t.size > 1 and np.any(np.diff(t) <= 0):
            raise ValueError("times must be strictly increasing")
        object.__setattr__(self, "times_hr", t)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class SaturationConfig:
    rise_floor_per_hr: float = 8.0  # minimum peak derivative to count as growth
    plateau_frac: float = 0.4  # plateau when derivative < frac * peak
    hold_points: int = 3
    min_points: int = 5
    deriv_window: int = 3  # smoothing window applied to the derivative


def _logistic_step(n: float, r: float, k: float, dt: float) -> float:
    e = np.exp(r * dt)
    return k * n * e / (k + n * (e - 1.0))


def step_growth(
    well: WellContents, params: GrowthParams, dt_hr: float, shaking: bool
) -> WellContents:
    """Advance one well by ``dt_hr`` of wall growth time.

    Growth happens only while shaking and only for seeded, non-blank wells;
    the lag phase consumes shaking time before the logistic phase starts.
    """
    if dt_hr < 0:
        raise ValueError("dt must be >= 0")
    if dt_hr == 0 or not shaking:
        return well
    if well.status != WellStatus.SEEDED or well.group == Group.BLANK or well.cells_per_mL == 0:
        return well

    age0 = well.grow_age_hr
    age1 = age0 + dt_hr
    grow_dt = max(0.0, age1 - max(age0, params.lag_hr))
    n = well.cells_per_mL
    if grow_dt > 0:
        n = _logistic_step(n, params.r_per_hr, params.k_cells_per_mL, grow_dt)
    return replace(well, cells_per_mL=n, grow_age_hr=age1)


def brightness_of(
    well: WellContents,
    model: BrightnessModel,
    params: GrowthParams,
    rng: np.random.Generator | None = None,
) -> float:
    """Value-channel brightness: baseline + gain * density fraction, clamped to [0, 255]."""
    frac = min(well.cells_per_mL / params.k_cells_per_mL, 1.0)
    noise = model.noise_sd * rng.standard_normal() if rng is not None else 0.0
    return float(np.clip(model.b0 + model.b1 * frac + noise, 0.0, 255.0))


def patch_schedule(template: PlateTemplate) -> list[list[int]]:
    """Partition the 96 wells into 8 imaging patches of 4 rows x 3 columns each.

    Patches tile the plate as 2 patch-rows by 4 patch-columns; patch 0 covers
    rows A-D, columns 1-3.
    """
    if template.plate_type != PlateType.WELLS_96:
        raise UnsupportedPlate("patch schedule is defined for the 96-well plate")
    patches = []
    for patch_row in range(2):
        for patch_col in range(4):
            wells = [
                (patch_row * 4 + r) * template.cols + patch_col * 3 + c
                for r in range(4)
                for c in range(3)
            ]
            patches.append(wells)
    return patches


def rolling_average(values, window: int) -> np.ndarray:
    """Trailing mean over ``window`` samples; shorter prefixes average what exists."""
    if window < 1:
        raise ValueError("window must be >= 1")
    v = np.asarray(values, dtype=float)
    out = np.empty_like(v)
    csum = np.cumsum(np.insert(v, 0, 0.0))
    for i in range(v.size):
        lo = max(0, i - window + 1)
        out[i] = (csum[i + 1] - csum[lo]) / (i + 1 - lo)
    return out


def detect_saturation(series: GrowthSeries, cfg: SaturationConfig = SaturationConfig()):
    """First time the smoothed derivative has risen and then plateaued, else None.

    Requires (a) the peak smoothed derivative to exceed ``rise_floor_per_hr``
    (growth actually observed) and (b) the derivative to stay below
    ``plateau_frac`` of that peak for ``hold_points`` consecutive samples.
    """
    t, v = series.times_hr, series.values
    if t.size < cfg.min_points:
        return None

    deriv = np.diff(v) / np.diff(t)
    deriv = rolling_average(deriv, cfg.deriv_window)

    peak = 0.0
    below = 0
    for i in range(deriv.size):
        peak = max(peak, deriv[i])
        if peak >= cfg.rise_floor_per_hr and deriv[i] < cfg.plateau_frac * peak:
            below += 1
            if below >= cfg.hold_points:
                return float(t[i + 1])  # derivative i spans t[i]..t[i+1]
        else:
            below = 0
    return None
