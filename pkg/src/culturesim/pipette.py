"""Digital pipette model: pulse/volume calibration, liquid transfer, gravimetrics.

The actuator accepts pulse lengths between 1300 us (fully retracted, inhale)
and 1850 us (fully extended, exhale).  Delivered volumes carry a configurable
systematic bias and per-dispense random error; the gravimetric evaluation
computes the ISO 8655-6 systematic error (eta_s) and coefficient of variation
(C_v) against the permissible limits for 1/5/10 mL.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import IntEnum

import numpy as np

from .errors import (
    InsufficientVolume,
    NoTipAttached,
    OutOfRange,
    OverCapacity,
    TooFewSamples,
    UnsupportedVolume,
)

__all__ = [
    "TipStatus",
    "PipetteState",
    "CalibrationCurve",
    "DispenseNoise",
    "GravimetricResult",
    "PULSE_MIN_US",
    "PULSE_MAX_US",
    "CAPACITY_ML",
    "pulse_to_volume",
    "volume_to_pulse",
    "aspirate",
    "dispense",
    "gravimetric_test",
    "iso_limits",
]

PULSE_MIN_US = 1300.0
PULSE_MAX_US = 1850.0
CAPACITY_ML = 10.0


class TipStatus(IntEnum):
    """Mirrors the pipette_status runtime parameter (0-4)."""

    NO_TIP = 0
    CLEAN_EMPTY = 1
    MEDIA = 2
    YEAST = 3
    CONTAMINATED = 4


@dataclass(frozen=True)
class PipetteState:
    pulse_us: float = PULSE_MAX_US
    contents_mL: float = 0.0
    tip: TipStatus = TipStatus.NO_TIP

    def __post_init__(self):
        if not PULSE_MIN_US <= self.pulse_us <= PULSE_MAX_US:
            raise OutOfRange(f"pulse {self.pulse_us} us outside [1300, 1850]")
        if self.contents_mL < 0 or self.contents_mL > CAPACITY_ML + 1e-9:
            raise OutOfRange(f"contents {self.contents_mL} mL outside [0, {CAPACITY_ML}]")
        if self.tip == TipStatus.NO_TIP and self.contents_mL > 0:
            raise NoTipAttached("cannot hold liquid with no tip")


@dataclass(frozen=True)
class CalibrationCurve:
    """Monotone (pulse_us, volume_mL) breakpoints; pulse up, volume down."""

    breakpoints: tuple[tuple[float, float], ...] = ((PULSE_MIN_US, CAPACITY_ML), (PULSE_MAX_US, 0.0))

    def __post_init__(self):
        bp = tuple((float(p), float(v)) for p, v in self.breakpoints)
        pulses = [p for p, _ in bp]
        volumes = [v for _, v in bp]
        if len(bp) < 2:
            raise ValueError("calibration curve needs at least two breakpoints")
        if any(b <= a for a, b in zip(pulses, pulses[1:])):
            raise ValueError("pulse breakpoints must be strictly increasing")
        if any(b >= a for a, b in zip(volumes, volumes[1:])):
            raise ValueError("volume breakpoints must be strictly decreasing")
        object.__setattr__(self, "breakpoints", bp)

    @property
    def pulses(self) -> np.ndarray:
        return np.array([p for p, _ in self.breakpoints])

    @property
    def volumes(self) -> np.ndarray:
        return np.array([v for _, v in self.breakpoints])


@dataclass(frozen=True)
class DispenseNoise:
    """Fractional delivery error: fixed bias plus per-dispense Gaussian term."""

    bias_frac: float = -0.0009
    sigma_frac: float = 0.0010

    def __post_init__(self):
        if self.sigma_frac < 0:
            raise ValueError("sigma_frac must be >= 0")

    def sample(self, target_mL: float, rng: np.random.Generator | None) -> float:
        noise = self.sigma_frac * rng.standard_normal() if rng is not None else 0.0
        return target_mL * (1.0 + self.bias_frac + noise)


ZERO_NOISE = DispenseNoise(0.0, 0.0)


@dataclass(frozen=True)
class GravimetricResult:
    v_bar: float
    eta_s_pct: float
    c_v_pct: float
    n: int


def pulse_to_volume(curve: CalibrationCurve, pulse_us: float) -> float:
    """Piecewise-linear volume for a pulse length in [1300, 1850] us."""
    if not PULSE_MIN_US <= pulse_us <= PULSE_MAX_US:
        raise OutOfRange(f"pulse {pulse_us} us outside [1300, 1850]")
    pulses = curve.pulses
    if not pulses[0] <= pulse_us <= pulses[-1]:
        raise OutOfRange(f"pulse {pulse_us} us outside calibrated range")
    return float(np.interp(pulse_us, pulses, curve.volumes))


def volume_to_pulse(curve: CalibrationCurve, volume_mL: float) -> float:
    """Inverse of pulse_to_volume on the same breakpoint intervals."""
    if not 0.0 <= volume_mL <= CAPACITY_ML:
        raise OutOfRange(f"volume {volume_mL} mL outside [0, 10]")
    volumes = curve.volumes
    if not volumes[-1] <= volume_mL <= volumes[0]:
        raise OutOfRange(f"volume {volume_mL} mL outside calibrated range")
    # np.interp needs ascending x; volumes decrease along the curve.
    return float(np.interp(volume_mL, volumes[::-1], curve.pulses[::-1]))


def aspirate(
    state: PipetteState,
    target_mL: float,
    noise: DispenseNoise = ZERO_NOISE,
    rng: np.random.Generator | None = None,
) -> PipetteState:
    """Draw liquid into the tip; actual volume carries the delivery noise."""
    if state.tip == TipStatus.NO_TIP:
        raise NoTipAttached("aspirate requires a tip")
    if target_mL < 0:
        raise ValueError("target must be >= 0")
    drawn = noise.sample(target_mL, rng)
    if state.contents_mL + drawn > CAPACITY_ML + 1e-9:
        raise OverCapacity(
            f"aspirating {drawn:.4f} mL over {state.contents_mL:.4f} mL exceeds capacity"
        )
    return replace(state, contents_mL=state.contents_mL + drawn)


def dispense(
    state: PipetteState,
    target_mL: float,
    noise: DispenseNoise = ZERO_NOISE,
    rng: np.random.Generator | None = None,
) -> tuple[PipetteState, float]:
    """Expel liquid; returns the new state and the actually delivered volume."""
    if state.tip == TipStatus.NO_TIP:
        raise NoTipAttached("dispense requires a tip")
    if target_mL < 0:
        raise ValueError("target must be >= 0")
    if target_mL > state.contents_mL + 1e-9:
        raise InsufficientVolume(
            f"dispense {target_mL} mL exceeds contents {state.contents_mL} mL"
        )
    delivered = min(noise.sample(target_mL, rng), state.contents_mL)
    return replace(state, contents_mL=state.contents_mL - delivered), delivered


def gravimetric_test(samples, target_mL: float) -> GravimetricResult:
    """ISO 8655-6 statistics: mean volume, systematic error %, random error %."""
    samples = np.asarray(samples, dtype=float)
    if samples.size < 2:
        raise TooFewSamples("need at least 2 samples")
    if target_mL <= 0:
        raise ValueError("target must be > 0")
    v_bar = float(samples.mean())
    eta_s = 100.0 * (v_bar - target_mL) / target_mL
    c_v = 100.0 * float(samples.std(ddof=1)) / v_bar
    return GravimetricResult(v_bar=v_bar, eta_s_pct=eta_s, c_v_pct=c_v, n=int(samples.size))


_ISO_LIMITS = {10.0: (0.6, 0.3), 5.0: (1.2, 0.6), 1.0: (6.0, 3.0)}


def iso_limits(target_mL: float) -> tuple[float, float]:
    """Maximum permissible (eta_s %, C_v %) per ISO 8655-6 for 10/5/1 mL."""
    try:
        return _ISO_LIMITS[float(target_mL)]
    except KeyError:
        raise UnsupportedVolume(f"no ISO limit row for {target_mL} mL") from None
