"""Pipette-tip-into-well insertion with the force-spike retry policy.

After the visual servo converges, the true tip position still carries residual
pixel error, per-grasp tip bias, and corner-noise-induced well estimation
error.  An attempt succeeds when the tip lands within the well radius minus the
tip radius of the true center; landing on the well edge raises a force spike
and triggers another attempt, up to three consecutive attempts per well.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .perception import CameraModel, NoiseParams
from .servo import ServoParams, ServoStatus, servo_loop
from .world import WorldState

__all__ = ["InsertionModel", "InsertionResult", "attempt_insertion"]


@dataclass(frozen=True)
class InsertionModel:
    tip_radius_mm: float = 1.0
    edge_band_mm: float = 1.0  # annulus beyond the well edge that still spikes force
    max_attempts: int = 3
    insert_depth_s: float = 1.0  # simulated lower+raise time per attempt

    def __post_init__(self):
        if self.max_attempts < 1:
            raise ValueError("need at least one attempt")


@dataclass(frozen=True)
class InsertionResult:
    success: bool
    perfect: bool  # succeeded on the first attempt
    attempts: int
    miss_mm: float  # final landing distance from the true well center


def attempt_insertion(
    world: WorldState,
    cam: CameraModel,
    noise: NoiseParams,
    well_index: int,
    servo: ServoParams,
    model: InsertionModel,
    rng: np.random.Generator | None = None,
    tip_bias_px=(0.0, 0.0),
) -> InsertionResult:
    """Servo to the well and lower the tip, retrying on edge contact.

    Never makes more than ``max_attempts`` consecutive attempts on one well.
    """
    accept_mm = world.template.well_diameter_mm / 2.0 - model.tip_radius_mm
    miss_mm = float("inf")

    for attempt in range(1, model.max_attempts + 1):
        outcome = servo_loop(
            world, cam, noise, well_index, servo, rng, tip_bias_px=tip_bias_px
        )
        world.advance_time(model.insert_depth_s)
        if outcome.status != ServoStatus.CONVERGED:
            continue  # perception failed; counts as a failed attempt

        landing = world.tip_world_xy() - world.well_center_world(well_index)
        miss_mm = float(np.linalg.norm(landing)) * 1000.0
        if miss_mm <= accept_mm:
            return InsertionResult(True, attempt == 1, attempt, miss_mm)
        # edge press or clean miss: force spike / perception error, retry

    return InsertionResult(False, False, model.max_attempts, miss_mm)
