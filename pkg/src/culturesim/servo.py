"""Proportional pixel-space visual servo controller.

Each step scales the pixel error by the gain, swaps the x and y components to
align image axes with the robot base frame, zeroes the z component, and clamps
the result to the per-step limit.  The loop repeats observe -> project wells ->
error -> step until the error is under the image threshold, perception fails,
or the iteration cap is hit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .perception import (
    CameraModel,
    NoiseParams,
    TrackState,
    TrackStatus,
    ZERO_NOISE,
    error_vector,
    observe,
    track,
)
from .plates import estimate_homography, project_wells
from .world import WorldState

__all__ = ["ServoParams", "ServoStatus", "ServoOutcome", "servo_step", "servo_loop"]


@dataclass(frozen=True)
class ServoParams:
    k_p: float = 0.0005  # meters per pixel
    u_lim: float = 0.01  # meters per step
    img_thresh_px: float = 3.0
    rate_hz: float = 30.0
    max_iters: int = 500

    def __post_init__(self):
        if min(self.k_p, self.u_lim, self.img_thresh_px, self.rate_hz) <= 0:
            raise ValueError("servo parameters must be positive")


class ServoStatus(Enum):
    CONVERGED = "converged"
    PERCEPTION_FAILED = "perception_failed"
    ITER_LIMIT = "iter_limit"


@dataclass(frozen=True)
class ServoOutcome:
    status: ServoStatus
    iterations: int
    final_error_px: np.ndarray
    trajectory: list = field(default_factory=list)  # end-effector XY per applied step


def servo_step(error_px, params: ServoParams) -> np.ndarray:
    """One control step: gain, xy swap, z frozen, norm clamp.  Returns (dx, dy, dz) m."""
    e = np.asarray(error_px, dtype=float)
    u = params.k_p * e
    u = np.array([u[1], u[0], 0.0])
    norm = np.linalg.norm(u)
    if norm > params.u_lim:
        u = u * (params.u_lim / norm)
    return u


def servo_loop(
    world: WorldState,
    cam: CameraModel,
    noise: NoiseParams = ZERO_NOISE,
    well_index: int = 0,
    params: ServoParams = ServoParams(),
    rng: np.random.Generator | None = None,
    tip_bias_px=(0.0, 0.0),
    track_state: TrackState | None = None,
) -> ServoOutcome:
    """Drive the end-effector until the tip-to-well pixel error is under threshold.

    The well pixel target comes from the homography fitted to the observed plate
    corners each frame.  No motion is applied on any frame whose track is LOST;
    the loop returns PERCEPTION_FAILED instead so the caller can re-perceive.
    Each iteration advances the simulated clock by one control period.
    """
    state = track_state or TrackState()
    trajectory: list[np.ndarray] = []
    err = np.array([np.inf, np.inf])

    for i in range(params.max_iters):
        obs = observe(world, cam, noise, rng, tip_bias_px)
        state = track(state, obs, world.template)
        if state.status != TrackStatus.TRACKED:
            return ServoOutcome(ServoStatus.PERCEPTION_FAILED, i, err, trajectory)

        h = estimate_homography(world.template.corners_mm(), obs.corners.corners)
        wells_px = project_wells(h, world.template)
        err = error_vector(obs.tip_px, wells_px[well_index])
        if np.linalg.norm(err) < params.img_thresh_px:
            return ServoOutcome(ServoStatus.CONVERGED, i, err, trajectory)

        u = servo_step(err, params)
        world.ee_pose = world.ee_pose + u
        trajectory.append(world.ee_pose[:2].copy())
        world.advance_time(1.0 / params.rate_hz)

    return ServoOutcome(ServoStatus.ITER_LIMIT, params.max_iters, err, trajectory)
