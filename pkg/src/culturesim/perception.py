"""Synthetic perception: noisy plate-corner observations, tip localization, tracking.

Stands in for the camera + segmentation + edge-detection stack.  The camera is
rigidly attached to the end-effector; a world point p maps to pixels as

    px = principal + s * (ee_y - p_y, ee_x - p_x)

with s in pixels per meter.  Under this convention the controller's swapped
proportional law contracts the pixel error (see the servo module).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .errors import EmptyMask
from .plates import BoundingQuad, PlateTemplate, check_proportions
from .world import WorldState

__all__ = [
    "CameraModel",
    "NoiseParams",
    "BinaryMask",
    "Observation",
    "TrackStatus",
    "TrackState",
    "detect_tip",
    "observe",
    "track",
    "error_vector",
]


@dataclass(frozen=True)
class CameraModel:
    scale_px_per_mm: float = 2.0
    principal: tuple[float, float] = (320.0, 240.0)

    def __post_init__(self):
        if self.scale_px_per_mm <= 0:
            raise ValueError("scale must be > 0")

    @property
    def scale_px_per_m(self) -> float:
        return self.scale_px_per_mm * 1000.0

    def pixel_of_world(self, p_world_xy, ee_xy) -> np.ndarray:
        """Project a world XY (meters) into pixels, camera riding on the end-effector."""
        p = np.asarray(p_world_xy, dtype=float)
        ee = np.asarray(ee_xy, dtype=float)
        s = self.scale_px_per_m
        return np.array(
            [
                self.principal[0] + s * (ee[1] - p[1]),
                self.principal[1] + s * (ee[0] - p[0]),
            ]
        )


@dataclass(frozen=True)
class NoiseParams:
    corner_sigma_px: float = 1.5
    occlusion_prob: float = 0.0
    tip_bias_px: float = 2.0  # per-grasp uniform bias half-range, both axes
    resegment_delay_frames: int = 1
    padding_px: float = 20.0

    def __post_init__(self):
        if self.corner_sigma_px < 0 or self.tip_bias_px < 0:
            raise ValueError("noise magnitudes must be >= 0")
        if not 0.0 <= self.occlusion_prob <= 1.0:
            raise ValueError("occlusion_prob must be in [0, 1]")


ZERO_NOISE = NoiseParams(corner_sigma_px=0.0, occlusion_prob=0.0, tip_bias_px=0.0)


@dataclass(frozen=True)
class BinaryMask:
    """Boolean pixel grid; True marks object pixels."""

    pixels: np.ndarray  # shape (height, width)

    def __post_init__(self):
        p = np.asarray(self.pixels, dtype=bool)
        if p.ndim != 2 or p.shape[0] == 0 or p.shape[1] == 0:
            raise ValueError("mask must be a nonempty 2-D grid")
        object.__setattr__(self, "pixels", p)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


@dataclass(frozen=True)
class Observation:
    corners: BoundingQuad | None
    tip_px: np.ndarray | None
    timestamp_s: float
    corner_noise_px: np.ndarray | None = None  # (4, 2) noise actually applied


class TrackStatus(Enum):
    TRACKED = "tracked"
    LOST = "lost"


@dataclass(frozen=True)
class TrackState:
    status: TrackStatus = TrackStatus.LOST
    last_quad: BoundingQuad | None = None
    frames_lost: int = 0

    def __post_init__(self):
        if self.status == TrackStatus.TRACKED and self.last_quad is None:
            raise ValueError("tracked state requires a quad")


def detect_tip(mask: BinaryMask) -> tuple[float, float]:
    """Bottom-most mask point; ties on the bottom row average their x-coordinates.

    "Lowest" means lowest in the image, i.e. the largest row index, matching a
    downward-pointing tip hanging below the gripper.
    """
    rows, cols = np.nonzero(mask.pixels)
    if rows.size == 0:
        raise EmptyMask("mask has no set pixels")
    bottom = rows.max()
    xs = cols[rows == bottom]
    return (float(xs.mean()), float(bottom))


def tip_pixel(world: WorldState, cam: CameraModel, tip_bias_px=(0.0, 0.0)) -> np.ndarray:
    """Perceived tip pixel: constant per grasp since the pipette rides with the camera."""
    s = cam.scale_px_per_mm
    true_px = np.array(
        [
            cam.principal[0] - s * world.tip_offset_mm[1],
            cam.principal[1] - s * world.tip_offset_mm[0],
        ]
    )
    return true_px + np.asarray(tip_bias_px, dtype=float)


def observe(
    world: WorldState,
    cam: CameraModel,
    noise: NoiseParams = ZERO_NOISE,
    rng: np.random.Generator | None = None,
    tip_bias_px=(0.0, 0.0),
) -> Observation:
    """Render one noisy observation of the true world.

    Plate corners are projected through the camera convention plus zero-mean
    Gaussian pixel noise; with probability ``occlusion_prob`` the plate is
    occluded and corners are absent.
    """
    occluded = False
    if noise.occlusion_prob > 0.0:
        if rng is None:
            occluded = noise.occlusion_prob >= 1.0
        else:
            occluded = rng.random() < noise.occlusion_prob

    corners = None
    corner_noise = None
    if not occluded:
        ee = world.ee_pose[:2]
        pts = np.array(
            [cam.pixel_of_world(c, ee) for c in world.plate_corners_world()]
        )
        if noise.corner_sigma_px > 0.0 and rng is not None:
            corner_noise = noise.corner_sigma_px * rng.standard_normal((4, 2))
            pts = pts + corner_noise
        else:
            corner_noise = np.zeros((4, 2))
        corners = BoundingQuad(pts)

    return Observation(
        corners=corners,
        tip_px=tip_pixel(world, cam, tip_bias_px),
        timestamp_s=world.clock_s,
        corner_noise_px=corner_noise,
    )


def track(
    prev: TrackState,
    obs: Observation,
    template: PlateTemplate,
    tol: float = 0.10,
) -> TrackState:
    """Update the plate track: TRACKED needs visible corners with sane proportions."""
    if obs.corners is None:
        return TrackState(
            status=TrackStatus.LOST,
            last_quad=prev.last_quad,
            frames_lost=prev.frames_lost + 1,
        )
    if not check_proportions(obs.corners, template, tol):
        return TrackState(
            status=TrackStatus.LOST,
            last_quad=prev.last_quad,
            frames_lost=prev.frames_lost + 1,
        )
    return TrackState(status=TrackStatus.TRACKED, last_quad=obs.corners, frames_lost=0)


def error_vector(tip_px, well_px) -> np.ndarray:
    """Pixel error (tip - well), the quantity the servo controller drives to zero."""
    return np.asarray(tip_px, dtype=float) - np.asarray(well_px, dtype=float)
