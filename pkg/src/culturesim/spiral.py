"""Force-guided tip attachment: spiral search, wrench estimation, tip exchange.

The robot presses the pipette body onto the tip opening and sweeps an
Archimedean spiral in XY while watching the vertical contact force; a marked
drop in force signals that the bodies are aligned and the pipette can be
lowered in.  Tip removal hooks the tip edge and drops it into the waste bin.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    AttachFailed,
    NoTipsRemaining,
    NoTipToRemove,
    SingularJacobian,
)
from .pipette import PipetteState, TipStatus
from .world import TIP_RACK_CAPACITY, WorldState

__all__ = [
    "SpiralParams",
    "ContactModel",
    "SearchResult",
    "spiral_waypoints",
    "wrench_from_torques",
    "run_spiral_search",
    "attach_tip",
    "remove_tip",
]


@dataclass(frozen=True)
class SpiralParams:
    pitch_mm_per_rev: float = 0.5
    dtheta_rad: float = np.pi / 6
    max_radius_mm: float = 4.5
    dwell_s: float = 0.25  # simulated time spent at each waypoint

    def __post_init__(self):
        if min(self.pitch_mm_per_rev, self.dtheta_rad, self.max_radius_mm, self.dwell_s) <= 0:
            raise ValueError("spiral parameters must be positive")


@dataclass(frozen=True)
class ContactModel:
    press_force_N: float = 15.0
    align_radius_mm: float = 0.3
    drop_ratio: float = 0.5
    force_noise_N: float = 0.5

    def __post_init__(self):
        if not 0.0 < self.drop_ratio < 1.0:
            raise ValueError("drop_ratio must be in (0, 1)")
        if self.align_radius_mm <= 0 or self.force_noise_N < 0:
            raise ValueError("invalid contact model")


@dataclass(frozen=True)
class SearchResult:
    found: bool
    waypoint_index: int
    elapsed_s: float
    path: np.ndarray  # (n, 2) XY offsets actually visited


def spiral_waypoints(params: SpiralParams) -> np.ndarray:
    """Archimedean spiral r = pitch * theta / 2pi sampled every dtheta, from the origin.

    Truncated once the radius reaches the maximum.
    """
    pitch, dtheta = params.pitch_mm_per_rev, params.dtheta_rad
    n = int(np.ceil(2.0 * np.pi * params.max_radius_mm / (pitch * dtheta))) + 1
    theta = np.arange(n) * dtheta
    r = pitch * theta / (2.0 * np.pi)
    keep = r < params.max_radius_mm - 1e-12
    theta, r = theta[keep], r[keep]
    return np.column_stack([r * np.cos(theta), r * np.sin(theta)])


def wrench_from_torques(jacobian, torques) -> np.ndarray:
    """End-effector force from joint torques: solves J^T f = tau."""
    j = np.asarray(jacobian, dtype=float)
    tau = np.asarray(torques, dtype=float)
    if j.ndim != 2 or j.shape[0] != j.shape[1]:
        raise ValueError("jacobian must be square")
    if np.linalg.cond(j) >= 1e8:
        raise SingularJacobian("jacobian condition number >= 1e8")
    return np.linalg.solve(j.T, tau)


_ARC_SUBDIVISIONS = 8


def _arc_distance(p, params: SpiralParams, theta0: float, theta1: float) -> float:
    """Minimum distance from ``p`` to the spiral arc swept over [theta0, theta1]."""
    theta = np.linspace(theta0, theta1, _ARC_SUBDIVISIONS + 1)
    r = params.pitch_mm_per_rev * theta / (2.0 * np.pi)
    pts = np.column_stack([r * np.cos(theta), r * np.sin(theta)])
    return float(np.linalg.norm(pts - p, axis=1).min())


def run_spiral_search(
    true_offset_mm,
    params: SpiralParams = SpiralParams(),
    contact: ContactModel = ContactModel(),
    rng: np.random.Generator | None = None,
) -> SearchResult:
    """Sweep the spiral until the measured press force drops below the threshold.

    The simulated force sits at press_force (plus noise) while misaligned and
    collapses once the waypoint is within the alignment radius of the true
    offset.  ``found=False`` means the spiral exhausted its radius.
    """
    waypoints = spiral_waypoints(params)
    offset = np.asarray(true_offset_mm, dtype=float)
    threshold = contact.drop_ratio * contact.press_force_N

    for i, wp in enumerate(waypoints):
        # force is monitored along the whole arc swept from the previous waypoint
        if i == 0:
            dist = float(np.linalg.norm(wp - offset))
        else:
            dist = _arc_distance(
                offset, params, (i - 1) * params.dtheta_rad, i * params.dtheta_rad
            )
        aligned = dist <= contact.align_radius_mm
        force = 0.0 if aligned else contact.press_force_N
        if contact.force_noise_N > 0 and rng is not None:
            force += contact.force_noise_N * rng.standard_normal()
        if force < threshold:
            return SearchResult(True, i, i * params.dwell_s, waypoints[: i + 1])

    n = len(waypoints)
    return SearchResult(False, n - 1, (n - 1) * params.dwell_s, waypoints)


def attach_tip(
    world: WorldState,
    initial_offset_mm=(0.0, 0.0),
    params: SpiralParams = SpiralParams(),
    contact: ContactModel = ContactModel(),
    rng: np.random.Generator | None = None,
    allow_refill: bool = True,
) -> SearchResult:
    """Attach a fresh tip from the rack via spiral search; mutates the world.

    On success the pipette tip becomes CLEAN_EMPTY and the rack count drops by
    one.  An empty rack either triggers a refill (modeling a human reload,
    which the caller should log) or raises NoTipsRemaining.
    """
    if world.has_tip:
        raise ValueError("a tip is already attached")
    if world.tip_rack_count <= 0:
        if not allow_refill:
            raise NoTipsRemaining("tip rack is empty")
        world.tip_rack_count = TIP_RACK_CAPACITY

    result = run_spiral_search(initial_offset_mm, params, contact, rng)
    if not result.found:
        raise AttachFailed("spiral search exhausted its radius")

    world.advance_time(result.elapsed_s)
    world.tip_rack_count -= 1
    world.pipette = replace(world.pipette, tip=TipStatus.CLEAN_EMPTY, contents_mL=0.0)
    return result


def remove_tip(world: WorldState) -> None:
    """Hook the tip edge, detach it into the waste bin, and empty the pipette."""
    if not world.has_tip:
        raise NoTipToRemove("no tip attached")
    world.pipette = replace(world.pipette, tip=TipStatus.NO_TIP, contents_mL=0.0)
    world.waste_count += 1
