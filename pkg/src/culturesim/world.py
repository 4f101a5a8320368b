"""The simulated workstation: robot, plate, wells, pipette, racks, clock.

One authoritative WorldState instance is owned by the simulation loop; all
mutation happens inside that loop.  Time advances in simulated seconds, and
cell growth is integrated whenever the clock moves while the shaker runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .growth import Group, GrowthParams, WellContents, WellStatus, step_growth
from .handeye import CalibrationError
from .pipette import PipetteState, TipStatus
from .plates import PlateTemplate, make_template, PlateType

__all__ = ["PlanarPose", "WorldState", "default_layout"]

TIP_RACK_CAPACITY = 12


@dataclass
class PlanarPose:
    """Planar pose in the robot base frame: position in meters plus yaw."""

    x_m: float = 0.0
    y_m: float = 0.0
    yaw_rad: float = 0.0

    def to_world(self, local_mm) -> np.ndarray:
        """Map a template-frame millimeter point into world meters."""
        c, s = np.cos(self.yaw_rad), np.sin(self.yaw_rad)
        p = np.asarray(local_mm, dtype=float) / 1000.0
        return np.array(
            [self.x_m + c * p[0] - s * p[1], self.y_m + s * p[0] + c * p[1]]
        )


def default_layout() -> list[WellContents]:
    """Initial plate loading: rows A and E carry the four 6-replicate groups.

    Row A cols 1-6: 50M cells/mL, row A cols 7-12: 30M cells/mL,
    row E cols 1-6: 10M cells/mL, row E cols 7-12: blank media.
    """
    wells = [WellContents() for _ in range(96)]
    assignments = [
        (0, range(0, 6), Group.HIGH_50M, 5.0e7),
        (0, range(6, 12), Group.MID_30M, 3.0e7),
        (4, range(0, 6), Group.LOW_10M, 1.0e7),
        (4, range(6, 12), Group.BLANK, 0.0),
    ]
    for row, cols, group, density in assignments:
        for col in cols:
            wells[row * 12 + col] = WellContents(
                status=WellStatus.SEEDED,
                cells_per_mL=density,
                volume_mL=0.2,
                group=group,
            )
    return wells


@dataclass
class WorldState:
    clock_s: float = 0.0
    ee_pose: np.ndarray = field(default_factory=lambda: np.array([0.3, 0.0, 0.3]))
    plate_pose: PlanarPose = field(default_factory=lambda: PlanarPose(0.25, -0.064))
    template: PlateTemplate = field(default_factory=lambda: make_template(PlateType.WELLS_96))
    wells: list[WellContents] = field(default_factory=default_layout)
    shaker_active: bool = True
    pipette: PipetteState = field(default_factory=PipetteState)
    holding_pipette: bool = False
    tip_rack_count: int = TIP_RACK_CAPACITY
    waste_count: int = 0
    tag_poses: dict[int, PlanarPose] = field(default_factory=dict)
    calib_error: CalibrationError = field(default_factory=CalibrationError)
    media_tube_mL: float = 50.0
    growth: GrowthParams = field(default_factory=GrowthParams)
    # Grasp-dependent true tip offset from the end-effector, world XY mm.
    tip_offset_mm: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def advance_time(self, dt_s: float) -> None:
        """Move the clock; integrate growth while the shaker keeps cells suspended."""
        if dt_s < 0:
            raise ValueError("time cannot run backwards")
        self.clock_s += dt_s
        if self.shaker_active and dt_s > 0:
            dt_hr = dt_s / 3600.0
            self.wells = [
                step_growth(w, self.growth, dt_hr, shaking=True) for w in self.wells
            ]

    def well_center_world(self, index: int) -> np.ndarray:
        """World XY (meters) of a well center under the current plate pose."""
        return self.plate_pose.to_world(self.template.well_center_mm(index))

    def plate_corners_world(self) -> np.ndarray:
        """World XY (meters) of the plate rectangle corners, TL TR BR BL."""
        return np.array([self.plate_pose.to_world(c) for c in self.template.corners_mm()])

    def tip_world_xy(self) -> np.ndarray:
        """True world XY (meters) of the pipette tip."""
        return self.ee_pose[:2] + self.tip_offset_mm / 1000.0

    @property
    def has_tip(self) -> bool:
        return self.pipette.tip != TipStatus.NO_TIP
