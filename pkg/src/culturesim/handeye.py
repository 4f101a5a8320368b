"""Hand-eye calibration error: object-position error and its upper bound.

A rotational error R_eps and translational error p_eps in the tool-to-camera
transform corrupt the world-frame position of an object seen at camera-frame
position p_cam.  The resulting position error is

    dp = R_wt @ R_tc @ (R_eps - I) @ p_cam + R_wt @ p_eps

and is bounded by ||R_eps - I||_2 * ||p_cam|| + ||p_eps||, a bound that grows
linearly with the camera-object distance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["CalibrationError", "rotation_from_axis_angle", "position_error", "error_bound"]


def rotation_from_axis_angle(axis, angle_rad: float) -> np.ndarray:
    """Rodrigues rotation matrix about ``axis`` by ``angle_rad``."""
    a = np.asarray(axis, dtype=float)
    n = np.linalg.norm(a)
    if n == 0.0:
        return np.eye(3)
    a = a / n
    k = np.array([[0, -a[2], a[1]], [a[2], 0, -a[0]], [-a[1], a[0], 0]])
    return np.eye(3) + np.sin(angle_rad) * k + (1.0 - np.cos(angle_rad)) * (k @ k)


@dataclass(frozen=True)
class CalibrationError:
    """Rotational + translational hand-eye calibration error."""

    r_eps: np.ndarray = field(default_factory=lambda: np.eye(3))
    p_eps: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        r = np.asarray(self.r_eps, dtype=float)
        p = np.asarray(self.p_eps, dtype=float)
        if not np.allclose(r @ r.T, np.eye(3), atol=1e-9) or np.linalg.det(r) < 0:
            raise ValueError("r_eps must be a proper rotation")
        object.__setattr__(self, "r_eps", r)
        object.__setattr__(self, "p_eps", p)

    @classmethod
    def from_axis_angle(cls, axis, angle_rad: float, p_eps=(0.0, 0.0, 0.0)) -> "CalibrationError":
        return cls(rotation_from_axis_angle(axis, angle_rad), np.asarray(p_eps, dtype=float))


def position_error(
    calib: CalibrationError,
    p_cam,
    r_world_tool: np.ndarray | None = None,
    r_tool_cam: np.ndarray | None = None,
) -> np.ndarray:
    """World-frame object-position error induced by the calibration error.

    ``p_cam`` is the object position in the camera frame; the frame rotations
    default to identity.
    """
    r_wt = np.eye(3) if r_world_tool is None else np.asarray(r_world_tool, dtype=float)
    r_tc = np.eye(3) if r_tool_cam is None else np.asarray(r_tool_cam, dtype=float)
    p = np.asarray(p_cam, dtype=float)
    return r_wt @ r_tc @ (calib.r_eps - np.eye(3)) @ p + r_wt @ calib.p_eps


def error_bound(calib: CalibrationError, p_cam) -> float:
    """Upper bound ||R_eps - I||_2 * ||p_cam|| + ||p_eps|| on the position error."""
    rot_term = np.linalg.norm(calib.r_eps - np.eye(3), 2) * np.linalg.norm(p_cam)
    return float(rot_term + np.linalg.norm(calib.p_eps))
