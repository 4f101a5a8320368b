"""Well-plate templates in millimeters and the projective map into image pixels.

Plate outer dimensions follow the SLAS microplate footprint (127.76 x 85.48 mm);
well pitch and diameter per plate format.  Well centers are laid out row-major
from A1, so index ``row * cols + col`` matches the ``desired_well`` convention
(0..95 for a 96-well plate).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .errors import DegenerateConfiguration, PointAtInfinity

__all__ = [
    "PlateType",
    "PlateTemplate",
    "Homography",
    "BoundingQuad",
    "make_template",
    "estimate_homography",
    "project",
    "project_wells",
    "check_proportions",
]


class PlateType(IntEnum):
    WELLS_96 = 0
    WELLS_24 = 1
    WELLS_6 = 2


# SLAS footprint is shared; pitch and grid depend on the format.
_PLATE_SPECS = {
    PlateType.WELLS_96: dict(rows=8, cols=12, pitch_mm=9.0, well_diameter_mm=9.0),
    PlateType.WELLS_24: dict(rows=4, cols=6, pitch_mm=19.3, well_diameter_mm=15.6),
    PlateType.WELLS_6: dict(rows=2, cols=3, pitch_mm=39.12, well_diameter_mm=34.8),
}

_SLAS_LENGTH_MM = 127.76
_SLAS_WIDTH_MM = 85.48


@dataclass(frozen=True)
class PlateTemplate:
    plate_type: PlateType
    rows: int
    cols: int
    length_mm: float
    width_mm: float
    pitch_mm: float
    a1_offset_mm: tuple[float, float]
    well_diameter_mm: float

    def well_center_mm(self, index: int) -> tuple[float, float]:
        """Center of well ``index`` (row-major from A1) in template millimeters."""
        row, col = divmod(index, self.cols)
        ox, oy = self.a1_offset_mm
        return (ox + col * self.pitch_mm, oy + row * self.pitch_mm)

    def corners_mm(self) -> np.ndarray:
        """Plate rectangle corners, ordered TL, TR, BR, BL, shape (4, 2)."""
        length, width = self.length_mm, self.width_mm
        return np.array(
            [[0.0, 0.0], [length, 0.0], [length, width], [0.0, width]]
        )


@dataclass(frozen=True)
class Homography:
    """3x3 projective map, scale-normalized so h[2, 2] == 1 when possible."""

    h: np.ndarray

    def __post_init__(self):
        h = np.asarray(self.h, dtype=float)
        if h.shape != (3, 3):
            raise ValueError("homography must be 3x3")
        if abs(h[2, 2]) > 1e-12:
            h = h / h[2, 2]
        object.__setattr__(self, "h", h)

    @property
    def is_invertible(self) -> bool:
        return abs(np.linalg.det(self.h)) > 1e-12


@dataclass(frozen=True)
class BoundingQuad:
    """Four ordered pixel corners: top-left, top-right, bottom-right, bottom-left."""

    corners: np.ndarray  # shape (4, 2)

    def __post_init__(self):
        c = np.asarray(self.corners, dtype=float)
        if c.shape != (4, 2):
            raise ValueError("quad needs 4 corner points")
        object.__setattr__(self, "corners", c)

    def side_lengths(self) -> np.ndarray:
        c = self.corners
        return np.linalg.norm(np.roll(c, -1, axis=0) - c, axis=1)


def make_template(plate_type: PlateType) -> PlateTemplate:
    """Build the millimeter template for a 96/24/6-well plate.

    Margins are symmetric: the A1 offset is half of what remains of the outer
    dimension after the well lattice span is subtracted.
    """
    spec = _PLATE_SPECS[PlateType(plate_type)]
    rows, cols, pitch = spec["rows"], spec["cols"], spec["pitch_mm"]
    a1x = (_SLAS_LENGTH_MM - (cols - 1) * pitch) / 2.0
    a1y = (_SLAS_WIDTH_MM - (rows - 1) * pitch) / 2.0
    return PlateTemplate(
        plate_type=PlateType(plate_type),
        rows=rows,
        cols=cols,
        length_mm=_SLAS_LENGTH_MM,
        width_mm=_SLAS_WIDTH_MM,
        pitch_mm=pitch,
        a1_offset_mm=(a1x, a1y),
        well_diameter_mm=spec["well_diameter_mm"],
    )


def _normalization(points: np.ndarray) -> np.ndarray:
    """Similarity transform taking points to zero mean and RMS radius sqrt(2)."""
    mean = points.mean(axis=0)
    rms = np.sqrt(np.mean(np.sum((points - mean) ** 2, axis=1)))
    scale = np.sqrt(2.0) / rms if rms > 0 else 1.0
    return np.array(
        [
            [scale, 0.0, -scale * mean[0]],
            [0.0, scale, -scale * mean[1]],
            [0.0, 0.0, 1.0],
        ]
    )


def estimate_homography(src, dst) -> Homography:
    """Estimate the homography mapping 4 source points onto 4 destination points.

    Normalized DLT: both point sets are mean-centered and isotropically scaled
    before solving the 8x8 linear system, then the conditioning transforms are
    undone.  Raises DegenerateConfiguration when three points are collinear.
    """
    src = np.asarray(src, dtype=float).reshape(4, 2)
    dst = np.asarray(dst, dtype=float).reshape(4, 2)

    t_src = _normalization(src)
    t_dst = _normalization(dst)
    s = (t_src @ np.column_stack([src, np.ones(4)]).T).T[:, :2]
    d = (t_dst @ np.column_stack([dst, np.ones(4)]).T).T[:, :2]

    a = np.zeros((8, 8))
    b = np.zeros(8)
    for i in range(4):
        x, y = s[i]
        u, v = d[i]
        a[2 * i] = [x, y, 1, 0, 0, 0, -u * x, -u * y]
        a[2 * i + 1] = [0, 0, 0, x, y, 1, -v * x, -v * y]
        b[2 * i] = u
        b[2 * i + 1] = v

    try:
        sol = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise DegenerateConfiguration("collinear correspondences") from exc
    if not np.all(np.isfinite(sol)):
        raise DegenerateConfiguration("collinear correspondences")

    hn = np.append(sol, 1.0).reshape(3, 3)
    h = np.linalg.inv(t_dst) @ hn @ t_src
    homog = Homography(h)
    if not homog.is_invertible:
        raise DegenerateConfiguration("recovered homography is singular")
    return homog


def project(h: Homography, p) -> tuple[float, float]:
    """Apply the homography to one template point, with perspective division."""
    v = h.h @ np.array([p[0], p[1], 1.0])
    if abs(v[2]) < 1e-12:
        raise PointAtInfinity(f"point {p} maps to infinity")
    return (v[0] / v[2], v[1] / v[2])


def project_wells(h: Homography, template: PlateTemplate) -> np.ndarray:
    """Pixel locations of every well center, row-major from A1, shape (rows*cols, 2)."""
    n = template.rows * template.cols
    centers = np.array([template.well_center_mm(i) for i in range(n)])
    homo = (h.h @ np.column_stack([centers, np.ones(n)]).T).T
    w = homo[:, 2]
    if np.any(np.abs(w) < 1e-12):
        raise PointAtInfinity("a well center maps to infinity")
    return homo[:, :2] / w[:, None]


def check_proportions(quad: BoundingQuad, template: PlateTemplate, tol: float = 0.10) -> bool:
    """True when the quad's long/short side ratio matches the plate's aspect ratio.

    The ratio of the mean of the two longer sides to the mean of the two shorter
    sides is compared against length/width within relative tolerance ``tol``.
    Degenerate (zero-length-side) quads fail.
    """
    sides = np.sort(quad.side_lengths())
    short = (sides[0] + sides[1]) / 2.0
    long = (sides[2] + sides[3]) / 2.0
    if short <= 0.0:
        return False
    expected = template.length_mm / template.width_mm
    return abs(long / short - expected) <= tol * expected
