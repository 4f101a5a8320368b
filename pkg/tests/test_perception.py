"""Synthetic camera, tip detection, and plate tracking."""

import numpy as np
import pytest

from culturesim import (
    BinaryMask,
    CameraModel,
    EmptyMask,
    NoiseParams,
    TrackState,
    TrackStatus,
    WorldState,
    detect_tip,
    error_vector,
    observe,
    tip_pixel,
    track,
)
from culturesim.perception import ZERO_NOISE


class TestCamera:
    def test_point_under_ee_maps_to_principal(self):
        cam = CameraModel()
        px = cam.pixel_of_world((0.3, 0.1), (0.3, 0.1))
        np.testing.assert_allclose(px, cam.principal)

    def test_scale_and_axis_convention(self):
        cam = CameraModel(scale_px_per_mm=2.0)
        # 1 mm world +x shift of the point moves the pixel -2 px in image y
        px = cam.pixel_of_world((0.301, 0.1), (0.3, 0.1))
        np.testing.assert_allclose(px, (cam.principal[0], cam.principal[1] - 2.0))
        px = cam.pixel_of_world((0.3, 0.101), (0.3, 0.1))
        np.testing.assert_allclose(px, (cam.principal[0] - 2.0, cam.principal[1]))


class TestDetectTip:
    def test_single_lowest_pixel(self):
        grid = np.zeros((10, 10), dtype=bool)
        grid[2:8, 4] = True
        assert detect_tip(BinaryMask(grid)) == (4.0, 7.0)

    def test_tie_averages_x(self):
        grid = np.zeros((5, 9), dtype=bool)
        grid[4, [2, 6]] = True
        assert detect_tip(BinaryMask(grid)) == (4.0, 4.0)

    def test_empty_mask_raises(self):
        with pytest.raises(EmptyMask):
            detect_tip(BinaryMask(np.zeros((3, 3), dtype=bool)))


class TestObserve:
    def test_zero_noise_corners_exact(self):
        world = WorldState()
        cam = CameraModel()
        obs = observe(world, cam, ZERO_NOISE)
        expected = np.array(
            [cam.pixel_of_world(c, world.ee_pose[:2]) for c in world.plate_corners_world()]
        )
        np.testing.assert_allclose(obs.corners.corners, expected)
        assert obs.timestamp_s == world.clock_s

    def test_tip_pixel_bias_applied(self):
        world = WorldState()
        world.tip_offset_mm = np.array([1.0, -2.0])
        cam = CameraModel(scale_px_per_mm=2.0)
        px = tip_pixel(world, cam, (3.0, -1.0))
        np.testing.assert_allclose(px, (320.0 + 4.0 + 3.0, 240.0 - 2.0 - 1.0))

    def test_certain_occlusion_drops_corners(self):
        world = WorldState()
        noise = NoiseParams(corner_sigma_px=0.0, occlusion_prob=1.0, tip_bias_px=0.0)
        obs = observe(world, CameraModel(), noise, np.random.default_rng(0))
        assert obs.corners is None

    def test_corner_noise_statistics(self):
        world = WorldState()
        cam = CameraModel()
        rng = np.random.default_rng(3)
        noise = NoiseParams(corner_sigma_px=1.5, occlusion_prob=0.0, tip_bias_px=0.0)
        clean = observe(world, cam, ZERO_NOISE).corners.corners
        deltas = np.array([
            observe(world, cam, noise, rng).corners.corners - clean for _ in range(400)
        ]).ravel()
        assert abs(deltas.mean()) < 0.1
        assert abs(deltas.std() - 1.5) < 0.1


class TestTrack:
    def test_tracked_on_good_observation(self):
        world = WorldState()
        obs = observe(world, CameraModel(), ZERO_NOISE)
        state = track(TrackState(), obs, world.template)
        assert state.status == TrackStatus.TRACKED
        assert state.frames_lost == 0

    def test_lost_on_occlusion_counts_frames(self):
        world = WorldState()
        noise = NoiseParams(corner_sigma_px=0.0, occlusion_prob=1.0, tip_bias_px=0.0)
        obs = observe(world, CameraModel(), noise, np.random.default_rng(0))
        state = track(TrackState(), obs, world.template)
        state = track(state, obs, world.template)
        assert state.status == TrackStatus.LOST
        assert state.frames_lost == 2

    def test_bad_proportions_lose_track(self):
        world = WorldState()
        obs = observe(world, CameraModel(), ZERO_NOISE)
        squished = obs.corners.corners.copy()
        squished[:, 0] *= 5.0  # breaks the aspect ratio check
        from culturesim import BoundingQuad, Observation
        bad = Observation(BoundingQuad(squished), obs.tip_px, obs.timestamp_s)
        assert track(TrackState(), bad, world.template).status == TrackStatus.LOST


def test_error_vector_is_tip_minus_well():
    np.testing.assert_allclose(error_vector((10.0, 5.0), (4.0, 7.0)), (6.0, -2.0))
