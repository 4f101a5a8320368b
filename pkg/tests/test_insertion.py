"""Tip-into-well insertion with the retry cap."""

import numpy as np
import pytest

from culturesim import (
    CameraModel,
    InsertionModel,
    NoiseParams,
    PipetteState,
    ServoParams,
    TipStatus,
    WorldState,
    attempt_insertion,
)
from culturesim.perception import ZERO_NOISE


def make_world():
    world = WorldState()
    world.pipette = PipetteState(tip=TipStatus.CLEAN_EMPTY)
    center = world.well_center_world(42)
    world.ee_pose = np.array([center[0] + 0.02, center[1] - 0.03, 0.3])
    return world


class TestInsertion:
    def test_zero_noise_is_perfect(self):
        world = make_world()
        result = attempt_insertion(
            world, CameraModel(), ZERO_NOISE, 42, ServoParams(), InsertionModel()
        )
        assert result.success and result.perfect
        assert result.attempts == 1
        assert result.miss_mm < 1.6  # servo threshold 3 px at 2 px/mm

    def test_accepts_within_well_radius_minus_tip(self):
        world = make_world()
        model = InsertionModel(tip_radius_mm=1.0)
        result = attempt_insertion(
            world, CameraModel(), ZERO_NOISE, 42, ServoParams(), model
        )
        accept = world.template.well_diameter_mm / 2.0 - model.tip_radius_mm
        assert result.miss_mm <= accept

    def test_large_bias_fails_after_cap(self):
        # a 12 px perceived-tip bias lands ~6 mm off: every attempt misses
        world = make_world()
        model = InsertionModel(max_attempts=3)
        result = attempt_insertion(
            world, CameraModel(), ZERO_NOISE, 42, ServoParams(), model,
            tip_bias_px=(12.0, 0.0),
        )
        assert not result.success
        assert result.attempts == 3  # never a fourth consecutive attempt

    def test_moderate_noise_retries_then_succeeds(self):
        rng = np.random.default_rng(3)
        succeeded_after_retry = False
        for seed in range(40):
            world = make_world()
            result = attempt_insertion(
                world, CameraModel(), NoiseParams(corner_sigma_px=4.0), 42,
                ServoParams(), InsertionModel(), np.random.default_rng(seed),
                tip_bias_px=(5.5, 0.0),
            )
            if result.success and result.attempts > 1:
                succeeded_after_retry = True
                break
        assert succeeded_after_retry

    def test_attempt_cap_validated(self):
        with pytest.raises(ValueError):
            InsertionModel(max_attempts=0)

    def test_clock_advances_per_attempt(self):
        world = make_world()
        world.shaker_active = False
        model = InsertionModel(insert_depth_s=1.0)
        attempt_insertion(world, CameraModel(), ZERO_NOISE, 42, ServoParams(), model)
        assert world.clock_s > 0.0
