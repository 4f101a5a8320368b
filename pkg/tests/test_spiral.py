"""Spiral tip search, wrench estimation, and tip exchange accounting."""

import numpy as np
import pytest

from culturesim import (
    AttachFailed,
    ContactModel,
    NoTipsRemaining,
    NoTipToRemove,
    SingularJacobian,
    SpiralParams,
    TipStatus,
    WorldState,
    attach_tip,
    remove_tip,
    run_spiral_search,
    spiral_waypoints,
    wrench_from_torques,
)
from culturesim.world import TIP_RACK_CAPACITY

QUIET = ContactModel(force_noise_N=0.0)


class TestWaypoints:
    def test_default_count(self):
        # [DERIVED] ceil(2*pi*4.5 / (0.5 * pi/6)) = 108 waypoints before r hits max
        wp = spiral_waypoints(SpiralParams())
        assert len(wp) == 108

    def test_starts_at_origin(self):
        np.testing.assert_allclose(spiral_waypoints(SpiralParams())[0], [0.0, 0.0])

    def test_radius_monotone_and_bounded(self):
        params = SpiralParams()
        r = np.linalg.norm(spiral_waypoints(params), axis=1)
        assert np.all(np.diff(r) > 0)
        assert r[-1] < params.max_radius_mm

    def test_archimedean_law(self):
        params = SpiralParams()
        wp = spiral_waypoints(params)
        theta = np.arange(len(wp)) * params.dtheta_rad
        expected_r = params.pitch_mm_per_rev * theta / (2 * np.pi)
        np.testing.assert_allclose(np.linalg.norm(wp, axis=1), expected_r, atol=1e-12)


class TestSearch:
    def test_origin_found_immediately(self):
        result = run_spiral_search((0.0, 0.0), contact=QUIET)
        assert result.found and result.waypoint_index == 0
        assert result.elapsed_s == 0.0

    def test_coverage_theorem(self):
        # [DERIVED] zero noise: any offset within the covered radius is found,
        # since adjacent spiral turns are pitch=0.5 mm apart and the alignment
        # radius is 0.3 mm > pitch/2.
        params, contact = SpiralParams(), QUIET
        rng = np.random.default_rng(21)
        outermost = np.linalg.norm(spiral_waypoints(params)[-1])
        coverage = outermost - params.pitch_mm_per_rev / 2.0
        r = coverage * np.sqrt(rng.random(10_000))
        theta = rng.uniform(0, 2 * np.pi, 10_000)
        for x, y in zip(r * np.cos(theta), r * np.sin(theta)):
            assert run_spiral_search((x, y), params, contact).found

    def test_outside_radius_not_found(self):
        result = run_spiral_search((6.0, 0.0), SpiralParams(), QUIET)
        assert not result.found

    def test_search_time_grows_with_offset(self):
        near = run_spiral_search((0.5, 0.0), contact=QUIET)
        far = run_spiral_search((3.5, 0.0), contact=QUIET)
        assert near.elapsed_s < far.elapsed_s

    def test_elapsed_matches_dwell(self):
        params = SpiralParams(dwell_s=0.25)
        result = run_spiral_search((2.0, 1.0), params, QUIET)
        assert result.elapsed_s == pytest.approx(result.waypoint_index * 0.25)


class TestWrench:
    def test_roundtrip_oracle(self):
        # [DERIVED] 1000 random well-conditioned systems
        rng = np.random.default_rng(17)
        done = 0
        while done < 1000:
            j = rng.standard_normal((6, 6))
            if np.linalg.cond(j) >= 1e6:
                continue
            f_true = rng.standard_normal(6)
            tau = j.T @ f_true
            np.testing.assert_allclose(wrench_from_torques(j, tau), f_true, atol=1e-9)
            done += 1

    def test_singular_jacobian_raises(self):
        j = np.zeros((6, 6))
        with pytest.raises(SingularJacobian):
            wrench_from_torques(j, np.zeros(6))

    def test_non_square_rejected(self):
        with pytest.raises(ValueError):
            wrench_from_torques(np.zeros((6, 5)), np.zeros(6))


class TestTipExchange:
    def test_attach_decrements_rack(self):
        world = WorldState()
        result = attach_tip(world, (0.5, 0.5), contact=QUIET)
        assert result.found
        assert world.pipette.tip == TipStatus.CLEAN_EMPTY
        assert world.tip_rack_count == TIP_RACK_CAPACITY - 1

    def test_attach_advances_clock(self):
        world = WorldState()
        world.shaker_active = False
        result = attach_tip(world, (2.0, 0.0), contact=QUIET)
        assert world.clock_s == pytest.approx(result.elapsed_s)

    def test_attach_with_tip_already_on(self):
        world = WorldState()
        attach_tip(world, (0.0, 0.0), contact=QUIET)
        with pytest.raises(ValueError):
            attach_tip(world, (0.0, 0.0), contact=QUIET)

    def test_empty_rack_refills_or_raises(self):
        world = WorldState()
        world.tip_rack_count = 0
        with pytest.raises(NoTipsRemaining):
            attach_tip(world, (0.0, 0.0), contact=QUIET, allow_refill=False)
        attach_tip(world, (0.0, 0.0), contact=QUIET, allow_refill=True)
        assert world.tip_rack_count == TIP_RACK_CAPACITY - 1

    def test_exhausted_spiral_raises(self):
        world = WorldState()
        with pytest.raises(AttachFailed):
            attach_tip(world, (6.0, 0.0), contact=QUIET)
        assert world.pipette.tip == TipStatus.NO_TIP

    def test_remove_tip_accounting(self):
        world = WorldState()
        attach_tip(world, (0.0, 0.0), contact=QUIET)
        remove_tip(world)
        assert world.pipette.tip == TipStatus.NO_TIP
        assert world.pipette.contents_mL == 0.0
        assert world.waste_count == 1

    def test_remove_without_tip(self):
        with pytest.raises(NoTipToRemove):
            remove_tip(WorldState())
