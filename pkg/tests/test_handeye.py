"""Hand-eye calibration error propagation and its upper bound."""

import numpy as np
import pytest

from culturesim import (
    CalibrationError,
    error_bound,
    position_error,
    rotation_from_axis_angle,
)


def random_rotation(rng):
    axis = rng.standard_normal(3)
    angle = rng.uniform(0, np.pi)
    return rotation_from_axis_angle(axis, angle)


class TestRodrigues:
    def test_identity_at_zero_angle(self):
        np.testing.assert_allclose(rotation_from_axis_angle([0, 0, 1], 0.0), np.eye(3))

    def test_quarter_turn_about_z(self):
        r = rotation_from_axis_angle([0, 0, 1], np.pi / 2)
        np.testing.assert_allclose(r @ [1, 0, 0], [0, 1, 0], atol=1e-12)

    def test_orthonormal_and_proper(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            r = random_rotation(rng)
            np.testing.assert_allclose(r @ r.T, np.eye(3), atol=1e-12)
            assert np.linalg.det(r) == pytest.approx(1.0)

    def test_deviation_norm_formula(self):
        # [DERIVED] ||R - I||_2 = 2 sin(theta / 2)
        for theta in (0.01, 0.3, 1.2, 3.0):
            r = rotation_from_axis_angle([1, 2, 3], theta)
            assert np.linalg.norm(r - np.eye(3), 2) == pytest.approx(
                2.0 * np.sin(theta / 2.0), abs=1e-12
            )


class TestCalibrationError:
    def test_rejects_non_rotation(self):
        with pytest.raises(ValueError):
            CalibrationError(r_eps=np.diag([1.0, 1.0, 2.0]))

    def test_from_axis_angle(self):
        c = CalibrationError.from_axis_angle([0, 0, 1], 0.1, (0.001, 0.0, 0.0))
        np.testing.assert_allclose(c.r_eps, rotation_from_axis_angle([0, 0, 1], 0.1))
        np.testing.assert_allclose(c.p_eps, [0.001, 0.0, 0.0])


class TestPositionError:
    def test_zero_error_gives_zero(self):
        delta = position_error(CalibrationError(), [0.1, 0.2, 0.3])
        np.testing.assert_allclose(delta, np.zeros(3))

    def test_pure_translation_passthrough(self):
        c = CalibrationError(p_eps=np.array([0.001, -0.002, 0.0]))
        delta = position_error(c, [0.5, 0.5, 0.5])
        np.testing.assert_allclose(delta, [0.001, -0.002, 0.0])

    def test_full_transform_oracle(self):
        # independent oracle: compose the corrupted chain and difference it
        rng = np.random.default_rng(9)
        for _ in range(200):
            r_wt = random_rotation(rng)
            r_tc = random_rotation(rng)
            r_eps = rotation_from_axis_angle(rng.standard_normal(3), rng.uniform(0, 0.3))
            p_eps = 0.01 * rng.standard_normal(3)
            p_cam = rng.uniform(-1, 1, 3)
            calib = CalibrationError(r_eps, p_eps)

            # world position seen with a corrupted camera transform minus the truth
            corrupted = r_wt @ (r_tc @ (r_eps @ p_cam) + p_eps)
            truth = r_wt @ (r_tc @ p_cam)
            expected = corrupted - truth
            got = position_error(calib, p_cam, r_wt, r_tc)
            np.testing.assert_allclose(got, expected, atol=1e-12)


class TestBound:
    def test_monte_carlo_bound_holds(self):
        # [DERIVED] 1e5 samples never exceed the bound
        rng = np.random.default_rng(12)
        for _ in range(100_000 // 100):
            r_wt = random_rotation(rng)
            r_tc = random_rotation(rng)
            calib = CalibrationError(
                rotation_from_axis_angle(rng.standard_normal(3), rng.uniform(0, 0.5)),
                0.01 * rng.standard_normal(3),
            )
            p_cams = rng.uniform(-2, 2, size=(100, 3))
            for p_cam in p_cams:
                delta = position_error(calib, p_cam, r_wt, r_tc)
                assert np.linalg.norm(delta) <= error_bound(calib, p_cam) + 1e-12

    def test_rotational_term_linear_in_distance(self):
        calib = CalibrationError.from_axis_angle([0, 1, 0], 0.2)
        p = np.array([0.3, -0.1, 0.8])
        assert error_bound(calib, 2 * p) == pytest.approx(2 * error_bound(calib, p))

    def test_bound_is_tight_for_worst_case_direction(self):
        # for rotation about z, the worst p_cam lies in the xy plane
        theta = 0.3
        calib = CalibrationError.from_axis_angle([0, 0, 1], theta)
        p = np.array([1.0, 0.0, 0.0])
        delta = position_error(calib, p)
        assert np.linalg.norm(delta) == pytest.approx(error_bound(calib, p), rel=1e-12)
