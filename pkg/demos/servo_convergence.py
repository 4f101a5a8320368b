"""Watch the visual servo walk the pipette tip onto a well center.

The controller is a proportional law on the pixel error with an x/y swap and a
per-step clamp.  With the default camera scale (2 px/mm) and gain the loop is
deadbeat; with half the gain the error decays geometrically, which is what this
script prints.
"""

import numpy as np

from culturesim import CameraModel, ServoParams, WorldState, servo_loop
from culturesim.perception import NoiseParams, ZERO_NOISE


def place(world, cam, err_px):
    center = world.well_center_world(42)
    s = cam.scale_px_per_m
    world.ee_pose = np.array([center[0] + err_px[1] / s, center[1] + err_px[0] / s, 0.3])


def main():
    cam = CameraModel()

    print("half gain, zero noise (error halves each iteration):")
    params = ServoParams(k_p=0.00025, u_lim=10.0)
    world = WorldState()
    place(world, cam, (300.0, 0.0))
    out = servo_loop(world, cam, ZERO_NOISE, 42, params)
    print(f"  {out.status.value} after {out.iterations} iterations, "
          f"|e| = {np.linalg.norm(out.final_error_px):.4f} px")

    print("default deadbeat gain:")
    params = ServoParams(u_lim=10.0)
    world = WorldState()
    place(world, cam, (300.0, 0.0))
    out = servo_loop(world, cam, ZERO_NOISE, 42, params)
    print(f"  {out.status.value} after {out.iterations} iteration(s)")

    print("default gain and clamp under corner noise:")
    world = WorldState()
    place(world, cam, (250.0, -180.0))
    out = servo_loop(world, cam, NoiseParams(), 42, ServoParams(),
                     np.random.default_rng(0))
    print(f"  {out.status.value} after {out.iterations} iterations, "
          f"|e| = {np.linalg.norm(out.final_error_px):.2f} px")


if __name__ == "__main__":
    main()
