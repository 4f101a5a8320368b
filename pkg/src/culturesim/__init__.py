"""Simulator for a robot-tended yeast culture workstation.

Covers plate geometry and homography estimation, image-based visual servoing,
a digital pipette with gravimetric checks, spiral-search tip exchange,
logistic well growth with saturation detection, the behavior-tree experiment
protocol, and benchmarks plus a WebSocket state stream for a control panel.
"""

from .btree import (
    Inverter,
    Leaf,
    Node,
    ParamStore,
    Selector,
    Sequence,
    Status,
    check_experiment_state,
    set_experiment_state,
    tick,
    tree_to_json,
)
from .config import RunConfig, load_config
from .errors import (
    AbortedOnUnrecoverable,
    AttachFailed,
    ConfigError,
    CultureSimError,
    DegenerateConfiguration,
    EmptyMask,
    InsufficientVolume,
    NoTipAttached,
    NoTipsRemaining,
    NoTipToRemove,
    OutOfRange,
    OverCapacity,
    ParameterRangeError,
    PointAtInfinity,
    SingularJacobian,
    TooFewSamples,
    UnknownParameter,
    UnsupportedPlate,
    UnsupportedVolume,
)
from .experiment import (
    ExperimentConfig,
    ExperimentLog,
    ExperimentRunner,
    build_yeast_tree,
    daughters_of,
    decide_split,
    run_experiment,
)
from .growth import (
    BrightnessModel,
    Group,
    GrowthParams,
    GrowthSeries,
    SaturationConfig,
    WellContents,
    WellStatus,
    brightness_of,
    detect_saturation,
    patch_schedule,
    rolling_average,
    step_growth,
)
from .handeye import CalibrationError, error_bound, position_error, rotation_from_axis_angle
from .insertion import InsertionModel, InsertionResult, attempt_insertion
from .perception import (
    BinaryMask,
    CameraModel,
    NoiseParams,
    Observation,
    TrackState,
    TrackStatus,
    detect_tip,
    error_vector,
    observe,
    tip_pixel,
    track,
)
from .pipette import (
    CalibrationCurve,
    DispenseNoise,
    GravimetricResult,
    PipetteState,
    TipStatus,
    aspirate,
    dispense,
    gravimetric_test,
    iso_limits,
    pulse_to_volume,
    volume_to_pulse,
)
from .plates import (
    BoundingQuad,
    Homography,
    PlateTemplate,
    PlateType,
    check_proportions,
    estimate_homography,
    make_template,
    project,
    project_wells,
)
from .servo import ServoOutcome, ServoParams, ServoStatus, servo_loop, servo_step
from .spiral import (
    ContactModel,
    SearchResult,
    SpiralParams,
    attach_tip,
    remove_tip,
    run_spiral_search,
    spiral_waypoints,
    wrench_from_torques,
)
from .world import PlanarPose, WorldState, default_layout

__version__ = "0.1.0"
