"""The yeast-culture experiment: world protocol, behavior tree, and run loop.

The plate starts with four 6-replicate groups in rows A and E.  Every five
simulated minutes the shaker stops and the wells are imaged in eight patches;
when a group's smoothed growth curve plateaus, its six wells are split: each
parent's three daughter wells (the rows directly below it) are pre-filled with
0.2 mL of media, then 0.05 mL of resuspended culture is transferred into each,
the parent is voided, and the tip is exchanged between splits.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .btree import (
    Leaf,
    Node,
    ParamStore,
    Selector,
    Sequence,
    Inverter,
    Status,
    check_experiment_state,
    set_experiment_state,
    tick,
)
from .errors import AbortedOnUnrecoverable, AttachFailed, CultureSimError
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
)
from .handeye import position_error
from .insertion import InsertionModel, attempt_insertion
from .perception import CameraModel, NoiseParams, observe
from .pipette import DispenseNoise, TipStatus, aspirate, dispense
from .servo import ServoParams
from .spiral import ContactModel, SpiralParams, attach_tip, remove_tip
from .world import PlanarPose, WorldState

__all__ = [
    "ExperimentConfig",
    "ExperimentLog",
    "ExperimentRunner",
    "GROUP_PARENTS",
    "daughters_of",
    "decide_split",
    "build_yeast_tree",
    "run_experiment",
]

MONITOR_PERIOD_S = 300.0
MONITOR_ITERATIONS = 8

# Parent wells per group: row A cols 1-6 / 7-12, row E cols 1-6 / 7-12.
GROUP_PARENTS = {
    Group.HIGH_50M: list(range(0, 6)),
    Group.MID_30M: list(range(6, 12)),
    Group.LOW_10M: list(range(48, 54)),
    Group.BLANK: list(range(54, 60)),
}

MEDIA_FILL_ML = 0.2
YEAST_SPLIT_ML = 0.05
RESUSPEND_CYCLES = 5
RESUSPEND_ML = 0.1


def daughters_of(parent: int) -> list[int]:
    """The three wells in the rows directly below the parent, same column."""
    return [parent + 12, parent + 24, parent + 36]


@dataclass
class ExperimentConfig:
    max_hours: float = 15.0
    seed: int = 42
    cam: CameraModel = field(default_factory=CameraModel)
    noise: NoiseParams = field(default_factory=NoiseParams)
    servo: ServoParams = field(default_factory=ServoParams)
    spiral: SpiralParams = field(default_factory=SpiralParams)
    contact: ContactModel = field(default_factory=ContactModel)
    insertion: InsertionModel = field(default_factory=InsertionModel)
    dispense_noise: DispenseNoise = field(default_factory=DispenseNoise)
    growth: GrowthParams = field(default_factory=GrowthParams)
    brightness: BrightnessModel = field(default_factory=BrightnessModel)
    saturation: SaturationConfig = field(default_factory=SaturationConfig)
    grasp_offset_mm: float = 1.5  # half-range of the per-grasp tip offset, per axis
    patch_image_s: float = 2.0  # simulated seconds per imaging patch
    action_s: float = 2.0  # generic lower/raise/actuate duration
    allow_rack_refill: bool = True
    auto_blank_split: bool = True  # scripted end-of-run split of the blank group
    idle_tick_s: float = 0.5


@dataclass
class ExperimentLog:
    events: list[dict] = field(default_factory=list)
    growth_rows: list[dict] = field(default_factory=list)

    def add(self, t_hr: float, event: str, **payload) -> None:
        self.events.append({"event": event, "t_sim_hr": round(t_hr, 6), **payload})

    def write_events_jsonl(self, path) -> None:
        with open(path, "w") as fh:
            for ev in self.events:
                fh.write(json.dumps(ev, sort_keys=True) + "\n")

    def write_growth_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("time_hr,well,group,replicate,brightness_raw,brightness_smoothed\n")
            for row in self.growth_rows:
                fh.write(
                    "{time_hr:.6f},{well},{group},{replicate},"
                    "{brightness_raw:.4f},{brightness_smoothed:.4f}\n".format(**row)
                )


def decide_split(params: ParamStore, group: Group, already_split: set[Group]) -> bool:
    """Enqueue a group's parents for splitting and its daughters for media.

    Idempotent: a group is enqueued at most once.  Returns True if enqueued.
    """
    if group in already_split:
        return False
    parents = GROUP_PARENTS[group]
    for parent in parents:
        params.push("needs_split", parent)
    for parent in parents:
        for daughter in daughters_of(parent):
            params.push("needs_media", daughter)
    already_split.add(group)
    return True


class ExperimentRunner:
    """Owns the world, parameter store, behavior tree, and event log for one run."""

    def __init__(self, config: ExperimentConfig | None = None, world: WorldState | None = None):
        self.config = config or ExperimentConfig()
        self.rng = np.random.default_rng(self.config.seed)
        self.world = world or WorldState()
        self.world.growth = self.config.growth
        self.world.tag_poses = {
            0: PlanarPose(0.45, 0.20),  # pipette stand
            1: PlanarPose(0.45, 0.00),  # tip rack
            2: PlanarPose(0.45, -0.10),  # media tube
            3: PlanarPose(0.45, -0.20),  # tip remover
        }
        self.params = ParamStore()
        self.log = ExperimentLog()
        self.groups_split: set[Group] = set()
        self.split_in_progress: Group | None = None
        self.next_monitor_s = 0.0
        self.monitor_iter = 0
        self.tip_bias_px = np.zeros(2)
        self.inhaled_density: float = 0.0
        self.inhaled_group: Group | None = None
        self.history: dict[Group, list[tuple[float, float]]] = {g: [] for g in Group}
        self.last_trace: list[tuple[str, Status]] = []
        self.paused = False
        self._commands: list[dict] = []
        self._media_drawn_total = 0.0
        self.snapshot_hook: Callable[["ExperimentRunner"], None] | None = None
        self.params.subscribe(self._on_param_change)
        self.tree = build_yeast_tree(self)

    # -- parameter side effects ----------------------------------------------

    def _on_param_change(self, name: str, value) -> None:
        if name == "shaker_active":
            self.world.shaker_active = bool(value)
        elif name == "pipette_actuator_pos":
            self.world.pipette = replace(self.world.pipette, pulse_us=float(value))
        elif name == "tip_rack_count":
            self.world.tip_rack_count = int(value)
        elif name == "holding_pipette":
            self.world.holding_pipette = bool(value)

    # -- command channel (service / scripted human) --------------------------

    def submit_command(self, command: dict) -> None:
        self._commands.append(command)

    def _apply_commands(self) -> None:
        pending, self._commands = self._commands, []
        for cmd in pending:
            name = cmd.get("name")
            if name == "pause":
                self.paused = True
            elif name == "resume":
                self.paused = False
            elif name == "set_param":
                try:
                    self.params.set(cmd["param"], cmd["value"])
                except CultureSimError as exc:
                    self.log.add(self.t_hr, "param_rejected",
                                 param=cmd.get("param"), reason=str(exc))
            elif name == "force_split":
                group = Group(cmd["group"])
                if decide_split(self.params, group, self.groups_split):
                    self.log.add(
                        self.t_hr, "force_split", group=group.value,
                        source=cmd.get("source", "command"),
                    )

    # -- helpers -------------------------------------------------------------

    @property
    def t_hr(self) -> float:
        return self.world.clock_s / 3600.0

    def work_pending(self) -> bool:
        p = self.params
        return bool(
            p.get("needs_split")
            or p.get("needs_media")
            or p.get("needs_yeast")
            or p.get("pipette_status") == int(TipStatus.CONTAMINATED)
            or self.monitor_iter > 0
        )

    def experiment_complete(self) -> bool:
        return len(self.groups_split) == len(Group) and not self.work_pending()

    def perceived_tag_xy(self, tag_id: int) -> np.ndarray:
        """Tag world XY as estimated through the erroneous hand-eye calibration."""
        pose = self.world.tag_poses[tag_id]
        true_xy = np.array([pose.x_m, pose.y_m])
        cam_height = self.world.ee_pose[2]
        p_cam = np.array([true_xy[0] - self.world.ee_pose[0],
                          true_xy[1] - self.world.ee_pose[1],
                          -cam_height])
        delta = position_error(self.world.calib_error, p_cam)
        return true_xy + delta[:2]

    def regrasp(self) -> None:
        """Draw a fresh grasp: true tip offset and perceived-tip pixel bias."""
        half = self.config.grasp_offset_mm
        self.world.tip_offset_mm = self.rng.uniform(-half, half, size=2)
        self.redetect_tip()

    def redetect_tip(self) -> None:
        """Re-run tip detection (fresh perceived-tip bias), done after tip changes."""
        b = self.config.noise.tip_bias_px
        self.tip_bias_px = self.rng.uniform(-b, b, size=2)

    # -- growth monitoring ---------------------------------------------------

    def record_growth(self) -> None:
        cfg = self.config
        t_hr = self.next_monitor_s / 3600.0
        raw: dict[Group, list[float]] = {g: [] for g in Group}
        well_rows = []
        for idx, well in enumerate(self.world.wells):
            value = brightness_of(well, cfg.brightness, self.world.growth, self.rng)
            group = well.group.value if well.group is not None else "none"
            well_rows.append(
                dict(time_hr=t_hr, well=idx, group=group, replicate=idx % 12,
                     brightness_raw=value, brightness_smoothed=value)
            )
            # only the original parent wells feed the split decision curves
            if well.group is not None and idx in GROUP_PARENTS[well.group]:
                raw[well.group].append(value)

        for group, values in raw.items():
            if values:
                self.history[group].append((t_hr, float(np.mean(values))))

        # group-level smoothed value stamped onto each member well's row
        smoothed_now: dict[str, float] = {}
        for group in Group:
            series = self.history[group]
            if series:
                smoothed = rolling_average([v for _, v in series], 5)
                smoothed_now[group.value] = float(smoothed[-1])
        for row in well_rows:
            row["brightness_smoothed"] = smoothed_now.get(row["group"], row["brightness_raw"])
        self.log.growth_rows.extend(well_rows)
        self.log.add(t_hr, "imaging", n_wells=len(well_rows))

        for group in (Group.HIGH_50M, Group.MID_30M, Group.LOW_10M):
            if group in self.groups_split:
                continue
            series = self.history[group]
            if len(series) < self.config.saturation.min_points:
                continue
            times = np.array([t for t, _ in series])
            smoothed = rolling_average([v for _, v in series], 5)
            when = detect_saturation(GrowthSeries(times, smoothed), self.config.saturation)
            if when is not None:
                self.log.add(t_hr, "saturation", group=group.value, detected_at_hr=when)
                decide_split(self.params, group, self.groups_split)
                self.split_in_progress = group
                self.log.add(
                    t_hr, "split_enqueued", group=group.value,
                    parents=GROUP_PARENTS[group],
                    daughters=[d for p in GROUP_PARENTS[group] for d in daughters_of(p)],
                )

        if (
            self.config.auto_blank_split
            and Group.BLANK not in self.groups_split
            and {Group.HIGH_50M, Group.MID_30M, Group.LOW_10M} <= self.groups_split
        ):
            # the blank group is split at the end by a scripted operator command
            self.submit_command({"name": "force_split", "group": Group.BLANK.value,
                                 "source": "schedule"})

        if self.next_monitor_s + MONITOR_PERIOD_S > self.world.clock_s:
            self.next_monitor_s += MONITOR_PERIOD_S
        else:
            self.next_monitor_s = (
                np.ceil(self.world.clock_s / MONITOR_PERIOD_S) * MONITOR_PERIOD_S
            )

    # -- main loop -----------------------------------------------------------

    def step(self) -> Status:
        """One tick of the experiment tree; idles forward when nothing is due."""
        self._apply_commands()
        before = self.world.clock_s
        status, self.last_trace = tick(self.tree, self.world, self.params)
        if self.world.clock_s == before:
            if status != Status.RUNNING and not self.work_pending():
                dt = max(self.next_monitor_s - self.world.clock_s, 0.0)
                self.world.advance_time(dt if dt > 0 else self.config.idle_tick_s)
            else:
                self.world.advance_time(self.config.idle_tick_s)
        if self.snapshot_hook is not None:
            self.snapshot_hook(self)
        return status

    def run(self) -> ExperimentLog:
        """Run to max_hours; monitoring continues after the last split completes."""
        max_s = self.config.max_hours * 3600.0
        completed = False
        while self.world.clock_s < max_s:
            if not completed and self.experiment_complete():
                self.log.add(self.t_hr, "complete", groups=len(self.groups_split))
                completed = True
            self.step()
        if not completed:
            self.log.add(self.t_hr, "timeout", groups_split=len(self.groups_split))
        return self.log


# --- leaf behaviors ---------------------------------------------------------


def _timed_leaf(runner: ExperimentRunner, name: str, seconds: float,
                action: Callable[[], None] | None = None) -> Leaf:
    def behavior(ctx) -> Status:
        if action is not None:
            action()
        runner.world.advance_time(seconds)
        return Status.SUCCESS

    return Leaf(name, behavior)


def _ensure_shaker_leaf(runner: ExperimentRunner) -> Leaf:
    def behavior(ctx) -> Status:
        # the shaker stays off while imaging or splitting is underway
        if not runner.work_pending() and not ctx.params.get("shaker_active"):
            ctx.params.set("shaker_active", True)
        return Status.SUCCESS

    return Leaf("ensure_shaker", behavior)


def _monitor_due_leaf(runner: ExperimentRunner) -> Leaf:
    def behavior(ctx) -> Status:
        if runner.monitor_iter > 0:
            return Status.SUCCESS  # imaging pass already underway
        # after a split blocked the cadence, snap back onto the 5-minute grid
        if runner.world.clock_s > runner.next_monitor_s + 1e-9:
            runner.next_monitor_s = float(
                np.ceil(runner.world.clock_s / MONITOR_PERIOD_S) * MONITOR_PERIOD_S
            )
        due = runner.world.clock_s >= runner.next_monitor_s - 1e-9
        busy = (
            ctx.params.get("needs_split")
            or ctx.params.get("needs_media")
            or ctx.params.get("needs_yeast")
            or ctx.params.get("pipette_status") == int(TipStatus.CONTAMINATED)
        )
        return Status.SUCCESS if (due and not busy) else Status.FAILURE

    return Leaf("monitor_due", behavior)


def _monitor_perceive_leaf(runner: ExperimentRunner) -> Leaf:
    """Images one patch per tick; succeeds only on its eighth iteration."""

    def behavior(ctx) -> Status:
        runner.monitor_iter += 1
        runner.world.advance_time(runner.config.patch_image_s)
        if runner.monitor_iter < MONITOR_ITERATIONS:
            return Status.RUNNING
        return Status.SUCCESS

    return Leaf("monitor_perceive", behavior)


def _record_growth_leaf(runner: ExperimentRunner) -> Leaf:
    def behavior(ctx) -> Status:
        runner.record_growth()
        runner.monitor_iter = 0
        return Status.SUCCESS

    return Leaf("record_growth", behavior)


def _resume_shaker_leaf(runner: ExperimentRunner) -> Leaf:
    def behavior(ctx) -> Status:
        if not runner.work_pending():
            ctx.params.set("shaker_active", True)
        return Status.SUCCESS

    return Leaf("resume_shaker", behavior)


def _perceive_leaf(runner: ExperimentRunner, name: str, target: str) -> Leaf:
    """RUNNING for one acquisition tick, then SUCCESS/FAILURE on detectability."""
    state = {"acquiring": False}

    def behavior(ctx) -> Status:
        if not state["acquiring"]:
            state["acquiring"] = True
            runner.world.advance_time(0.2)
            return Status.RUNNING
        state["acquiring"] = False
        if target == "plate":
            obs = observe(runner.world, runner.config.cam, runner.config.noise,
                          runner.rng, runner.tip_bias_px)
            return Status.SUCCESS if obs.corners is not None else Status.FAILURE
        return Status.SUCCESS  # tags are simulated as always decodable

    return Leaf(name, behavior)


def _servo_to_tag_leaf(runner: ExperimentRunner, name: str, tag_id: int) -> Leaf:
    """Per-tick proportional step toward centering the (mis-calibrated) tag."""

    def behavior(ctx) -> Status:
        world, cfg = runner.world, runner.config
        target = runner.perceived_tag_xy(tag_id)
        scale = cfg.cam.scale_px_per_m
        err_px = np.array(
            [scale * (world.ee_pose[1] - target[1]), scale * (world.ee_pose[0] - target[0])]
        ) * -1.0
        if np.linalg.norm(err_px) < cfg.servo.img_thresh_px:
            return Status.SUCCESS
        u = cfg.servo.k_p * err_px
        u = np.array([u[1], u[0], 0.0])
        norm = np.linalg.norm(u)
        if norm > cfg.servo.u_lim:
            u *= cfg.servo.u_lim / norm
        world.ee_pose = world.ee_pose + u
        world.advance_time(1.0 / cfg.servo.rate_hz)
        return Status.RUNNING

    return Leaf(name, behavior)


def _insert_well_leaf(runner: ExperimentRunner, name: str, queue: str,
                      on_success: Callable[[int], Status]) -> Leaf:
    """Servo + insertion (with its internal retry cap) on the queue's front well."""

    def behavior(ctx) -> Status:
        well_index = ctx.params.peek(queue)
        if well_index is None:
            return Status.FAILURE
        ctx.params.set("desired_well", well_index)
        result = attempt_insertion(
            runner.world, runner.config.cam, runner.config.noise, well_index,
            runner.config.servo, runner.config.insertion, runner.rng,
            tip_bias_px=runner.tip_bias_px,
        )
        runner.log.add(
            runner.t_hr, "insertion", well=well_index, attempts=result.attempts,
            success=result.success, perfect=result.perfect,
            miss_mm=round(result.miss_mm, 4),
        )
        if not result.success:
            return Status.FAILURE  # well stays queued; branch re-perceives next tick
        return on_success(well_index)

    return Leaf(name, behavior)


def _pipette_event(runner: ExperimentRunner, event: str, **payload) -> None:
    runner.log.add(
        runner.t_hr, event, tip_status=int(runner.world.pipette.tip),
        contents_mL=round(runner.world.pipette.contents_mL, 6), **payload
    )


# --- sub-trees --------------------------------------------------------------


def _grasp_pipette_tree(runner: ExperimentRunner) -> Node:
    def do_grasp():
        runner.regrasp()
        runner.world.holding_pipette = True

    return Selector("grasp_pipette", [
        check_experiment_state("already_holding", "holding_pipette", "eq", True),
        Sequence("do_grasp_pipette", [
            _perceive_leaf(runner, "perceive_stand_tag", "tag"),
            _servo_to_tag_leaf(runner, "servo_to_stand", 0),
            _timed_leaf(runner, "grasp_motion", 5.0, do_grasp),
            set_experiment_state("set_holding", "holding_pipette", "set", True),
        ]),
    ])


def _attach_tip_tree(runner: ExperimentRunner) -> Node:
    state = {"failures": 0}

    def do_attach(ctx) -> Status:
        world, cfg = runner.world, runner.config
        socket = world.tag_poses[1]
        refilled = world.tip_rack_count <= 0
        offset_m = world.tip_world_xy() - np.array([socket.x_m, socket.y_m])
        try:
            result = attach_tip(
                world, offset_m * 1000.0, cfg.spiral, cfg.contact, runner.rng,
                allow_refill=cfg.allow_rack_refill,
            )
        except AttachFailed:
            runner.log.add(runner.t_hr, "attach_failed")
            state["failures"] += 1
            if state["failures"] >= 3:
                raise AbortedOnUnrecoverable("spiral search cannot reach the tip socket")
            # re-seat the gripper slightly and let the tree retry next tick
            runner.world.ee_pose = runner.world.ee_pose + np.append(
                runner.rng.uniform(-5e-4, 5e-4, size=2), 0.0
            )
            return Status.FAILURE
        state["failures"] = 0
        if refilled:
            runner.log.add(runner.t_hr, "rack_refilled")
        runner.redetect_tip()
        runner.log.add(
            runner.t_hr, "tip_attached", search_s=result.elapsed_s,
            waypoints=int(result.waypoint_index), rack_count=world.tip_rack_count,
        )
        runner.params.set("tip_rack_count", world.tip_rack_count)
        return Status.SUCCESS

    return Selector("attach_pipette_tip", [
        check_experiment_state("tip_already_attached", "pipette_status", "ge", 1),
        Sequence("do_attach_tip", [
            _perceive_leaf(runner, "perceive_rack_tag", "tag"),
            _servo_to_tag_leaf(runner, "servo_to_rack", 1),
            Leaf("spiral_attach", do_attach),
            set_experiment_state("set_tip_clean", "pipette_status", "set",
                                 int(TipStatus.CLEAN_EMPTY)),
        ]),
    ])


def _fill_pipette_media_tree(runner: ExperimentRunner) -> Node:
    def do_inhale_media():
        world = runner.world
        needed = MEDIA_FILL_ML * len(runner.params.get("needs_media")) + MEDIA_FILL_ML
        needed = min(needed, 9.5)
        world.pipette = replace(world.pipette, tip=TipStatus.MEDIA)
        world.pipette = aspirate(world.pipette, needed, runner.config.dispense_noise,
                                 runner.rng)
        drawn = world.pipette.contents_mL
        world.media_tube_mL -= drawn
        runner._media_drawn_total += drawn
        _pipette_event(runner, "aspirate", kind="media", volume_mL=round(drawn, 6))

    return Selector("fill_pipette_media", [
        check_experiment_state("pipette_has_media", "pipette_status", "eq",
                               int(TipStatus.MEDIA)),
        check_experiment_state("no_media_needed", "needs_media", "empty"),
        Sequence("do_fill_pipette", [
            _perceive_leaf(runner, "perceive_media_tag", "tag"),
            _servo_to_tag_leaf(runner, "servo_to_media", 2),
            _timed_leaf(runner, "lower_into_tube", runner.config.action_s),
            _timed_leaf(runner, "inhale_media", runner.config.action_s, do_inhale_media),
            _timed_leaf(runner, "air_removal", runner.config.action_s),
            _timed_leaf(runner, "raise_from_tube", runner.config.action_s),
            set_experiment_state("set_tip_media", "pipette_status", "set",
                                 int(TipStatus.MEDIA)),
        ]),
    ])


def _fill_wells_media_tree(runner: ExperimentRunner) -> Node:
    def after_insert(well_index: int) -> Status:
        world = runner.world
        world.pipette, delivered = dispense(world.pipette, MEDIA_FILL_ML,
                                            runner.config.dispense_noise, runner.rng)
        well = world.wells[well_index]
        world.wells[well_index] = replace(
            well, status=WellStatus.MEDIA_ONLY, volume_mL=well.volume_mL + delivered,
        )
        _pipette_event(runner, "dispense", kind="media", well=well_index,
                       volume_mL=round(delivered, 6))
        world.advance_time(runner.config.action_s)
        runner.params.pop("needs_media")
        return Status.SUCCESS

    return Selector("fill_wells_media", [
        check_experiment_state("no_wells_need_media", "needs_media", "empty"),
        Sequence("do_fill_wells_media", [
            check_experiment_state("pipette_filled_media", "pipette_status", "eq",
                                   int(TipStatus.MEDIA)),
            _perceive_leaf(runner, "perceive_plate_media", "plate"),
            _insert_well_leaf(runner, "dispense_media_into_well", "needs_media",
                              after_insert),
            # fails while wells remain, looping the branch on the next tick
            check_experiment_state("media_queue_drained", "needs_media", "empty"),
        ]),
    ])


def _inhale_yeast_tree(runner: ExperimentRunner) -> Node:
    def after_insert(parent: int) -> Status:
        world = runner.world
        cfg = runner.config
        well = world.wells[parent]

        # purge any leftover media before touching the culture
        if world.pipette.contents_mL > 0:
            _pipette_event(runner, "purge", volume_mL=round(world.pipette.contents_mL, 6))
            world.pipette = replace(world.pipette, contents_mL=0.0)

        for _ in range(RESUSPEND_CYCLES):
            world.pipette = aspirate(world.pipette, RESUSPEND_ML)
            world.pipette, _ = dispense(world.pipette, world.pipette.contents_mL)
        world.advance_time(RESUSPEND_CYCLES * 1.0)
        _pipette_event(runner, "resuspend", well=parent, cycles=RESUSPEND_CYCLES)

        world.pipette = replace(world.pipette, tip=TipStatus.YEAST)
        world.pipette = aspirate(world.pipette, well.volume_mL, cfg.dispense_noise,
                                 runner.rng)
        _pipette_event(runner, "aspirate", kind="yeast", well=parent,
                       volume_mL=round(world.pipette.contents_mL, 6))
        runner.inhaled_density = well.cells_per_mL
        runner.inhaled_group = well.group
        world.wells[parent] = WellContents(status=WellStatus.VOIDED, group=well.group)
        runner.log.add(runner.t_hr, "well_voided", well=parent)
        world.advance_time(cfg.action_s)

        runner.params.pop("needs_split")
        for daughter in daughters_of(parent):
            runner.params.push("needs_yeast", daughter)
        return Status.SUCCESS

    return Selector("inhale_yeast", [
        check_experiment_state("no_split_pending", "needs_split", "empty"),
        check_experiment_state("media_still_pending", "needs_media", "nonempty"),
        check_experiment_state("yeast_queue_busy", "needs_yeast", "nonempty"),
        check_experiment_state("pipette_has_yeast", "pipette_status", "eq",
                               int(TipStatus.YEAST)),
        check_experiment_state("pipette_contaminated", "pipette_status", "eq",
                               int(TipStatus.CONTAMINATED)),
        Sequence("do_inhale_yeast", [
            set_experiment_state("actuator_full_exhale", "pipette_actuator_pos",
                                 "set", 1850),
            _perceive_leaf(runner, "perceive_plate_yeast", "plate"),
            _insert_well_leaf(runner, "inhale_from_parent", "needs_split", after_insert),
            set_experiment_state("set_tip_yeast", "pipette_status", "set",
                                 int(TipStatus.YEAST)),
        ]),
    ])


def _fill_wells_yeast_tree(runner: ExperimentRunner) -> Node:
    def after_insert(daughter: int) -> Status:
        world = runner.world
        world.pipette, delivered = dispense(world.pipette, YEAST_SPLIT_ML,
                                            runner.config.dispense_noise, runner.rng)
        well = world.wells[daughter]
        total = well.volume_mL + delivered
        cells = runner.inhaled_density * delivered / total if total > 0 else 0.0
        world.wells[daughter] = replace(
            well, status=WellStatus.SEEDED, volume_mL=total, cells_per_mL=cells,
            group=runner.inhaled_group, grow_age_hr=0.0,
        )
        _pipette_event(runner, "dispense", kind="yeast", well=daughter,
                       volume_mL=round(delivered, 6))
        world.advance_time(runner.config.action_s)
        runner.params.pop("needs_yeast")
        if not runner.params.get("needs_yeast"):
            runner.params.set("pipette_status", int(TipStatus.CONTAMINATED))
            world.pipette = replace(world.pipette, tip=TipStatus.CONTAMINATED)
        return Status.SUCCESS

    return Selector("fill_wells_yeast", [
        check_experiment_state("no_wells_need_yeast", "needs_yeast", "empty"),
        Sequence("do_fill_wells_yeast", [
            check_experiment_state("pipette_filled_yeast", "pipette_status", "ge",
                                   int(TipStatus.YEAST)),
            _perceive_leaf(runner, "perceive_plate_yeast_fill", "plate"),
            _insert_well_leaf(runner, "dispense_yeast_into_well", "needs_yeast",
                              after_insert),
            check_experiment_state("yeast_queue_drained", "needs_yeast", "empty"),
        ]),
    ])


def _remove_tip_tree(runner: ExperimentRunner) -> Node:
    def do_remove():
        discarded = runner.world.pipette.contents_mL
        remove_tip(runner.world)
        runner.log.add(runner.t_hr, "tip_removed", waste_count=runner.world.waste_count,
                       discarded_mL=round(discarded, 6))

    return Selector("remove_pipette_tip", [
        Inverter("not_contaminated", check_experiment_state(
            "is_contaminated", "pipette_status", "eq", int(TipStatus.CONTAMINATED))),
        Sequence("do_remove_tip", [
            _perceive_leaf(runner, "perceive_remover_tag", "tag"),
            _servo_to_tag_leaf(runner, "servo_to_remover", 3),
            _timed_leaf(runner, "hook_and_lift", runner.config.action_s, do_remove),
            set_experiment_state("set_no_tip", "pipette_status", "set",
                                 int(TipStatus.NO_TIP)),
        ]),
    ])


def build_yeast_tree(runner: ExperimentRunner) -> Node:
    """Assemble the full experiment tree: shaker cadence, monitoring, split tasks."""
    monitor = Selector("growth_monitoring", [
        Sequence("do_monitor", [
            _monitor_due_leaf(runner),
            set_experiment_state("stop_shaker", "shaker_active", "set", False),
            _monitor_perceive_leaf(runner),
            _record_growth_leaf(runner),
            _resume_shaker_leaf(runner),
        ]),
        Leaf("monitor_not_due", lambda ctx: Status.SUCCESS),
    ])

    split_decision = Selector("split_decision", [
        check_experiment_state("split_queue_nonempty", "needs_split", "nonempty"),
        check_experiment_state("media_queue_nonempty", "needs_media", "nonempty"),
        check_experiment_state("yeast_queue_nonempty", "needs_yeast", "nonempty"),
        check_experiment_state("tip_contaminated", "pipette_status", "eq",
                               int(TipStatus.CONTAMINATED)),
    ])

    return Sequence("yeast_experiment", [
        _ensure_shaker_leaf(runner),
        monitor,
        split_decision,
        _grasp_pipette_tree(runner),
        _attach_tip_tree(runner),
        _fill_pipette_media_tree(runner),
        _fill_wells_media_tree(runner),
        _inhale_yeast_tree(runner),
        _fill_wells_yeast_tree(runner),
        _remove_tip_tree(runner),
    ])


def run_experiment(config: ExperimentConfig | None = None) -> tuple[ExperimentRunner, ExperimentLog]:
    """Run the full seeded experiment; returns the runner and its event log."""
    runner = ExperimentRunner(config)
    log = runner.run()
    return runner, log
