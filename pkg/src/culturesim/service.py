"""WebSocket state-streaming service for the live control panel.

The simulation loop runs in its own thread and publishes immutable snapshots;
clients receive ``{"type": "snapshot", ...}`` frames at a minimum wall rate
plus ``{"type": "event", ...}`` frames for new log entries.  Clients may send
``set_param`` and ``command`` messages, which are queued and applied between
ticks; unknown message types get an ``error`` reply.
"""

from __future__ import annotations

import asyncio
import threading
import time

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .btree import Status
from .errors import CultureSimError
from .experiment import ExperimentConfig, ExperimentRunner
from .growth import brightness_of

__all__ = ["SimController", "build_snapshot", "make_app"]


def build_snapshot(runner: ExperimentRunner) -> dict:
    """Deterministic, JSON-ready view of the current world and tree state."""
    world = runner.world
    wells = []
    for well in world.wells:
        wells.append(
            {
                "status": well.status.value,
                "group": well.group.value if well.group else None,
                "density_frac": round(
                    min(well.cells_per_mL / world.growth.k_cells_per_mL, 1.0), 6
                ),
                "brightness": round(
                    brightness_of(well, runner.config.brightness, world.growth), 3
                ),
            }
        )
    return {
        "type": "snapshot",
        "t_sim_hr": round(runner.t_hr, 6),
        "params": runner.params.dump(),
        "wells": wells,
        "robot": [round(float(v), 6) for v in world.ee_pose],
        "tree": [{"name": n, "status": s.value} for n, s in runner.last_trace],
        "recent_events": runner.log.events[-20:],
        "paused": runner.paused,
    }


class SimController:
    """Runs one experiment in a background thread and exposes snapshots/commands."""

    def __init__(self, config: ExperimentConfig | None = None, speedup: float | None = None):
        self.runner = ExperimentRunner(config)
        self.speedup = speedup
        self._lock = threading.Lock()
        self._snapshot = build_snapshot(self.runner)
        self._event_cursor = 0
        self._thread: threading.Thread | None = None
        self._stop = threading.Event()
        self.runner.snapshot_hook = self._publish

    def _publish(self, runner: ExperimentRunner) -> None:
        with self._lock:
            self._snapshot = build_snapshot(runner)

    def snapshot(self) -> dict:
        with self._lock:
            return self._snapshot

    def drain_events(self) -> list[dict]:
        events = self.runner.log.events
        new = events[self._event_cursor:]
        self._event_cursor = len(events)
        return list(new)

    def submit(self, command: dict) -> None:
        self.runner.submit_command(command)

    def set_param(self, name: str, value) -> None:
        # writes funnel through the command queue, applied between ticks
        self.runner.submit_command({"name": "set_param", "param": name, "value": value})

    def start(self) -> None:
        if self._thread is not None:
            return
        self._thread = threading.Thread(target=self._loop, daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=5.0)

    def step_once(self) -> None:
        """Advance one tick synchronously (used by headless protocol tests)."""
        self.runner.step()

    def _loop(self) -> None:
        max_s = self.runner.config.max_hours * 3600.0
        while not self._stop.is_set() and self.runner.world.clock_s < max_s:
            if self.runner.experiment_complete():
                self.runner.log.add(self.runner.t_hr, "complete",
                                    groups=len(self.runner.groups_split))
                break
            if self.runner.paused:
                self.runner._apply_commands()
                self._publish(self.runner)
                time.sleep(0.05)
                continue
            before = self.runner.world.clock_s
            self.runner.step()
            if self.speedup:
                sim_dt = self.runner.world.clock_s - before
                time.sleep(min(sim_dt / self.speedup, 1.0))


def make_app(controller: SimController) -> FastAPI:
    app = FastAPI(title="culture workstation simulator")

    @app.get("/healthz")
    def healthz():
        return {"ok": True}

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket):
        await ws.accept()
        await ws.send_json(controller.snapshot())

        async def sender():
            while True:
                for event in controller.drain_events():
                    await ws.send_json({"type": "event", **event})
                await ws.send_json(controller.snapshot())
                await asyncio.sleep(0.1)  # >= 5 Hz wall-time snapshot stream

        send_task = asyncio.create_task(sender())
        try:
            while True:
                msg = await ws.receive_json()
                await _handle_message(ws, controller, msg)
        except WebSocketDisconnect:
            pass
        finally:
            send_task.cancel()

    return app


async def _handle_message(ws: WebSocket, controller: SimController, msg: dict) -> None:
    kind = msg.get("type")
    if kind == "set_param":
        name, value = msg.get("name"), msg.get("value")
        try:
            controller.runner.params.spec(name)  # validate the name eagerly
        except CultureSimError as exc:
            await ws.send_json({"type": "error", "reason": str(exc)})
            return
        controller.set_param(name, value)
    elif kind == "command":
        name = msg.get("name")
        if name not in ("pause", "resume", "force_split"):
            await ws.send_json({"type": "error", "reason": f"unknown command {name}"})
            return
        command = {"name": name}
        if name == "force_split":
            command["group"] = msg.get("group")
        controller.submit(command)
    else:
        await ws.send_json({"type": "error", "reason": f"unknown message type {kind}"})
