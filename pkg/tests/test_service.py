"""Headless WebSocket protocol conformance for the state-streaming service."""

import numpy as np
from fastapi.testclient import TestClient

from culturesim.experiment import ExperimentConfig
from culturesim.perception import NoiseParams
from culturesim.service import SimController, build_snapshot, make_app


def quiet_config():
    return ExperimentConfig(
        noise=NoiseParams(corner_sigma_px=0.0, occlusion_prob=0.0, tip_bias_px=0.0)
    )


def make_client():
    controller = SimController(quiet_config())
    return controller, TestClient(make_app(controller))


class TestSnapshot:
    def test_shape(self):
        controller = SimController(quiet_config())
        snap = build_snapshot(controller.runner)
        assert snap["type"] == "snapshot"
        assert len(snap["wells"]) == 96
        assert len(snap["robot"]) == 3
        assert "tip_rack_count" in snap["params"]
        assert snap["paused"] is False
        well = snap["wells"][0]
        assert set(well) == {"status", "group", "density_frac", "brightness"}

    def test_json_serializable(self):
        import json

        controller = SimController(quiet_config())
        controller.step_once()
        json.dumps(build_snapshot(controller.runner))

    def test_tree_trace_included_after_tick(self):
        controller = SimController(quiet_config())
        controller.step_once()
        snap = build_snapshot(controller.runner)
        assert snap["tree"]
        assert all(entry["status"] in ("success", "failure", "running")
                   for entry in snap["tree"])


class TestProtocol:
    def test_initial_snapshot_on_connect(self):
        _, client = make_client()
        with client.websocket_connect("/ws") as ws:
            msg = ws.receive_json()
            assert msg["type"] == "snapshot"

    def test_set_param_roundtrip(self):
        controller, client = make_client()
        with client.websocket_connect("/ws") as ws:
            ws.receive_json()
            ws.send_json({"type": "set_param", "name": "shaker_active", "value": False})
            # the write is queued; applied on the next tick
            for _ in range(50):
                controller.step_once()
                if controller.runner.params.get("shaker_active") is False:
                    break
            assert controller.runner.params.get("shaker_active") is False
            assert controller.runner.world.shaker_active is False

    def test_unknown_param_gets_error_reply(self):
        _, client = make_client()
        with client.websocket_connect("/ws") as ws:
            ws.receive_json()
            ws.send_json({"type": "set_param", "name": "bogus", "value": 1})
            msg = ws.receive_json()
            while msg["type"] in ("snapshot", "event"):
                msg = ws.receive_json()
            assert msg["type"] == "error"
            assert "bogus" in msg["reason"]

    def test_unknown_message_type_gets_error(self):
        _, client = make_client()
        with client.websocket_connect("/ws") as ws:
            ws.receive_json()
            ws.send_json({"type": "telemetry"})
            msg = ws.receive_json()
            while msg["type"] in ("snapshot", "event"):
                msg = ws.receive_json()
            assert msg["type"] == "error"

    def test_unknown_command_gets_error(self):
        _, client = make_client()
        with client.websocket_connect("/ws") as ws:
            ws.receive_json()
            ws.send_json({"type": "command", "name": "self_destruct"})
            msg = ws.receive_json()
            while msg["type"] in ("snapshot", "event"):
                msg = ws.receive_json()
            assert msg["type"] == "error"

    def test_pause_and_force_split_commands(self):
        controller, client = make_client()
        with client.websocket_connect("/ws") as ws:
            ws.receive_json()
            ws.send_json({"type": "command", "name": "pause"})
            ws.send_json({"type": "command", "name": "force_split", "group": "blank"})
            from culturesim import Group
            import time
            deadline = time.monotonic() + 5.0
            while time.monotonic() < deadline:
                controller.step_once()
                if controller.runner.paused and Group.BLANK in controller.runner.groups_split:
                    break
                time.sleep(0.01)
            assert controller.runner.paused
            assert Group.BLANK in controller.runner.groups_split

    def test_event_frames_streamed(self):
        controller, client = make_client()
        with client.websocket_connect("/ws") as ws:
            ws.receive_json()
            while not controller.runner.log.events:
                controller.step_once()
            saw_event = False
            for _ in range(200):
                msg = ws.receive_json()
                if msg["type"] == "event":
                    saw_event = True
                    assert "event" in msg and "t_sim_hr" in msg
                    break
            assert saw_event

    def test_healthz(self):
        _, client = make_client()
        assert client.get("/healthz").json() == {"ok": True}
