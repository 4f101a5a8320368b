"""Command-line entry points for runs and benchmarks.

Subcommands: ``run`` (full experiment, optionally served over WebSocket),
``insertion-bench``, ``gravimetric``, ``tip-exchange-bench``, and
``growth-sim`` (monitoring-only growth curves, no robot actions).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from .benchmarks import (
    gravimetric_benchmark,
    insertion_benchmark,
    tip_exchange_benchmark,
)
from .config import RunConfig, load_config
from .errors import ConfigError
from .experiment import MONITOR_PERIOD_S, ExperimentLog, ExperimentRunner
from .growth import brightness_of, rolling_average
from .world import WorldState

__all__ = ["main", "build_parser", "growth_only_log"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="culturesim",
        description="robotic cell-culture workstation simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("run", "run the full seeded experiment"),
        ("insertion-bench", "well-insertion accuracy benchmark"),
        ("gravimetric", "dispense accuracy versus ISO limits"),
        ("tip-exchange-bench", "spiral-search tip attach/remove benchmark"),
        ("growth-sim", "growth and brightness curves with no robot actions"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", type=Path, default=None, metavar="PATH")
        cmd.add_argument("--seed", type=int, default=None, metavar="N")
        cmd.add_argument("--speedup", type=float, default=None, metavar="X")
        cmd.add_argument("--serve", default=None, metavar="ADDR",
                         help="host:port for the WebSocket state stream")
        cmd.add_argument("--out", type=Path, default=None, metavar="DIR")
    return parser


def _load(args: argparse.Namespace) -> RunConfig:
    overrides = {
        "seed": args.seed,
        "speedup": args.speedup,
        "listen_addr": args.serve,
        "out_dir": args.out,
    }
    return load_config(args.config, overrides)


def _write_outputs(out_dir: Path, log: ExperimentLog) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    log.write_events_jsonl(out_dir / "events.jsonl")
    log.write_growth_csv(out_dir / "growth.csv")


def _serve(config: RunConfig) -> int:
    import uvicorn

    from .service import SimController, make_app

    host, _, port = config.listen_addr.rpartition(":")
    controller = SimController(config.experiment, speedup=config.speedup)
    controller.start()
    try:
        uvicorn.run(make_app(controller), host=host or "127.0.0.1", port=int(port))
    finally:
        controller.stop()
        _write_outputs(config.out_dir, controller.runner.log)
    return 0


def cmd_run(config: RunConfig) -> int:
    if config.listen_addr:
        return _serve(config)
    runner = ExperimentRunner(config.experiment)
    log = runner.run()
    _write_outputs(config.out_dir, log)
    done = runner.experiment_complete()
    print(f"groups split: {len(runner.groups_split)}/4  "
          f"sim time: {runner.t_hr:.2f} h  complete: {done}")
    return 0 if done else 1


def cmd_insertion_bench(config: RunConfig) -> int:
    report = insertion_benchmark(config.experiment, seed=config.seed)
    print(f"insertions: {report.attempts}  success rate: {report.success_rate:.4f}  "
          f"perfect rate: {report.perfect_rate:.4f}  retries: {report.retries}  "
          f"fails: {report.fails}")
    _dump_report(config.out_dir, "insertion_bench.json", report)
    return 0 if report.fails == 0 else 1


def cmd_gravimetric(config: RunConfig) -> int:
    code = 0
    for target in (1.0, 5.0, 10.0):
        report = gravimetric_benchmark(
            target, noise=config.experiment.dispense_noise, seed=config.seed
        )
        verdict = "pass" if report.passed else "FAIL"
        print(f"{target:7.3f} mL  v_bar={report.v_bar:.4f}  "
              f"eta_s={report.eta_s_pct:+.3f}% (|.|<={report.eta_limit_pct}%)  "
              f"C_v={report.c_v_pct:.3f}% (<={report.cv_limit_pct}%)  {verdict}")
        if not report.passed:
            code = 1
    return code


def cmd_tip_exchange_bench(config: RunConfig) -> int:
    report = tip_exchange_benchmark(
        spiral=config.experiment.spiral, contact=config.experiment.contact,
        seed=config.seed,
    )
    print(f"cycles: {report.cycles}  attach: {report.attach_successes}  "
          f"remove: {report.remove_successes}  "
          f"search: {report.mean_search_s:.2f} +/- {report.sd_search_s:.2f} s")
    _dump_report(config.out_dir, "tip_exchange_bench.json", report)
    return 0 if report.attach_successes == report.cycles else 1


def growth_only_log(config: RunConfig) -> ExperimentLog:
    """Shaker always on, imaging every five minutes, no splits or robot motion."""
    rng = np.random.default_rng(config.seed)
    world = WorldState()
    world.shaker_active = True
    world.growth = config.experiment.growth
    growth = config.experiment
    log = ExperimentLog()
    history: dict[str, list[float]] = {}

    n_points = int(config.max_hours * 3600.0 / MONITOR_PERIOD_S)
    for i in range(n_points):
        t_hr = i * MONITOR_PERIOD_S / 3600.0
        raw_by_group: dict[str, list[float]] = {}
        rows = []
        for idx, well in enumerate(world.wells):
            value = brightness_of(well, growth.brightness, world.growth, rng)
            group = well.group.value if well.group is not None else "none"
            rows.append(dict(time_hr=t_hr, well=idx, group=group, replicate=idx % 12,
                             brightness_raw=value, brightness_smoothed=value))
            raw_by_group.setdefault(group, []).append(value)
        for group, values in raw_by_group.items():
            history.setdefault(group, []).append(float(np.mean(values)))
        smoothed_now = {g: float(rolling_average(v, 5)[-1]) for g, v in history.items()}
        for row in rows:
            row["brightness_smoothed"] = smoothed_now[row["group"]]
        log.growth_rows.extend(rows)
        world.advance_time(MONITOR_PERIOD_S)
    log.add(config.max_hours, "growth_sim_done", points=n_points)
    return log


def cmd_growth_sim(config: RunConfig) -> int:
    log = growth_only_log(config)
    _write_outputs(config.out_dir, log)
    print(f"wrote {len(log.growth_rows)} growth rows to {config.out_dir / 'growth.csv'}")
    return 0


def _dump_report(out_dir: Path, name: str, report) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / name, "w") as fh:
        json.dump(dataclasses.asdict(report), fh, indent=2, sort_keys=True)
        fh.write("\n")


_COMMANDS = {
    "run": cmd_run,
    "insertion-bench": cmd_insertion_bench,
    "gravimetric": cmd_gravimetric,
    "tip-exchange-bench": cmd_tip_exchange_bench,
    "growth-sim": cmd_growth_sim,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _load(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return _COMMANDS[args.command](config)


if __name__ == "__main__":
    raise SystemExit(main())
