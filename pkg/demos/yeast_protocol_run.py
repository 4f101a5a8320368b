"""Full seeded yeast experiment: monitoring, saturation detection, splits.

Runs the behavior-tree protocol end to end and prints the milestone events:
imaging cadence, saturation per group, the split work queues draining, and the
final plate layout.  Writes events.jsonl and growth.csv next to this script.
"""

from collections import Counter
from pathlib import Path

from culturesim import run_experiment


def main():
    runner, log = run_experiment()

    print(f"simulated {runner.t_hr:.2f} h, {len(log.events)} events")
    for ev in log.events:
        if ev["event"] in ("saturation", "force_split", "rack_refilled", "complete"):
            extra = {k: v for k, v in ev.items() if k not in ("event", "t_sim_hr")}
            print(f"  {ev['t_sim_hr']:7.3f} h  {ev['event']:12s} {extra}")

    statuses = Counter(w.status.value for w in runner.world.wells)
    print("final plate:", dict(statuses))

    out = Path(__file__).parent
    log.write_events_jsonl(out / "events.jsonl")
    log.write_growth_csv(out / "growth.csv")
    print(f"wrote {out / 'events.jsonl'} and {out / 'growth.csv'}")


if __name__ == "__main__":
    main()
