"""Run the three reproducible benchmarks and print their reports.

Covers well insertion accuracy over randomized plate poses, dispense accuracy
against the ISO 8655-6 limits, and spiral-search tip exchange timing.
"""

from culturesim.benchmarks import (
    gravimetric_benchmark,
    insertion_benchmark,
    tip_exchange_benchmark,
)
from culturesim.pipette import iso_limits


def main():
    print("insertion benchmark (6 plates x 96 wells, default noise):")
    report = insertion_benchmark(seed=0)
    print(f"  success {report.success_rate:.3f}  perfect {report.perfect_rate:.3f}  "
          f"retries {report.retries}  fails {report.fails}")

    print("gravimetric test (n = 10 per target):")
    for target in (1.0, 5.0, 10.0):
        r = gravimetric_benchmark(target, seed=0)
        eta_lim, cv_lim = iso_limits(target)
        print(f"  {target:5.1f} mL  v_bar {r.v_bar:8.4f}  eta_s {r.eta_s_pct:+.3f}% "
              f"(limit {eta_lim}%)  C_v {r.c_v_pct:.3f}% (limit {cv_lim}%)  "
              f"{'pass' if r.passed else 'FAIL'}")

    print("tip exchange (36 cycles over 3 grasp locations):")
    r = tip_exchange_benchmark(seed=0)
    print(f"  attach {r.attach_successes}/{r.cycles}  "
          f"search {r.mean_search_s:.2f} +/- {r.sd_search_s:.2f} s")


if __name__ == "__main__":
    main()
