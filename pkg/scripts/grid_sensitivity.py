"""Mean nonzero count and SNR as the mu grid changes, for one scenario.

    python3 scripts/grid_sensitivity.py --scenario c --reps 60
"""

import argparse

from smoothlasso.selection import DEFAULT_MU_GRID
from smoothlasso.simbench import BENCH_METHODS, run_benchmark

GRIDS = {
    "default": DEFAULT_MU_GRID,
    "no-zero": tuple(m for m in DEFAULT_MU_GRID if m > 0),
    "moderate": (0.5, 1.0, 2.0),
    "fine": (0.0, 0.001, 0.01, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--scenario", default="c")
    ap.add_argument("--reps", type=int, default=60)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    print(f"scenario {args.scenario}, {args.reps} replications")
    print(f"{'grid':<10}" + "".join(f"{m.value:>16}" for m in BENCH_METHODS))
    for name, grid in GRIDS.items():
        s = run_benchmark([args.scenario], BENCH_METHODS, R=args.reps, mu_grid=grid,
                          master_seed=args.seed, jobs=args.jobs)
        cells = [f"{s.get(args.scenario, m).nonzero_mean:6.2f}/{s.get(args.scenario, m).snr_mean:6.2f}"
                 for m in BENCH_METHODS]
        print(f"{name:<10}" + "".join(f"{c:>16}" for c in cells))
    print("cells: mean nonzero / mean SNR")


if __name__ == "__main__":
    main()
