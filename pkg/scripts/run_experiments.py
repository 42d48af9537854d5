"""Run the four sensitivity experiments and write one CSV per experiment.

    python scripts/run_experiments.py --out results/ --trials 2000 --parallel 4

``--paper-scale`` switches every experiment to one million trials.
"""

import argparse
import time
from pathlib import Path

from gapstat.harness import DEFAULT_SWEEPS, EXPERIMENTS, PAPER_TRIALS, ExperimentSpec, emit_csv, run_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--n", type=int, default=10_000)
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--parallel", type=int, default=1)
    ap.add_argument("--paper-scale", action="store_true")
    ap.add_argument("--only", choices=EXPERIMENTS, action="append")
    args = ap.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    trials = PAPER_TRIALS if args.paper_scale else args.trials
    for name in args.only or EXPERIMENTS:
        sweep = DEFAULT_SWEEPS[name]
        if name == "regularity_sweep":
            sweep = tuple(k for k in sweep if k <= args.n)  # k strata need k <= n
        spec = ExperimentSpec(name, n=args.n, trials=trials, base_seed=args.seed, sweep=sweep,
                              methods=("chi_square", "max_gap"))
        t0 = time.perf_counter()
        res = run_experiment(spec, parallel=args.parallel)
        path = args.out / f"{name}.csv"
        emit_csv(res.points, spec, path)
        print(f"{name}: {len(res.points)} rows -> {path} ({time.perf_counter() - t0:.1f}s)")
        for pt in res.points:
            print(f"  {pt.sweep_value:<10g} {pt.method:<11} p1={pt.mean_p_one_sided:.4f} "
                  f"p2={pt.mean_p_two_sided:.4f} reject={pt.reject_rate_at_alpha:.3f}")


if __name__ == "__main__":
    main()
