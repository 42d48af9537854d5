"""Compare the published min-gap law with simulation and the exact law.

Prints, for a few N, the published mean, the exact mean 1/N^2 and the
Monte Carlo mean of the smallest spacing, then the Kolmogorov distance of
the simulated min gaps from each CDF.
"""

import argparse

import numpy as np

from gapstat import dist
from gapstat.datagen import gen_uniform
from gapstat.gaps import min_gap_rabin


def ks(sample, cdf):
    x = np.sort(sample)
    f = np.array([cdf(v) for v in x])
    n = x.size
    return max((np.arange(1, n + 1) / n - f).max(), (f - np.arange(n) / n).max())


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=5000)
    ap.add_argument("--sizes", default="10,100,1000")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'N':>6} {'published mean':>15} {'exact mean':>12} {'MC mean':>12} {'KS published':>13} {'KS exact':>9}")
    for n_gaps in map(int, args.sizes.split(",")):
        gaps = np.array([min_gap_rabin(gen_uniform(n_gaps - 1, args.seed + t)).gap for t in range(args.trials)])
        print(f"{n_gaps:>6} {dist.expected_min_gap_paper(n_gaps):>15.6g} {dist.expected_min_gap_exact(n_gaps):>12.6g} "
              f"{gaps.mean():>12.6g} {ks(gaps, lambda x: dist.min_gap_cdf_paper(x, n_gaps)):>13.4f} "
              f"{ks(gaps, lambda x: dist.min_gap_cdf_exact(x, n_gaps)):>9.4f}")


if __name__ == "__main__":
    main()
