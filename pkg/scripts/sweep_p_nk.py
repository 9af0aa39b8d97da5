"""Attributed variance ratio as a function of Chebyshev degree and Ritz count.

    python scripts/sweep_p_nk.py --p 5,10,20,40,70 --nk 4,8,12
"""

import argparse

from ritzid import EstimatorConfig
from ritzid.cli import bench_rows
from ritzid.datagen import LowRankSpec, make_low_rank


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", default="5,10,20,40,70")
    ap.add_argument("--nk", default="4,8,12")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    ps = [int(x) for x in args.p.split(",")]
    nks = [int(x) for x in args.nk.split(",")]

    X = make_low_rank(LowRankSpec())
    print(f"{'p':>4} {'n_k':>4} {'ratio':>8} {'d':>8}  stop")
    for row in bench_rows(X, EstimatorConfig(seed=args.seed), [0.2], [0.2], ps, nks, 1):
        print(f"{row['p']:4d} {row['nk']:4d} {row['variance_ratio']:8.4f} "
              f"{row['d_fractional']:8.3f}  {row['stop_reason']}")


if __name__ == "__main__":
    main()
