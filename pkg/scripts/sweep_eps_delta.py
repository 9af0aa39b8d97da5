"""Spread of the estimated ID as a function of the probe accuracy (eps = delta).

Writes a CSV with one row per run and prints median / IQR per setting.

    python scripts/sweep_eps_delta.py --eps 0.05,0.1,0.2,0.3 --repeats 10 --out sweep.csv
"""

import argparse
import csv
from collections import defaultdict

import numpy as np

from ritzid import EstimatorConfig
from ritzid.cli import BENCH_COLUMNS, bench_rows
from ritzid.datagen import LowRankSpec, make_low_rank


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--eps", default="0.05,0.1,0.2,0.3")
    ap.add_argument("--repeats", type=int, default=10)
    ap.add_argument("--out", default="sweep_eps_delta.csv")
    args = ap.parse_args()
    eps = [float(x) for x in args.eps.split(",")]

    X = make_low_rank(LowRankSpec())
    by_eps = defaultdict(list)
    with open(args.out, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=BENCH_COLUMNS)
        w.writeheader()
        for e in eps:
            # eps and delta move together
            for row in bench_rows(X, EstimatorConfig(), [e], [e], [20], [8], args.repeats):
                w.writerow(row)
                by_eps[e].append(row["d_fractional"])
    for e, ds in by_eps.items():
        q1, med, q3 = np.percentile(ds, [25, 50, 75])
        print(f"eps=delta={e:<5}  median {med:7.3f}  IQR {q3 - q1:6.3f}")


if __name__ == "__main__":
    main()
