"""Track how the Ritz values approach the covariance spectrum as CGLS steps grow.

    python scripts/ritz_convergence.py --max-k 10
"""

import argparse

from ritzid import center
from ritzid.datagen import LowRankSpec, make_low_rank
from ritzid.oracle import spectrum_of
from ritzid.ritz import ritz_values


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-k", type=int, default=10)
    ap.add_argument("--n", type=int, default=5000)
    ap.add_argument("--D", type=int, default=500)
    args = ap.parse_args()

    op = center(make_low_rank(LowRankSpec(args.n, args.D)))
    ev = spectrum_of(op).eigenvalues
    print(f"lambda_max = {ev[0]:.6e}, lambda_min = {ev[-1]:.6e}")
    for k in range(1, args.max_k + 1):
        rs = ritz_values(op, k)
        rel = abs(rs.raw[0] - ev[0]) / ev[0]
        vals = " ".join(f"{v:.3e}" for v in rs.raw)
        print(f"k={k:2d}  top rel.err {rel:.2e}  | {vals}")


if __name__ == "__main__":
    main()
