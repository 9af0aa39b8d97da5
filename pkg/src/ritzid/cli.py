"""Command line: ``ritzid estimate | oracle | generate | bench``.

Exit codes: 0 success, 2 target variance never reached
(``intervals_exhausted``), 1 data/config errors, 64 bad usage.
"""

import argparse
import csv
import io
import sys
import time
import warnings
from pathlib import Path

from . import dataio, report
from ._parallel import resolve_threads
from .config import FINALIZE_MODES, SUMMATION_MODES, EstimatorConfig
from .datagen import LowRankSpec, make_affine, make_low_rank, make_sphere
from .errors import RitzIdError
from .estimator import EXHAUSTED, estimate_id, estimate_id_clustered
from .linop import center
from .oracle import MAX_DENSE_DIM, pca_id_ratio, pca_id_threshold, spectrum_of
from .probes import budget

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_EXHAUSTED = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text):
    return [float(x) for x in text.split(",") if x.strip()]


def _ints(text):
    return [int(x) for x in text.split(",") if x.strip()]


def _add_estimator_flags(p):
    d = EstimatorConfig()
    p.add_argument("--tv", type=float, default=d.t_v, help="target variance ratio")
    p.add_argument("--ar", type=float, default=d.a_r, help="acceptable range around --tv")
    p.add_argument("--p", type=int, default=d.p, help="Chebyshev degree")
    p.add_argument("--nk", type=int, default=d.n_k, help="CGLS steps (Ritz values)")
    p.add_argument("--eps", type=float, default=d.epsilon)
    p.add_argument("--delta", type=float, default=d.delta)
    p.add_argument("--c1", type=float, default=d.c1, help="lambda_max estimate = c1 * mu_1")
    p.add_argument("--c2", type=float, default=d.c2, help="top interval is [mu_1, c2 * mu_1]")
    p.add_argument("--at", choices=SUMMATION_MODES, default=d.a_t)
    p.add_argument("--ft", choices=FINALIZE_MODES, default=d.f_t)
    p.add_argument("--clusters", type=int, default=d.clusters)
    p.add_argument("--refine-depth", type=int, default=d.refine_max_depth)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: $RITZID_THREADS or all cores)")
    p.add_argument("--format", choices=("auto", "csv", "bin"), default="auto",
                   help="input format (default: by extension)")


def _config(args, **over) -> EstimatorConfig:
    cfg = EstimatorConfig(p=args.p, n_k=args.nk, epsilon=args.eps, delta=args.delta,
                          t_v=args.tv, a_r=args.ar, c1=args.c1, c2=args.c2, a_t=args.at,
                          f_t=args.ft, seed=args.seed, clusters=args.clusters,
                          refine_max_depth=args.refine_depth)
    return cfg.replace(**over).validate() if over else cfg.validate()


def _emit(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _run(X, cfg, threads):
    if cfg.clusters:
        return estimate_id_clustered(X, cfg, threads)
    return estimate_id(center(X), cfg, threads)


def cmd_estimate(args) -> int:
    X = dataio.load(args.input, args.format)
    cfg = _config(args)
    threads = resolve_threads(args.threads)
    t0 = time.perf_counter()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        rep = _run(X, cfg, threads)
    wall = (time.perf_counter() - t0) * 1e3
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    oracle = None
    if args.exact:
        spec = spectrum_of(center(X))
        oracle = {"trace": spec.trace, "pca_id": pca_id_threshold(spec, cfg.t_v),
                  "theta": cfg.t_v}
    doc = report.build_report(
        rep, cfg.to_dict(),
        {"path": str(args.input), "n_samples": int(X.shape[0]), "n_features": int(X.shape[1])},
        oracle, wall)
    _emit(report.dumps(doc), args.out)
    return EXIT_EXHAUSTED if rep.stop_reason == EXHAUSTED else EXIT_OK


def cmd_oracle(args) -> int:
    X = dataio.load(args.input, args.format)
    spec = spectrum_of(center(X), args.method)
    doc = {
        "format": "ritzid-oracle",
        "n_samples": int(X.shape[0]),
        "n_features": int(X.shape[1]),
        "trace": spec.trace,
        "theta": args.theta,
        "pca_id": pca_id_threshold(spec, args.theta),
        "eigenvalues": [float(v) for v in spec.eigenvalues],
        "cumulative_ratio": [float(v) for v in spec.cumulative_ratio()],
    }
    if args.gap is not None:
        doc["gap"] = args.gap
        doc["pca_id_ratio"] = pca_id_ratio(spec, args.gap)
    _emit(report.dumps(doc), args.out)
    return EXIT_OK


def cmd_generate(args) -> int:
    if args.kind == "low-rank":
        X = make_low_rank(LowRankSpec(args.n, args.D, args.rank, args.tail, args.seed))
    elif args.kind == "sphere":
        X = make_sphere(args.n, args.d, args.D, args.seed)
    else:
        X = make_affine(args.n, args.d, args.D, args.noise, args.seed)
    dataio.save(X, args.out, args.format)
    return EXIT_OK


BENCH_COLUMNS = ["eps", "delta", "p", "nk", "repeat", "seed", "n_v", "d_fractional",
                 "d_rounded", "variance_ratio", "stop_reason", "runtime_ms"]


def bench_rows(X, base: EstimatorConfig, eps_list, delta_list, p_list, nk_list, repeats,
               threads=None):
    """One row per (eps, delta, p, nk, repeat); repeat r runs with seed base.seed + r."""
    op = center(X)
    for eps in eps_list:
        for delta in delta_list:
            for p in p_list:
                for nk in nk_list:
                    for r in range(repeats):
                        cfg = base.replace(epsilon=eps, delta=delta, p=p, n_k=nk,
                                           seed=base.seed + r).validate()
                        t0 = time.perf_counter()
                        with warnings.catch_warnings():
                            warnings.simplefilter("ignore")
                            if cfg.clusters:
                                rep = estimate_id_clustered(X, cfg, threads)
                            else:
                                rep = estimate_id(op, cfg, threads)
                        ms = (time.perf_counter() - t0) * 1e3
                        yield {
                            "eps": eps, "delta": delta, "p": p, "nk": nk, "repeat": r,
                            "seed": cfg.seed, "n_v": budget(eps, delta, cfg.max_probes).n_v,
                            "d_fractional": rep.d_fractional, "d_rounded": rep.d_rounded,
                            "variance_ratio": rep.final_ratio, "stop_reason": rep.stop_reason,
                            "runtime_ms": round(ms, 3),
                        }


def cmd_bench(args) -> int:
    X = dataio.load(args.input, args.format)
    base = _config(args)
    eps_list = _floats(args.eps_list) if args.eps_list else [base.epsilon]
    delta_list = _floats(args.delta_list) if args.delta_list else [base.delta]
    p_list = _ints(args.p_list) if args.p_list else [base.p]
    nk_list = _ints(args.nk_list) if args.nk_list else [base.n_k]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in bench_rows(X, base, eps_list, delta_list, p_list, nk_list, args.repeats,
                          resolve_threads(args.threads)):
        writer.writerow(row)
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ritzid", description="Matrix-free intrinsic dimension estimation.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("estimate", help="estimate the intrinsic dimension of a data file")
    p.add_argument("input")
    _add_estimator_flags(p)
    p.add_argument("--exact", action="store_true", help="add a dense oracle section")
    p.add_argument("--out")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("oracle", help=f"exact spectrum and PCA ID (D <= {MAX_DENSE_DIM})")
    p.add_argument("input")
    p.add_argument("--theta", type=float, default=0.8)
    p.add_argument("--gap", type=float, default=None, help="also report the ratio-based ID")
    p.add_argument("--method", choices=("auto", "jacobi", "lapack"), default="auto")
    p.add_argument("--format", choices=("auto", "csv", "bin"), default="auto")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("generate", help="write a synthetic data set")
    p.add_argument("kind", choices=("low-rank", "sphere", "affine"))
    p.add_argument("--n", type=int, default=5000, help="samples")
    p.add_argument("--D", type=int, default=500, help="ambient dimension")
    p.add_argument("--d", type=int, default=2, help="manifold dimension (sphere, affine)")
    p.add_argument("--rank", type=int, default=30, help="effective rank (low-rank)")
    p.add_argument("--tail", type=float, default=0.05, help="tail strength (low-rank)")
    p.add_argument("--noise", type=float, default=0.0, help="noise sigma (affine)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("auto", "csv", "bin"), default="auto")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="parameter sweep; CSV table on output")
    p.add_argument("input")
    _add_estimator_flags(p)
    p.add_argument("--eps-list")
    p.add_argument("--delta-list")
    p.add_argument("--p-list")
    p.add_argument("--nk-list")
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help, or a usage error reported by the parser
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (RitzIdError, OSError) as exc:
        print(f"ritzid {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
