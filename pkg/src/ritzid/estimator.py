"""Interval-sweeping intrinsic dimension estimator.

Pipeline: Hutchinson trace of C, a few Ritz values from CGLS, then Chebyshev
eigenvalue counts on the intervals between consecutive Ritz values, swept
from the top down until the attributed variance reaches the target ratio.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .chebcount import ChebyshevMoments, SpectrumBounds, compute_moments
from .config import EstimatorConfig
from .errors import ClusteringDegenerateError, DegenerateSpectrumError, ZeroVarianceError
from .kmeans import kmeans
from .linop import CenteredOperator, as_data_matrix, center
from .probes import CLUSTER, COUNT, TRACE, ProbeStream, budget
from .ritz import RitzSpectrum, ritz_values
from .trace_est import TraceEstimate, estimate_trace

WITHIN = "within_acceptable_range"
FINALIZED = "threshold_crossed_finalized"
EXHAUSTED = "intervals_exhausted"

# Ritz values with residual bound below this (relative to mu_1) are treated as
# exact eigenvalues when placing count windows.
CONVERGED_RTOL = 1e-8
# Reported d_fractional is rounded to this many decimals so that results do
# not depend on last-bit rounding (e.g. under rescaling of the data).
REPORT_DECIMALS = 9


@dataclass(frozen=True)
class IntervalRecord:
    lower: float
    upper: float
    eta: float
    alpha_contrib: float
    cumulative_ratio: float
    count_lower: float = math.nan
    count_upper: float = math.nan
    eta_raw: float = math.nan


@dataclass
class IdReport:
    tau: TraceEstimate | None
    ritz: RitzSpectrum | None
    records: list
    d_fractional: float
    d_rounded: int
    stop_reason: str
    refinements: list = field(default_factory=list)
    per_cluster: list | None = None
    cluster_sizes: list | None = None

    @property
    def final_ratio(self) -> float:
        return self.records[-1].cumulative_ratio if self.records else math.nan


def round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def interval_edges(ritz: RitzSpectrum, c2: float) -> np.ndarray:
    """``[c2 mu_1, mu_1, mu_2, ..., mu_nk]``; consecutive pairs are the sweep intervals."""
    mu = np.asarray(ritz.values if isinstance(ritz, RitzSpectrum) else ritz, dtype=float)
    if len(mu) == 0 or not mu[0] > 0:
        raise DegenerateSpectrumError("largest Ritz value must be positive")
    mu = mu[mu > 0]
    return np.concatenate([[c2 * mu[0]], mu])


def count_windows(edges: np.ndarray, converged: np.ndarray, lambda_min_est: float = 0.0):
    """Edges at which counts are taken.

    An interval ``[mu_{i+1}, mu_i]`` is read as owning the eigenvalue at its
    lower end. A smoothed count cannot resolve an eigenvalue sitting exactly
    on an edge, so edges at converged Ritz values (exact eigenvalues) are
    moved halfway down to the next edge. Unconverged edges are left alone.
    """
    w = edges.copy()
    below = np.concatenate([edges[2:], [lambda_min_est]])
    for i in range(1, len(edges)):
        if converged[i - 1]:
            w[i] = 0.5 * (edges[i] + below[i - 1])
    return w


def interval_variance(eta: float, lower: float, upper: float, a_t: str) -> float:
    """Variance attributed to ``eta`` eigenvalues in [lower, upper].

    A count that rounds to one is read as the single eigenvalue at the lower
    end, so the lower rule is used whatever ``a_t`` says.
    """
    if eta <= 0:
        return 0.0
    if a_t == "lower" or round_half_up(eta) == 1:
        return eta * lower
    if a_t == "mean":
        return eta * 0.5 * (lower + upper)
    if a_t == "upper":
        return eta * upper
    raise ValueError(f"unknown summation mode {a_t!r}")


def finalize_linear(d_before: float, last: IntervalRecord, alpha_before: float,
                    tau: float, t_v: float) -> float:
    """Take the fraction of the last interval's count that matches the
    missing variance, assuming variance is spread evenly across it."""
    if last.alpha_contrib <= 0:
        return d_before
    f = (t_v * tau - alpha_before) / last.alpha_contrib
    f = min(max(f, 0.0), 1.0)
    return d_before + f * last.eta


@dataclass
class _Sweep:
    moments: ChebyshevMoments
    tau: float
    cfg: EstimatorConfig
    refinements: list = field(default_factory=list)

    def measure(self, lower, upper, w_lower, w_upper, alpha_before):
        res = self.moments.count(w_lower, w_upper)
        eta = res.eta_clamped
        contrib = interval_variance(eta, lower, upper, self.cfg.a_t)
        ratio = (alpha_before + contrib) / self.tau
        return IntervalRecord(lower, upper, eta, contrib, ratio, w_lower, w_upper, res.eta)

    def state(self, ratio):
        t, a = self.cfg.t_v, self.cfg.a_r
        if t - a < ratio < t + a:
            return WITHIN
        if ratio >= t + a:
            return "over"
        return "under"


def finalize_refine(sweep: _Sweep, last: IntervalRecord, alpha_before: float,
                    d_before: float, depth: int | None = None) -> float:
    """Bisect the crossing interval and recount until the threshold lands
    inside the acceptable band or the depth budget runs out; the remaining
    sub-interval is then resolved linearly."""
    cfg = sweep.cfg
    if depth is None:
        depth = cfg.refine_max_depth
    if depth <= 0:
        return finalize_linear(d_before, last, alpha_before, sweep.tau, cfg.t_v)
    lo, hi = last.lower, last.upper
    mid = 0.5 * (lo + hi)
    # same window rule as the sweep: an upper edge on a converged Ritz value
    # belongs to the interval above, so its count edge moves halfway down
    w_hi = 0.5 * (hi + mid) if last.count_upper < hi else last.count_upper
    up = sweep.measure(mid, hi, mid, w_hi, alpha_before)
    sweep.refinements.append(up)
    st = sweep.state(up.cumulative_ratio)
    if st == WITHIN:
        return d_before + up.eta
    if st == "over":
        return finalize_refine(sweep, up, alpha_before, d_before, depth - 1)
    alpha_before += up.alpha_contrib
    d_before += up.eta
    low = sweep.measure(lo, mid, last.count_lower, mid, alpha_before)
    sweep.refinements.append(low)
    st = sweep.state(low.cumulative_ratio)
    if st == WITHIN:
        return d_before + low.eta
    if st == "over":
        return finalize_refine(sweep, low, alpha_before, d_before, depth - 1)
    # halves attribute less variance than the whole did; keep the lower half
    return d_before + low.eta


def sweep_intervals(moments: ChebyshevMoments, ritz: RitzSpectrum, tau: float,
                    cfg: EstimatorConfig):
    """Run the descending sweep on precomputed moments.

    Returns ``(d_fractional, stop_reason, records, refinements)``.
    """
    if not tau > 0:
        raise ZeroVarianceError("estimated total variance is not positive")
    edges = interval_edges(ritz, cfg.c2)
    converged = ritz.converged(CONVERGED_RTOL)[: len(edges) - 1]
    windows = count_windows(edges, converged, moments.bounds.lambda_min_est)
    sweep = _Sweep(moments, tau, cfg)
    records = []
    alpha = 0.0
    d = 0.0
    for i in range(len(edges) - 1):
        rec = sweep.measure(edges[i + 1], edges[i], windows[i + 1], windows[i], alpha)
        records.append(rec)
        st = sweep.state(rec.cumulative_ratio)
        if st == WITHIN:
            return d + rec.eta, WITHIN, records, sweep.refinements
        if st == "over":
            if cfg.f_t == "direct":
                d_final = d + rec.eta
            elif cfg.f_t == "linear":
                d_final = finalize_linear(d, rec, alpha, tau, cfg.t_v)
            else:
                d_final = finalize_refine(sweep, rec, alpha, d)
            return d_final, FINALIZED, records, sweep.refinements
        alpha += rec.alpha_contrib
        d += rec.eta
    warnings.warn(
        f"target variance {cfg.t_v} not reached after {len(records)} intervals "
        f"(reached {alpha / tau:.4f}); increase n_k", RuntimeWarning, stacklevel=2)
    return d, EXHAUSTED, records, sweep.refinements


def estimate_id(op: CenteredOperator, cfg: EstimatorConfig | None = None, threads=None,
                key: tuple = ()) -> IdReport:
    """Estimate the intrinsic dimension of the data behind ``op``.

    Parameters
    ----------
    op : CenteredOperator
        Only its two matrix-vector products are used.
    cfg : EstimatorConfig
        All tunables; ``cfg.clusters`` is ignored here (see
        :func:`estimate_id_clustered`).
    threads : int, optional
        Worker threads for probe blocks. Results do not depend on it.
    key : tuple
        Extra spawn key for the probe streams (used by cluster sub-runs).
    """
    cfg = (cfg or EstimatorConfig()).validate()
    stream = ProbeStream(cfg.seed, op.n_features, tuple(key))
    bud = budget(cfg.epsilon, cfg.delta, cfg.max_probes)
    tau = estimate_trace(op, bud, stream.child(TRACE), threads)
    n_k = min(cfg.n_k, op.n_features)
    ritz = ritz_values(op, n_k, cfg.reorthogonalize, stream)
    if not ritz.top > 0:
        raise DegenerateSpectrumError("largest Ritz value must be positive")
    bounds = SpectrumBounds(0.0, cfg.c1 * ritz.top)
    moments = compute_moments(op, bounds, cfg.p, bud.n_v, stream.child(COUNT), threads)
    d, reason, records, refinements = sweep_intervals(moments, ritz, tau.tau, cfg)
    d = round(float(max(d, 0.0)), REPORT_DECIMALS)
    return IdReport(tau, ritz, records, d, round_half_up(d), reason, refinements)


def _merge_small(X, labels, min_size):
    labels = labels.copy()
    while True:
        ids, sizes = np.unique(labels, return_counts=True)
        small = ids[sizes < min_size]
        big = ids[sizes >= min_size]
        if len(small) == 0 or len(big) == 0:
            return labels
        cents = {c: X[labels == c].mean(axis=0) for c in ids}
        c = small[0]
        dist = [np.linalg.norm(cents[c] - cents[b]) for b in big]
        labels[labels == c] = big[int(np.argmin(dist))]


def estimate_id_clustered(X, cfg: EstimatorConfig, threads=None) -> IdReport:
    """k-means the rows, estimate each cluster separately, report the mean ID.

    Each cluster is centered on its own mean. Clusters smaller than
    ``max(2, D / 10)`` points are merged into the nearest remaining cluster.
    """
    cfg = cfg.validate()
    if cfg.clusters == 0:
        return estimate_id(center(X), cfg, threads)
    X = as_data_matrix(X)
    N, D = X.shape
    k = cfg.clusters
    if N < 2 * k:
        raise ClusteringDegenerateError(f"need N >= 2k, got N={N}, k={k}")
    labels = kmeans(X, k, cfg.seed).labels
    labels = _merge_small(X, labels, max(2, int(math.ceil(D / 10))))
    ids, sizes = np.unique(labels, return_counts=True)
    if len(ids) < 2:
        raise ClusteringDegenerateError("k-means left fewer than 2 usable clusters")
    subs = []
    for i, c in enumerate(ids):
        Xc = X[labels == c]
        sub_cfg = cfg.replace(clusters=0, n_k=max(1, min(cfg.n_k, D, Xc.shape[0] - 1)))
        subs.append(estimate_id(center(Xc), sub_cfg, threads, key=(CLUSTER, i)))
    d = round(float(np.mean([s.d_fractional for s in subs])), REPORT_DECIMALS)
    reasons = {s.stop_reason for s in subs}
    reason = EXHAUSTED if EXHAUSTED in reasons else (FINALIZED if FINALIZED in reasons else WITHIN)
    return IdReport(None, None, [], d, round_half_up(d), reason,
                    per_cluster=subs, cluster_sizes=[int(s) for s in sizes])
