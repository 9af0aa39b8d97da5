"""Ritz values of the covariance matrix from CGLS recurrence coefficients.

CGLS on ``X_C`` is CG on the normal operator ``X_C^T X_C``, so its step
lengths and direction updates define the Lanczos tridiagonal matrix of that
operator. Only the coefficients are kept; the solution iterate is never
formed.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateRhsError, InvalidParameterError
from .linop import CenteredOperator
from .probes import RHS, ProbeStream

REORTH_DEFAULT_MAX = 64
BREAKDOWN_RTOL = 1e-28
DEDUP_RTOL = 1e-10


@dataclass(frozen=True)
class CglsTrace:
    alphas: np.ndarray
    betas: np.ndarray
    iterations_run: int
    breakdown: str | None = None
    # beta after the final step, i.e. the coupling to the next (unbuilt) row
    beta_next: float = math.nan
    rhs: str = "ones"


@dataclass(frozen=True)
class TridiagonalMatrix:
    diag: np.ndarray
    offdiag: np.ndarray

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


@dataclass(frozen=True)
class RitzSpectrum:
    """Descending Ritz values in covariance units.

    ``values`` has near-duplicates merged and ``residuals`` holds the matching
    Lanczos residual bounds (smallest over a merged group). ``raw`` keeps
    every Ritz value before merging.
    """

    values: np.ndarray
    source: CglsTrace
    residuals: np.ndarray
    raw: np.ndarray

    @property
    def top(self) -> float:
        return float(self.values[0])

    def converged(self, rtol: float = 1e-8) -> np.ndarray:
        """Mask of Ritz values that are eigenvalues of C to ``rtol * mu_1``."""
        return self.residuals <= rtol * abs(self.top)


def _rhs(op: CenteredOperator, stream: ProbeStream | None):
    ones = np.ones(op.n_features)
    b = op.apply(ones)
    nb = np.linalg.norm(b)
    frob = op.frobenius_norm()
    if frob == 0.0:
        raise DegenerateRhsError("centered data is identically zero")
    if nb >= 1e-14 * frob:
        return b / nb, "ones"
    stream = (stream or ProbeStream(0, op.n_features)).child(RHS)
    b = op.apply(stream.with_dimension(op.n_features).probe(0))
    nb = np.linalg.norm(b)
    if nb < 1e-14 * frob:
        raise DegenerateRhsError("both X_C 1 and the random fallback are numerically zero")
    return b / nb, "rademacher"


def cgls_coefficients(op: CenteredOperator, n_k: int, reorthogonalize: bool | None = None,
                      stream: ProbeStream | None = None) -> CglsTrace:
    """Run up to ``n_k`` CGLS steps from ``x0 = 0`` and record alpha/beta.

    The right-hand side is ``X_C 1 / ||X_C 1||``; when that vector vanishes a
    seeded Rademacher vector takes its place. With ``reorthogonalize`` each new
    normal-equation residual ``s`` is projected (twice) against all earlier
    ones, which suppresses spurious repeated Ritz values.
    """
    D = op.n_features
    if not 1 <= n_k <= D:
        raise InvalidParameterError(f"n_k must lie in [1, {D}], got {n_k}")
    if reorthogonalize is None:
        reorthogonalize = n_k <= REORTH_DEFAULT_MAX

    b, rhs_kind = _rhs(op, stream)
    frob2 = op.frobenius_norm() ** 2
    r = b
    s = op.apply_transpose(r)
    p = s.copy()
    gamma = float(s @ s)
    gamma0 = gamma
    if gamma == 0.0:
        raise DegenerateRhsError("X_C^T b vanishes")
    basis = [s / math.sqrt(gamma)] if reorthogonalize else None

    alphas, betas = [], []
    breakdown = None
    beta_next = math.nan
    for i in range(n_k):
        q = op.apply(p)
        qq = float(q @ q)
        if qq <= BREAKDOWN_RTOL * frob2 * float(p @ p):
            breakdown = "zero curvature: ||X_C p||^2 underflow"
            break
        alpha = gamma / qq
        alphas.append(alpha)
        r = r - alpha * q
        s = op.apply_transpose(r)
        if reorthogonalize:
            V = np.asarray(basis).T
            for _ in range(2):
                s = s - V @ (V.T @ s)
        gamma_new = float(s @ s)
        beta = gamma_new / gamma
        if gamma_new < BREAKDOWN_RTOL * gamma0:
            beta_next = 0.0
            if i + 1 < n_k:
                breakdown = "exhausted Krylov space"
            break
        if i + 1 == n_k:
            beta_next = beta
            break
        betas.append(beta)
        p = s + beta * p
        gamma = gamma_new
        if reorthogonalize:
            basis.append(s / math.sqrt(gamma))

    return CglsTrace(np.array(alphas), np.array(betas), len(alphas), breakdown,
                     beta_next, rhs_kind)


def tridiagonal_from(trace: CglsTrace) -> TridiagonalMatrix:
    a = np.asarray(trace.alphas, dtype=float)
    b = np.asarray(trace.betas, dtype=float)[: len(a) - 1]
    diag = 1.0 / a
    diag[1:] += b / a[:-1]
    offdiag = np.sqrt(b) / a[:-1]
    return TridiagonalMatrix(diag, offdiag)


def _sturm_count(diag, off2, x):
    """Number of eigenvalues < x, vectorized over the array ``x``."""
    count = np.zeros(x.shape, dtype=np.int64)
    q = np.ones_like(x)
    tiny = np.finfo(float).tiny
    for i in range(len(diag)):
        prev = off2[i - 1] / q if i > 0 else 0.0
        q = diag[i] - x - prev
        q = np.where(q == 0.0, -tiny, q)
        count += q < 0
    return count


def tridiagonal_eigenvalues(T: TridiagonalMatrix) -> np.ndarray:
    """All eigenvalues, ascending, by Sturm-sequence bisection."""
    d = np.asarray(T.diag, dtype=float)
    e = np.asarray(T.offdiag, dtype=float)
    k = len(d)
    if k == 0:
        return np.empty(0)
    if k == 1:
        return d.copy()
    ae = np.abs(e)
    rad = np.concatenate([[0.0], ae]) + np.concatenate([ae, [0.0]])
    lo0 = float(np.min(d - rad))
    hi0 = float(np.max(d + rad))
    pad = 4 * np.finfo(float).eps * max(abs(lo0), abs(hi0), 1e-300)
    lo = np.full(k, lo0 - pad)
    hi = np.full(k, hi0 + pad)
    idx = np.arange(k)
    off2 = e * e
    # bisect until lo and hi are adjacent floats
    for _ in range(2100):
        mid = 0.5 * (lo + hi)
        active = (mid > lo) & (mid < hi)
        if not active.any():
            break
        c = _sturm_count(d, off2, mid)
        below = c > idx  # eigenvalue idx lies below mid
        hi = np.where(active & below, mid, hi)
        lo = np.where(active & ~below, mid, lo)
    return 0.5 * (lo + hi)


def _residual_bounds(T: TridiagonalMatrix, beta_next_offdiag: float):
    """Lanczos residual bound |t_{k,k+1}| |y_k| for each Ritz value (ascending)."""
    if not np.isfinite(beta_next_offdiag):
        return np.full(len(T.diag), np.inf)
    if beta_next_offdiag == 0.0:
        return np.zeros(len(T.diag))
    # last components of the eigenvectors; k is small so dense is fine
    _, vecs = np.linalg.eigh(T.dense())
    return np.abs(beta_next_offdiag) * np.abs(vecs[-1, :])


def ritz_values(op: CenteredOperator, n_k: int, reorthogonalize: bool | None = None,
                stream: ProbeStream | None = None) -> RitzSpectrum:
    """Descending Ritz values of ``C``: eigenvalues of T divided by N - 1."""
    trace = cgls_coefficients(op, n_k, reorthogonalize, stream)
    T = tridiagonal_from(trace)
    scale = op.n_samples - 1
    ev = tridiagonal_eigenvalues(T)
    a = trace.alphas
    t_next = math.sqrt(trace.beta_next) / a[-1] if np.isfinite(trace.beta_next) else math.nan
    res = _residual_bounds(T, t_next)
    order = np.argsort(ev)[::-1]
    raw = ev[order] / scale
    res = res[order] / scale
    groups = dedupe_groups(raw)
    values = np.array([raw[g[0]] for g in groups])
    residuals = np.array([res[g].min() for g in groups])
    return RitzSpectrum(values, trace, residuals, raw)


def dedupe_groups(values, rtol: float = DEDUP_RTOL):
    """Index groups of consecutive descending values closer than ``rtol``."""
    groups = []
    for i, v in enumerate(values):
        if groups:
            u = values[groups[-1][-1]]
            if abs(u - v) <= rtol * max(abs(u), abs(v)):
                groups[-1].append(i)
                continue
        groups.append([i])
    return groups


def dedupe(values, rtol: float = DEDUP_RTOL) -> np.ndarray:
    """Merge descending values whose relative gap is below ``rtol``."""
    values = np.asarray(values, dtype=float)
    return np.array([values[g[0]] for g in dedupe_groups(values, rtol)])
