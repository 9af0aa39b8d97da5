"""Jackson-damped Chebyshev estimate of eigenvalue counts of C in [a, b].

The count is the trace of a polynomial approximation of the spectral
projector, estimated with Rademacher probes. Per probe, the moments
``z^T T_j(l(C)) z`` (j = 0..p) do not depend on the interval, so they are
computed once and any number of intervals can be evaluated on the same
probes.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._parallel import map_blocks
from .errors import BoundsTooTightError, InvalidIntervalError, InvalidParameterError
from .linop import CenteredOperator
from .probes import ProbeBudget, ProbeStream

CLAMP_TOL = 1e-9
DEFAULT_DEGREE = 20
RECOMMENDED_DEGREE = 70


@dataclass(frozen=True)
class SpectrumBounds:
    lambda_min_est: float
    lambda_max_est: float

    def __post_init__(self):
        if not self.lambda_max_est > self.lambda_min_est:
            raise InvalidParameterError(
                f"need lambda_max_est > lambda_min_est, got "
                f"[{self.lambda_min_est}, {self.lambda_max_est}]")

    @property
    def shift(self) -> float:
        return self.lambda_max_est + self.lambda_min_est

    @property
    def scale(self) -> float:
        return self.lambda_max_est - self.lambda_min_est

    def transform(self, t):
        """Affine map of [lambda_min_est, lambda_max_est] onto [-1, 1]."""
        return (2.0 * np.asarray(t, dtype=float) - self.shift) / self.scale


@dataclass(frozen=True)
class EarlyStop:
    batch: int = 16
    rtol: float = 0.01


@dataclass(frozen=True)
class CountQuery:
    a: float
    b: float
    p: int
    budget: ProbeBudget
    bounds: SpectrumBounds
    early_stop: EarlyStop | None = None


@dataclass(frozen=True)
class CountResult:
    eta: float
    eta_clamped: float
    probes_used: int


def jackson_coefficient(j: int, p: int) -> float:
    a = math.pi / (p + 2)
    return (math.sin((j + 1) * a) / ((p + 2) * math.sin(a))
            + (1.0 - (j + 1) / (p + 2)) * math.cos(j * a))


def jackson_coefficients(p: int) -> np.ndarray:
    a = np.pi / (p + 2)
    j = np.arange(p + 1)
    return np.sin((j + 1) * a) / ((p + 2) * np.sin(a)) + (1.0 - (j + 1) / (p + 2)) * np.cos(j * a)


def gamma_coefficient(j: int, a_t: float, b_t: float) -> float:
    """Chebyshev coefficient of the indicator of [a_t, b_t] within [-1, 1]."""
    ta, tb = math.acos(a_t), math.acos(b_t)
    if j == 0:
        return (ta - tb) / math.pi
    return 2.0 / math.pi * (math.sin(j * ta) - math.sin(j * tb)) / j


def gamma_coefficients(p: int, a_t: float, b_t: float) -> np.ndarray:
    ta, tb = math.acos(a_t), math.acos(b_t)
    j = np.arange(1, p + 1)
    rest = 2.0 / np.pi * (np.sin(j * ta) - np.sin(j * tb)) / j
    return np.concatenate([[(ta - tb) / np.pi], rest])


def transformed_endpoints(bounds: SpectrumBounds, a: float, b: float):
    """Map [a, b] into [-1, 1]; clamp round-off, reject real overshoot."""
    if not a < b:
        raise InvalidIntervalError(f"need a < b, got [{a}, {b}]")
    a_t, b_t = (float(x) for x in bounds.transform([a, b]))
    for name, x in (("a", a_t), ("b", b_t)):
        if x < -1.0 - CLAMP_TOL or x > 1.0 + CLAMP_TOL:
            raise BoundsTooTightError(
                f"endpoint {name} maps to {x:.6g}, outside [-1, 1]; widen the spectrum bounds")
    return min(max(a_t, -1.0), 1.0), min(max(b_t, -1.0), 1.0)


def chebyshev_apply_step(op: CenteredOperator, bounds: SpectrumBounds, w_j, w_jm1):
    """One step of the three-term recurrence ``w_{j+1} = 2 l(C) w_j - w_{j-1}``.

    Written with the two data products so that C is never formed; works on a
    vector or a (D, m) block.
    """
    m = op.n_samples - 1
    cw = op.apply_transpose(op.apply(w_j))
    return 2.0 * ((2.0 * cw - bounds.shift * m * w_j) / (bounds.scale * m)) - w_jm1


def first_step(op: CenteredOperator, bounds: SpectrumBounds, z):
    """``w_1 = l(C) z``."""
    m = op.n_samples - 1
    cz = op.apply_transpose(op.apply(z))
    return (2.0 * cz - bounds.shift * m * z) / (bounds.scale * m)


def probe_moments(op: CenteredOperator, bounds: SpectrumBounds, p: int, Z) -> np.ndarray:
    """Moments ``z_k^T T_j(l(C)) z_k`` for the probe columns of ``Z``.

    Returns an array of shape (m, p + 1).
    """
    Z = np.asarray(Z, dtype=float)
    if Z.ndim == 1:
        Z = Z[:, None]
    out = np.empty((Z.shape[1], p + 1))
    out[:, 0] = np.einsum("ij,ij->j", Z, Z)
    if p == 0:
        return out
    w_prev, w = Z, first_step(op, bounds, Z)
    out[:, 1] = np.einsum("ij,ij->j", Z, w)
    for j in range(2, p + 1):
        w_prev, w = w, chebyshev_apply_step(op, bounds, w, w_prev)
        out[:, j] = np.einsum("ij,ij->j", Z, w)
    return out


@dataclass(frozen=True)
class ChebyshevMoments:
    """Per-probe Chebyshev moments, reusable for any interval inside the bounds."""

    moments: np.ndarray  # (n_v, p + 1)
    bounds: SpectrumBounds
    p: int

    @property
    def n_v(self) -> int:
        return self.moments.shape[0]

    def weights(self, a: float, b: float) -> np.ndarray:
        a_t, b_t = transformed_endpoints(self.bounds, a, b)
        return jackson_coefficients(self.p) * gamma_coefficients(self.p, a_t, b_t)

    def per_probe(self, a: float, b: float) -> np.ndarray:
        return self.moments @ self.weights(a, b)

    def count(self, a: float, b: float) -> CountResult:
        eta = float(np.mean(self.per_probe(a, b)))
        return CountResult(eta, max(eta, 0.0), self.n_v)


def compute_moments(op: CenteredOperator, bounds: SpectrumBounds, p: int, n_v: int,
                    stream: ProbeStream, threads=None, start: int = 0) -> ChebyshevMoments:
    if p < 1:
        raise InvalidParameterError(f"Chebyshev degree must be >= 1, got {p}")
    stream = stream.with_dimension(op.n_features)

    def work(s, e):
        return probe_moments(op, bounds, p, stream.block(start + s, start + e))

    blocks = map_blocks(work, n_v, threads)
    return ChebyshevMoments(np.concatenate(blocks, axis=0), bounds, p)


def count_eigenvalues(op: CenteredOperator, query: CountQuery, stream: ProbeStream,
                      threads=None) -> CountResult:
    """Estimated number of eigenvalues of C in ``[query.a, query.b]``.

    With ``query.early_stop`` set, probes are consumed in batches and the run
    stops once the running mean changes by less than ``rtol`` (relative)
    between consecutive batches.
    """
    transformed_endpoints(query.bounds, query.a, query.b)
    n_v = query.budget.n_v
    if query.early_stop is None:
        mom = compute_moments(op, query.bounds, query.p, n_v, stream, threads)
        return mom.count(query.a, query.b)

    batch = max(1, query.early_stop.batch)
    parts = []
    used = 0
    prev = None
    weights = None
    while used < n_v:
        stop = min(used + batch, n_v)
        mom = compute_moments(op, query.bounds, query.p, stop - used, stream, threads, start=used)
        if weights is None:
            weights = mom.weights(query.a, query.b)
        parts.append(mom.moments @ weights)
        used = stop
        cur = float(np.mean(np.concatenate(parts)))
        if prev is not None and abs(cur - prev) <= query.early_stop.rtol * max(abs(cur), 1e-12):
            break
        prev = cur
    eta = float(np.mean(np.concatenate(parts)))
    return CountResult(eta, max(eta, 0.0), used)
