"""Dense ground truth: explicit covariance, full spectrum, exact counts, PCA ID."""

from dataclasses import dataclass

import numpy as np

from .errors import (InvalidParameterError, NoGapFoundError, NotSymmetricError,
                     TooLargeError, ZeroVarianceError)
from .linop import CenteredOperator

MAX_DENSE_DIM = 2000
JACOBI_MAX_DIM = 256


@dataclass(frozen=True)
class DenseSpectrum:
    eigenvalues: np.ndarray  # descending, clamped at 0
    trace: float

    @property
    def dimension(self) -> int:
        return len(self.eigenvalues)

    def cumulative_ratio(self) -> np.ndarray:
        return np.cumsum(self.eigenvalues) / self.trace


def dense_covariance(op: CenteredOperator, max_dim: int = MAX_DENSE_DIM) -> np.ndarray:
    if op.n_features > max_dim:
        raise TooLargeError(f"D = {op.n_features} exceeds the dense limit {max_dim}")
    Xc = op.materialize()
    C = Xc.T @ Xc / (op.n_samples - 1)
    return 0.5 * (C + C.T)


def _jacobi_eigenvalues(A: np.ndarray, tol: float = 1e-15, max_sweeps: int = 60) -> np.ndarray:
    """Cyclic Jacobi with round-robin (Brent-Luk) ordering.

    Each round rotates n/2 disjoint index pairs at once, so a round is a
    handful of vectorized row/column updates.
    """
    A = np.array(A, dtype=float)
    n = A.shape[0]
    if n == 1:
        return A.diagonal().copy()
    m = n + (n % 2)
    players = np.arange(m)
    scale = np.linalg.norm(A)
    if scale == 0.0:
        return np.zeros(n)
    for _ in range(max_sweeps):
        off = np.sqrt(max(np.sum(A * A) - np.sum(A.diagonal() ** 2), 0.0))
        if off <= tol * scale:
            break
        for _ in range(m - 1):
            top = players[: m // 2]
            bot = players[m // 2:][::-1]
            keep = (top < n) & (bot < n)
            P = np.minimum(top, bot)[keep]
            Q = np.maximum(top, bot)[keep]
            apq = A[P, Q]
            rot = np.abs(apq) > 1e-300
            P, Q, apq = P[rot], Q[rot], apq[rot]
            if len(P):
                theta = (A[Q, Q] - A[P, P]) / (2.0 * apq)
                sgn = np.where(theta >= 0, 1.0, -1.0)
                big = np.abs(theta) > 1e150
                th = np.where(big, 1.0, theta)
                t = np.where(big, 0.5 / np.where(big, theta, 1.0),
                             sgn / (np.abs(th) + np.sqrt(th * th + 1.0)))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                Ap, Aq = A[P, :], A[Q, :]
                A[P, :] = c[:, None] * Ap - s[:, None] * Aq
                A[Q, :] = s[:, None] * Ap + c[:, None] * Aq
                Ap, Aq = A[:, P], A[:, Q]
                A[:, P] = Ap * c - Aq * s
                A[:, Q] = Ap * s + Aq * c
                A[P, Q] = 0.0
                A[Q, P] = 0.0
            players = np.concatenate([players[:1], players[-1:], players[1:-1]])
    return A.diagonal().copy()


def eigen_decompose(C, method: str = "auto") -> DenseSpectrum:
    """All eigenvalues of a symmetric matrix, descending and clamped at 0.

    ``method`` is ``"jacobi"``, ``"lapack"`` or ``"auto"`` (Jacobi up to
    ``JACOBI_MAX_DIM``, LAPACK above).
    """
    C = np.asarray(C, dtype=float)
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise NotSymmetricError(f"expected a square matrix, got shape {C.shape}")
    norm = np.linalg.norm(C)
    if np.linalg.norm(C - C.T) > 1e-9 * max(norm, 1e-300):
        raise NotSymmetricError("matrix is not symmetric to 1e-9 relative")
    C = 0.5 * (C + C.T)
    if method == "auto":
        method = "jacobi" if C.shape[0] <= JACOBI_MAX_DIM else "lapack"
    if method == "jacobi":
        ev = _jacobi_eigenvalues(C)
    elif method == "lapack":
        ev = np.linalg.eigvalsh(C)
    else:
        raise InvalidParameterError(f"unknown method {method!r}")
    ev = np.clip(np.sort(ev)[::-1], 0.0, None)
    return DenseSpectrum(ev, float(np.sum(ev)))


def spectrum_of(op: CenteredOperator, method: str = "auto") -> DenseSpectrum:
    return eigen_decompose(dense_covariance(op), method)


def exact_count(spec: DenseSpectrum, a: float, b: float) -> int:
    """Number of eigenvalues in the closed interval [a, b]."""
    if not a < b:
        raise InvalidParameterError(f"need a < b, got [{a}, {b}]")
    ev = spec.eigenvalues
    return int(np.count_nonzero((ev >= a) & (ev <= b)))


def pca_id_threshold(spec: DenseSpectrum, theta: float) -> int:
    """Smallest k whose leading k eigenvalues carry at least ``theta`` of the variance."""
    if not 0 < theta < 1:
        raise InvalidParameterError(f"theta must lie in (0, 1), got {theta}")
    if spec.trace <= 0:
        raise ZeroVarianceError("total variance is zero")
    ratio = spec.cumulative_ratio()
    k = int(np.searchsorted(ratio, theta, side="left")) + 1
    return min(k, spec.dimension)


def pca_id_ratio(spec: DenseSpectrum, alpha_gap: float) -> int:
    """Smallest k with lambda_k / lambda_{k+1} >= ``alpha_gap``."""
    if not alpha_gap > 1:
        raise InvalidParameterError(f"alpha_gap must exceed 1, got {alpha_gap}")
    ev = spec.eigenvalues
    for k in range(len(ev) - 1):
        if ev[k] <= 0:
            break
        if ev[k + 1] == 0 or ev[k] / ev[k + 1] >= alpha_gap:
            return k + 1
    raise NoGapFoundError(f"no consecutive eigenvalue ratio reaches {alpha_gap}")
