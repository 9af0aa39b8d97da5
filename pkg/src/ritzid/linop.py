"""Implicitly centered data operator.

Only two products are ever needed downstream, ``X_C v`` and ``X_C^T r``; the
centered matrix ``X_C = X - 1 mu^T`` is never materialized.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, NonFiniteError, TooFewSamplesError


def as_data_matrix(X) -> np.ndarray:
    """Validate and return ``X`` as a 2-D float64 array of shape (N, D)."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise DimensionMismatchError(f"data matrix must be 2-D, got shape {X.shape}")
    n, d = X.shape
    if n < 2:
        raise TooFewSamplesError(f"need at least 2 samples, got {n}")
    if d < 1:
        raise DimensionMismatchError("need at least one feature")
    if not np.all(np.isfinite(X)):
        raise NonFiniteError("data matrix contains NaN or Inf")
    return X


@dataclass(frozen=True)
class CenteredOperator:
    """Column-centered view of a data matrix.

    Attributes
    ----------
    source : ndarray, shape (N, D)
        The data exactly as given.
    col_means : ndarray, shape (D,)
        Column means subtracted on the fly (zeros for pre-centered input).
    """

    source: np.ndarray
    col_means: np.ndarray
    precentered: bool = False
    _frob: list = field(default_factory=list, repr=False, compare=False)

    @property
    def shape(self):
        return self.source.shape

    @property
    def n_samples(self) -> int:
        return self.source.shape[0]

    @property
    def n_features(self) -> int:
        return self.source.shape[1]

    def apply(self, v):
        """``X_C v`` for a length-D vector or a (D, m) block."""
        v = np.asarray(v, dtype=np.float64)
        if v.shape[0] != self.n_features:
            raise DimensionMismatchError(
                f"expected leading dimension {self.n_features}, got {v.shape[0]}")
        y = self.source @ v
        if not self.precentered:
            y -= self.col_means @ v
        return y

    def apply_transpose(self, r):
        """``X_C^T r`` for a length-N vector or an (N, m) block."""
        r = np.asarray(r, dtype=np.float64)
        if r.shape[0] != self.n_samples:
            raise DimensionMismatchError(
                f"expected leading dimension {self.n_samples}, got {r.shape[0]}")
        y = self.source.T @ r
        if not self.precentered:
            y -= np.multiply.outer(self.col_means, r.sum(axis=0))
        return y

    def covariance_apply(self, w):
        """``C w`` with ``C = X_C^T X_C / (N - 1)``, via two products."""
        return self.apply_transpose(self.apply(w)) / (self.n_samples - 1)

    def frobenius_norm(self, chunk: int = 4096) -> float:
        if not self._frob:
            total = 0.0
            for start in range(0, self.n_samples, chunk):
                block = self.source[start:start + chunk]
                if not self.precentered:
                    block = block - self.col_means
                total += float(np.sum(block * block))
            self._frob.append(np.sqrt(total))
        return self._frob[0]

    def materialize(self) -> np.ndarray:
        """Dense ``X_C``. For tests and the dense oracle only."""
        if self.precentered:
            return self.source.copy()
        return self.source - self.col_means

    def scaled(self, factor: float) -> "CenteredOperator":
        return center(self.source * factor, precentered=self.precentered)


def center(X, precentered: bool = False) -> CenteredOperator:
    """Wrap ``X`` as a centered operator.

    With ``precentered=True`` the column means are taken to be zero and no
    subtraction happens, which lets tests feed an exact ``X_C``.
    """
    X = as_data_matrix(X)
    if precentered:
        mu = np.zeros(X.shape[1])
    else:
        mu = X.mean(axis=0)
    return CenteredOperator(X, mu, precentered)
