"""Seeded Lloyd k-means with k-means++ initialization."""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .probes import KMEANS


@dataclass(frozen=True)
class KMeansResult:
    labels: np.ndarray
    centers: np.ndarray
    inertia: list  # within-cluster sum of squares after each assignment step
    n_iter: int


def _sq_dist(X, C):
    d = (X * X).sum(1)[:, None] - 2.0 * X @ C.T + (C * C).sum(1)[None, :]
    return np.maximum(d, 0.0)


def _init_pp(X, k, rng):
    n = X.shape[0]
    centers = [X[rng.integers(n)]]
    d2 = _sq_dist(X, np.asarray(centers))[:, 0]
    for _ in range(1, k):
        total = d2.sum()
        if total <= 0:
            idx = rng.integers(n)
        else:
            idx = int(np.searchsorted(np.cumsum(d2), rng.random() * total, side="right"))
            idx = min(idx, n - 1)
        centers.append(X[idx])
        d2 = np.minimum(d2, _sq_dist(X, X[idx][None, :])[:, 0])
    return np.array(centers)


def kmeans(X, k: int, seed: int = 0, max_iters: int = 100) -> KMeansResult:
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    if not 1 <= k <= n:
        raise InvalidParameterError(f"need 1 <= k <= N, got k={k}, N={n}")
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(KMEANS,)))
    centers = _init_pp(X, k, rng)
    labels = None
    inertia = []
    it = 0
    for it in range(1, max_iters + 1):
        d = _sq_dist(X, centers)
        new = np.argmin(d, axis=1)
        inertia.append(float(d[np.arange(n), new].sum()))
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
        for c in range(k):
            members = labels == c
            if members.any():
                centers[c] = X[members].mean(axis=0)
    return KMeansResult(labels, centers, inertia, it)
