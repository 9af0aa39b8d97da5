"""Seeded synthetic data sets."""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpecError


@dataclass(frozen=True)
class LowRankSpec:
    n_samples: int = 5000
    n_features: int = 500
    effective_rank: int = 30
    tail_strength: float = 0.05
    seed: int = 0

    def validate(self):
        n = min(self.n_samples, self.n_features)
        if self.n_samples < 2 or self.n_features < 1:
            raise InvalidSpecError("need n_samples >= 2 and n_features >= 1")
        if not 1 <= self.effective_rank <= n:
            raise InvalidSpecError(f"effective_rank must lie in [1, {n}]")
        if not 0 <= self.tail_strength <= 1:
            raise InvalidSpecError("tail_strength must lie in [0, 1]")


def singular_profile(n: int, effective_rank: float, tail_strength: float) -> np.ndarray:
    """Bell-shaped head plus exponential tail (scikit-learn's low-rank profile)."""
    i = np.arange(n, dtype=float)
    head = (1.0 - tail_strength) * np.exp(-((i / effective_rank) ** 2))
    tail = tail_strength * np.exp(-0.1 * i / effective_rank)
    return head + tail


def _orthonormal(rng, rows, cols):
    q, r = np.linalg.qr(rng.standard_normal((rows, cols)))
    return q * np.where(np.diag(r) < 0, -1.0, 1.0)


def make_low_rank(spec: LowRankSpec) -> np.ndarray:
    """``U diag(s) V^T`` with random orthonormal U, V and the profile above."""
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    n = min(spec.n_samples, spec.n_features)
    u = _orthonormal(rng, spec.n_samples, n)
    v = _orthonormal(rng, spec.n_features, n)
    s = singular_profile(n, spec.effective_rank, spec.tail_strength)
    return (u * s) @ v.T


def random_rotation(rng, D: int) -> np.ndarray:
    return _orthonormal(rng, D, D)


def make_sphere(n: int, d: int, D: int, seed: int = 0) -> np.ndarray:
    """``n`` uniform points on the unit sphere S^d, zero-padded to R^D and rotated."""
    if n < 2 or d < 1 or d + 1 > D:
        raise InvalidSpecError(f"need n >= 2 and 1 <= d < D, got n={n}, d={d}, D={D}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, d + 1))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    X = np.zeros((n, D))
    X[:, : d + 1] = g
    return X @ random_rotation(rng, D).T


def make_affine(n: int, d: int, D: int, noise_sigma: float = 0.0, seed: int = 0) -> np.ndarray:
    """Standard Gaussian on a random d-dim affine subspace of R^D plus isotropic noise."""
    if n < 2 or d < 1 or d > D or noise_sigma < 0:
        raise InvalidSpecError(f"need n >= 2, 1 <= d <= D, sigma >= 0; got n={n}, d={d}, D={D}")
    rng = np.random.default_rng(seed)
    basis = _orthonormal(rng, D, d).T  # (d, D)
    offset = rng.standard_normal(D)
    X = rng.standard_normal((n, d)) @ basis + offset
    if noise_sigma > 0:
        X += noise_sigma * rng.standard_normal((n, D))
    return X
