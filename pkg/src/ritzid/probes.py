"""Rademacher probe vectors and the (epsilon, delta) probe budget."""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError

DEFAULT_MAX_PROBES = 100_000

# Stream purposes; each gets a disjoint spawn key under the run seed.
TRACE = 0
COUNT = 1
RHS = 2
KMEANS = 3
CLUSTER = 4


@dataclass(frozen=True)
class ProbeBudget:
    epsilon: float
    delta: float
    n_v: int


def probe_count(epsilon: float, delta: float) -> float:
    """Unrounded n_v(eps, delta) = 2 (2 + 8 sqrt(2) eps / 3) ln(2 / delta) / eps^2."""
    return 2.0 * (2.0 + 8.0 * math.sqrt(2.0) / 3.0 * epsilon) * math.log(2.0 / delta) / epsilon**2


def budget(epsilon: float, delta: float, max_probes: int = DEFAULT_MAX_PROBES) -> ProbeBudget:
    """Number of Rademacher probes for relative error ``epsilon`` with
    probability ``1 - delta``, rounded up and capped at ``max_probes``."""
    if not (math.isfinite(epsilon) and epsilon > 0):
        raise InvalidParameterError(f"epsilon must be positive, got {epsilon}")
    if not (0 < delta < 1):
        raise InvalidParameterError(f"delta must lie in (0, 1), got {delta}")
    n_v = max(1, math.ceil(probe_count(epsilon, delta)))
    if n_v > max_probes:
        warnings.warn(f"probe budget {n_v} capped at {max_probes}", RuntimeWarning, stacklevel=2)
        n_v = max_probes
    return ProbeBudget(float(epsilon), float(delta), n_v)


def fixed_budget(n_v: int) -> ProbeBudget:
    """A budget with an explicit probe count (epsilon/delta left as NaN)."""
    if n_v < 1:
        raise InvalidParameterError("n_v must be >= 1")
    return ProbeBudget(math.nan, math.nan, int(n_v))


@dataclass(frozen=True)
class ProbeStream:
    """Counter-based stream of Rademacher vectors.

    Probe ``k`` is drawn from its own generator seeded by
    ``SeedSequence(seed, spawn_key=key + (k,))``, so it does not depend on
    which other probes were drawn or in what order.
    """

    seed: int
    dimension: int
    key: tuple = ()

    def child(self, *key) -> "ProbeStream":
        return ProbeStream(self.seed, self.dimension, self.key + tuple(key))

    def with_dimension(self, dimension: int) -> "ProbeStream":
        return ProbeStream(self.seed, dimension, self.key)

    def generator(self, k: int) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=self.key + (int(k),))
        return np.random.default_rng(ss)

    def probe(self, k: int) -> np.ndarray:
        bits = self.generator(k).integers(0, 2, size=self.dimension, dtype=np.int8)
        return 2.0 * bits - 1.0

    def block(self, start: int, stop: int) -> np.ndarray:
        """Probes ``start..stop-1`` as columns of a (dimension, stop-start) array."""
        out = np.empty((self.dimension, stop - start))
        for i, k in enumerate(range(start, stop)):
            out[:, i] = self.probe(k)
        return out


def probe(stream: ProbeStream, k: int) -> np.ndarray:
    return stream.probe(k)
