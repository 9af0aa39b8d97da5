"""Hutchinson estimate of tr(C) using only ``X_C z`` products."""

from dataclasses import dataclass

import numpy as np

from ._parallel import map_blocks
from .linop import CenteredOperator
from .probes import ProbeBudget, ProbeStream


@dataclass(frozen=True)
class TraceEstimate:
    tau: float
    n_v_used: int
    per_probe: np.ndarray

    def standard_error(self) -> float:
        if self.n_v_used < 2:
            return float("nan")
        return float(np.std(self.per_probe, ddof=1) / np.sqrt(self.n_v_used))


def estimate_trace(op: CenteredOperator, budget: ProbeBudget, stream: ProbeStream,
                   threads=None) -> TraceEstimate:
    """tau = mean_k ||X_C z_k||^2 / (N - 1) over ``budget.n_v`` probes."""
    stream = stream.with_dimension(op.n_features)
    scale = op.n_samples - 1

    def work(start, stop):
        h = op.apply(stream.block(start, stop))
        return np.einsum("ij,ij->j", h, h) / scale

    per_probe = np.concatenate(map_blocks(work, budget.n_v, threads))
    tau = float(np.mean(per_probe))
    return TraceEstimate(max(tau, 0.0), budget.n_v, per_probe)
