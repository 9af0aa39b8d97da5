"""Matrix-free intrinsic dimension estimation from Ritz values and
Jackson-damped Chebyshev eigenvalue counts."""

from .chebcount import (CountQuery, CountResult, EarlyStop, SpectrumBounds,
                        count_eigenvalues, jackson_coefficient, gamma_coefficient)
from .config import EstimatorConfig
from .datagen import LowRankSpec, make_affine, make_low_rank, make_sphere
from .estimator import IdReport, estimate_id, estimate_id_clustered
from .linop import CenteredOperator, center
from .oracle import DenseSpectrum, eigen_decompose, pca_id_threshold, spectrum_of
from .probes import ProbeBudget, ProbeStream, budget
from .ritz import ritz_values
from .trace_est import estimate_trace

__version__ = "0.1.0"
