from dataclasses import asdict, dataclass, fields

from .errors import ConfigInvalidError

SUMMATION_MODES = ("lower", "mean", "upper")
FINALIZE_MODES = ("direct", "linear", "refine")


@dataclass(frozen=True)
class EstimatorConfig:
    """Tunables of the interval-sweeping estimator.

    Defaults reproduce the low-rank experiment: p=20 Chebyshev degree, 8 CGLS
    steps, eps=delta=0.2, 80% target variance with a 2% acceptable band,
    c1=1.5 (spectrum upper bound factor) and c2=1.4 (top interval factor).
    """

    p: int = 20
    n_k: int = 8
    epsilon: float = 0.2
    delta: float = 0.2
    t_v: float = 0.8
    a_r: float = 0.02
    c1: float = 1.5
    c2: float = 1.4
    a_t: str = "mean"
    f_t: str = "linear"
    seed: int = 0
    clusters: int = 0
    refine_max_depth: int = 5
    reorthogonalize: bool | None = None
    max_probes: int = 100_000

    def validate(self) -> "EstimatorConfig":
        err = []
        if self.p < 1:
            err.append("p must be >= 1")
        if self.n_k < 1:
            err.append("n_k must be >= 1")
        if not self.epsilon > 0:
            err.append("epsilon must be > 0")
        if not 0 < self.delta < 1:
            err.append("delta must lie in (0, 1)")
        if not 0 < self.t_v < 1:
            err.append("t_v must lie in (0, 1)")
        if self.a_r < 0:
            err.append("a_r must be >= 0")
        if not self.t_v + self.a_r < 1:
            err.append("t_v + a_r must be < 1")
        if not self.c1 > 1:
            err.append("c1 must be > 1")
        if not 1 < self.c2 <= self.c1:
            err.append("need 1 < c2 <= c1")
        if self.a_t not in SUMMATION_MODES:
            err.append(f"a_t must be one of {SUMMATION_MODES}")
        if self.f_t not in FINALIZE_MODES:
            err.append(f"f_t must be one of {FINALIZE_MODES}")
        if self.clusters < 0 or self.clusters == 1:
            err.append("clusters must be 0 (off) or >= 2")
        if self.refine_max_depth < 0:
            err.append("refine_max_depth must be >= 0")
        if self.seed < 0:
            err.append("seed must be non-negative")
        if err:
            raise ConfigInvalidError("; ".join(err))
        return self

    def replace(self, **kw) -> "EstimatorConfig":
        d = asdict(self)
        d.update(kw)
        return EstimatorConfig(**d)

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}
