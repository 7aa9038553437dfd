"""Monte Carlo checks of consistency and of the CLT variance.

Replicate ``r`` of a run with seed ``s`` draws its sample from the uniform
stream keyed by ``(s, r)`` (see :mod:`smoothq.rng`), so results do not depend
on batching or execution order, and two runs with the same seed but
different ``h`` see identical samples (common random numbers).
"""

from dataclasses import dataclass, field, asdict
import math

import numpy as np

from . import asymptotics, rng
from .errors import DomainError
from .estimator import SmoothingParams, estimate_many

DEFAULT_PROBS = (0.05, 0.25, 0.5, 0.75, 0.95)
_BATCH = 256


@dataclass(frozen=True)
class SimulationConfig:
    """One simulation cell.

    Give exactly one of ``tau`` (with ``z`` solved from the constant-``tau``
    line at ``h``) or ``z``.
    """

    distribution: object
    n: int = 2000
    replications: int = 2000
    seed: int = 0
    tau: float | None = None
    z: float | None = None
    h: float = 0.0
    summary_probs: tuple = DEFAULT_PROBS

    def __post_init__(self):
        if (self.tau is None) == (self.z is None):
            raise DomainError("give exactly one of tau or z")
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"n must be an integer >= 2, got {self.n!r}")
        if int(self.replications) != self.replications or self.replications < 2:
            raise DomainError(f"replications must be an integer >= 2, got {self.replications!r}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise DomainError(f"seed must be a non-negative integer, got {self.seed!r}")
        if self.tau is not None and not 0.0 < self.tau < 1.0:
            raise DomainError(f"tau must lie in (0, 1), got {self.tau!r}")
        if not all(0.0 <= p <= 1.0 for p in self.summary_probs):
            raise DomainError("summary probabilities must lie in [0, 1]")
        self.params  # validates (z, h)

    @property
    def params(self):
        if self.tau is not None:
            z = asymptotics.z_of_tau(self.distribution, self.tau, self.h)
        else:
            z = self.z
        return SmoothingParams(z, self.h)

    def target(self):
        if self.tau is not None:
            return self.distribution.quantile(self.tau)
        return asymptotics.population_minimizer(self.distribution, self.params)

    def predicted_variance(self):
        if self.tau is not None:
            return asymptotics.v(self.distribution, self.tau, self.h)
        return asymptotics.sigma2(self.distribution, self.params)


@dataclass(frozen=True)
class SimulationReport:
    config: SimulationConfig
    z: float
    target_q: float
    est_mean: float
    est_bias: float
    scaled_variance: float
    scaled_variance_se: float
    predicted_variance: float
    relative_error: float
    standardized_errors_summary: tuple = field(default_factory=tuple)

    def as_dict(self):
        cfg = self.config
        row = {
            "distribution": cfg.distribution.spec,
            "tau": cfg.tau,
            "z": self.z,
            "h": cfg.h,
            "n": cfg.n,
            "reps": cfg.replications,
            "seed": cfg.seed,
        }
        row.update({k: v for k, v in asdict(self).items()
                    if k not in ("config", "z", "standardized_errors_summary")})
        for p, value in zip(cfg.summary_probs, self.standardized_errors_summary):
            row[f"stdq_{p:g}"] = value
        return row


def _merge(a, b):
    # Chan et al. pairwise update of (count, mean, M2)
    na, ma, m2a = a
    nb, mb, m2b = b
    n = na + nb
    delta = mb - ma
    return n, ma + delta * nb / n, m2a + m2b + delta * delta * na * nb / n


def replicate_estimates(distribution, params_list, n, replications, seed):
    """Estimates for every replicate (rows) and every parameter pair (columns)."""
    params_list = list(params_list)
    out = np.empty((replications, len(params_list)))
    for start in range(0, replications, _BATCH):
        stop = min(start + _BATCH, replications)
        u = np.stack([rng.uniforms(seed, n, replicate=r) for r in range(start, stop)])
        y = np.sort(distribution.quantile(u), axis=1)
        means = y.mean(axis=1)
        for j, p in enumerate(params_list):
            out[start:stop, j] = estimate_many(y, means, p)
    return out


def summarize(config, estimates):
    """Build a :class:`SimulationReport` from one column of replicate estimates."""
    estimates = np.asarray(estimates, dtype=float)
    target = config.target()
    predicted = config.predicted_variance()

    stats = (0, 0.0, 0.0)
    for start in range(0, estimates.size, _BATCH):
        chunk = estimates[start:start + _BATCH]
        stats = _merge(stats, (chunk.size, float(chunk.mean()),
                               float(((chunk - chunk.mean()) ** 2).sum())))
    count, est_mean, m2 = stats
    var = m2 / (count - 1)
    m4 = float(np.mean((estimates - est_mean) ** 4))
    var_se = math.sqrt(max(m4 - (m2 / count) ** 2, 0.0) / count)

    standardized = math.sqrt(config.n) * (estimates - target) / math.sqrt(predicted)
    summary = tuple(float(x) for x in np.quantile(standardized, config.summary_probs))
    scaled = config.n * var
    return SimulationReport(
        config=config,
        z=config.params.z,
        target_q=target,
        est_mean=est_mean,
        est_bias=est_mean - target,
        scaled_variance=scaled,
        scaled_variance_se=config.n * var_se,
        predicted_variance=predicted,
        relative_error=abs(scaled - predicted) / predicted,
        standardized_errors_summary=summary,
    )


def run(config):
    """Replicate the estimator and compare ``n Var(q_hat)`` with theory."""
    est = replicate_estimates(config.distribution, [config.params],
                              config.n, config.replications, config.seed)
    return summarize(config, est[:, 0])


def consistency_sweep(d, p, n_grid, replications, seed):
    """RMSE of ``q_hat_n(z, h)`` around ``q(z, h)`` for each ``n`` in ``n_grid``."""
    n_grid = list(n_grid)
    if not n_grid or any(b <= a for a, b in zip(n_grid, n_grid[1:])):
        raise DomainError("n_grid must be nonempty and strictly ascending")
    if replications < 1:
        raise DomainError("replications must be positive")
    p = p if isinstance(p, SmoothingParams) else SmoothingParams(*p)
    target = asymptotics.population_minimizer(d, p)
    rows = []
    for n in n_grid:
        est = replicate_estimates(d, [p], n, replications, seed)[:, 0]
        rows.append((n, float(np.sqrt(np.mean((est - target) ** 2)))))
    return rows


def variance_surface(d, tau, h_grid, n, replications, seed):
    """Empirical and predicted scaled variance along the constant-``tau`` line.

    Every grid point reuses the same replicate samples; each row equals what
    :func:`run` returns for that ``h`` with the same seed.
    """
    h_grid = list(h_grid)
    if not h_grid:
        raise DomainError("h_grid must be nonempty")
    configs = [SimulationConfig(d, n=n, replications=replications, seed=seed, tau=tau, h=h)
               for h in h_grid]
    est = replicate_estimates(d, [c.params for c in configs], n, replications, seed)
    return [summarize(c, est[:, j]) for j, c in enumerate(configs)]
