"""Monte Carlo experiments: null calibration and power surfaces.

Replication ``r`` of a run seeded with ``seed`` always draws from
``substream(seed, r)``, so results are identical whatever the number of
worker processes. Power grids reuse the same substreams in every cell
(common random numbers), which keeps the surfaces smooth.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .cusum import TestConfig, detect_changepoint, kolmogorov_cdf, kolmogorov_quantile
from .errors import AngularDomainError, DegeneracyError
from .geometry import TWO_PI, SurfaceSpec, sphere, torus
from .samplers import (
    CosineModelParams,
    FisherParams,
    SineModelParams,
    sample_fisher,
    sample_vm_cosine,
    sample_vm_sine,
    substream,
)

__all__ = [
    "ModelParams",
    "NullExperimentConfig",
    "NullExperimentResult",
    "PowerGridConfig",
    "PowerGridResult",
    "draw_sample",
    "inject_shift",
    "ks_distance_to_kolmogorov",
    "null_experiment",
    "power_grid",
    "simulated_critical_value",
    "simulated_p_value",
    "surface_for",
]

ModelParams = Union[SineModelParams, CosineModelParams, FisherParams]


def surface_for(model: ModelParams, ratio: float = 0.5) -> SurfaceSpec:
    return sphere() if isinstance(model, FisherParams) else torus(ratio)


def draw_sample(model: ModelParams, n: int, rng) -> np.ndarray:
    if isinstance(model, FisherParams):
        return sample_fisher(model, n, rng)
    if isinstance(model, CosineModelParams):
        return sample_vm_cosine(model, n, rng)
    if isinstance(model, SineModelParams):
        return sample_vm_sine(model, n, rng)
    raise TypeError(f"unsupported model {type(model).__name__}")


def inject_shift(pairs, kstar: int, delta: tuple[float, float], surface: SurfaceSpec) -> np.ndarray:
    """Rotate observations after the first ``kstar`` by ``(delta_phi, delta_theta)``."""
    out = np.array(pairs, dtype=float, copy=True)
    out[kstar:, 0] = np.mod(out[kstar:, 0] + delta[0], TWO_PI)
    out[kstar:, 1] = np.mod(out[kstar:, 1] + delta[1], surface.theta_period)
    return out


def ks_distance_to_kolmogorov(statistics) -> float:
    """Sup-distance between the empirical CDF of ``statistics`` and the Kolmogorov CDF."""
    x = np.sort(np.asarray(statistics, dtype=float))
    m = x.size
    if m == 0:
        return float("nan")
    cdf = np.array([kolmogorov_cdf(v) for v in x])
    upper = np.arange(1, m + 1) / m - cdf
    lower = cdf - np.arange(0, m) / m
    return float(max(upper.max(), lower.max()))


@dataclass(frozen=True)
class NullExperimentConfig:
    model: ModelParams = field(default_factory=SineModelParams)
    n: int = 1000
    reps: int = 2000
    alpha: float = 0.05
    seed: int = 0
    ratio: float = 0.5
    q_reference: str = "raw"
    workers: int = 1

    def __post_init__(self):
        if self.reps < 100:
            raise AngularDomainError(f"reps must be >= 100, got {self.reps}")
        if self.n < 50:
            raise AngularDomainError(f"n must be >= 50, got {self.n}")
        if not 0.0 < self.alpha < 1.0:
            raise AngularDomainError(f"alpha must lie in (0, 1), got {self.alpha!r}")

    @property
    def surface(self) -> SurfaceSpec:
        return surface_for(self.model, self.ratio)


@dataclass
class NullExperimentResult:
    config: NullExperimentConfig
    statistics: np.ndarray
    rejection_rate: float
    ks_distance: float
    failures: int = 0

    @property
    def critical_value(self) -> float:
        return kolmogorov_quantile(self.config.alpha)


def _run_chunk(args):
    model, n, seed, reps, kstar, delta, surface, q_reference = args
    cfg = TestConfig(surface=surface, q_reference=q_reference)
    stats = np.full(len(reps), np.nan)
    for j, r in enumerate(reps):
        x = draw_sample(model, n, substream(seed, r))
        if kstar is not None:
            x = inject_shift(x, kstar, delta, surface)
        try:
            stats[j] = detect_changepoint(x, cfg).statistic
        except DegeneracyError:
            pass
    return stats


def _replicate(model, n, seed, reps, surface, q_reference, workers, kstar=None, delta=(0.0, 0.0)):
    indices = np.arange(reps)
    if workers <= 1:
        return _run_chunk((model, n, seed, indices, kstar, delta, surface, q_reference))
    chunks = np.array_split(indices, workers * 4)
    jobs = [(model, n, seed, c, kstar, delta, surface, q_reference) for c in chunks if c.size]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return np.concatenate(list(pool.map(_run_chunk, jobs)))


def null_experiment(config: NullExperimentConfig) -> NullExperimentResult:
    """Distribution of the test statistic under no change.

    Replications whose test is numerically degenerate are counted in
    ``failures`` and left out of the rate and the KS distance.
    """
    stats = _replicate(
        config.model, config.n, config.seed, config.reps, config.surface, config.q_reference, config.workers
    )
    ok = stats[~np.isnan(stats)]
    crit = kolmogorov_quantile(config.alpha)
    return NullExperimentResult(
        config=config,
        statistics=ok,
        rejection_rate=float(np.mean(ok > crit)) if ok.size else float("nan"),
        ks_distance=ks_distance_to_kolmogorov(ok),
        failures=int(stats.size - ok.size),
    )


def simulated_critical_value(config: NullExperimentConfig) -> float:
    """Finite-sample upper-``alpha`` point of the statistic, by simulation."""
    res = null_experiment(config)
    return float(np.quantile(res.statistics, 1.0 - config.alpha))


def simulated_p_value(statistic: float, null_statistics) -> float:
    """Monte Carlo p-value ``(1 + #{T >= t}) / (1 + m)``."""
    null_statistics = np.asarray(null_statistics, dtype=float)
    return float((1 + np.sum(null_statistics >= statistic)) / (1 + null_statistics.size))


def _default_grid(half_width):
    return tuple(np.linspace(-half_width, half_width, 21))


@dataclass(frozen=True)
class PowerGridConfig:
    model: ModelParams = field(default_factory=SineModelParams)
    delta_phi_grid: tuple[float, ...] = field(default_factory=lambda: _default_grid(math.pi / 2))
    delta_theta_grid: tuple[float, ...] = field(default_factory=lambda: _default_grid(math.pi / 2))
    n: int = 500
    reps: int = 2000
    alpha: float = 0.05
    seed: int = 0
    kstar_fraction: float = 0.5
    ratio: float = 0.5
    q_reference: str = "raw"
    workers: int = 1

    def __post_init__(self):
        if not len(self.delta_phi_grid) or not len(self.delta_theta_grid):
            raise AngularDomainError("delta grids must be non-empty")
        if not 0.0 < self.kstar_fraction < 1.0:
            raise AngularDomainError(f"kstar_fraction must lie in (0, 1), got {self.kstar_fraction!r}")
        if not 0.0 < self.alpha < 1.0:
            raise AngularDomainError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        object.__setattr__(self, "delta_phi_grid", tuple(float(d) for d in self.delta_phi_grid))
        object.__setattr__(self, "delta_theta_grid", tuple(float(d) for d in self.delta_theta_grid))

    @property
    def surface(self) -> SurfaceSpec:
        return surface_for(self.model, self.ratio)

    @property
    def kstar(self) -> int:
        return int(math.floor(self.kstar_fraction * self.n))


@dataclass
class PowerGridResult:
    """Rejection rates with ``rates[i, j]`` for ``delta_theta_grid[i]`` and ``delta_phi_grid[j]``."""

    config: PowerGridConfig
    rates: np.ndarray
    failures: np.ndarray

    @property
    def delta_phi(self) -> tuple[float, ...]:
        return self.config.delta_phi_grid

    @property
    def delta_theta(self) -> tuple[float, ...]:
        return self.config.delta_theta_grid

    def rate(self, delta_phi: float, delta_theta: float) -> float:
        i = int(np.argmin(np.abs(np.asarray(self.delta_theta) - delta_theta)))
        j = int(np.argmin(np.abs(np.asarray(self.delta_phi) - delta_phi)))
        return float(self.rates[i, j])


def power_grid(config: PowerGridConfig) -> PowerGridResult:
    """Rejection rate for each mean shift on the grid, change after ``kstar``."""
    crit = kolmogorov_quantile(config.alpha)
    shape = (len(config.delta_theta_grid), len(config.delta_phi_grid))
    rates = np.empty(shape)
    failures = np.zeros(shape, dtype=int)
    for i, dt in enumerate(config.delta_theta_grid):
        for j, dp in enumerate(config.delta_phi_grid):
            stats = _replicate(
                config.model,
                config.n,
                config.seed,
                config.reps,
                config.surface,
                config.q_reference,
                config.workers,
                kstar=config.kstar,
                delta=(dp, dt),
            )
            ok = stats[~np.isnan(stats)]
            failures[i, j] = stats.size - ok.size
            rates[i, j] = np.mean(ok > crit) if ok.size else np.nan
    return PowerGridResult(config=config, rates=rates, failures=failures)
