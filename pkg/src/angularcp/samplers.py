"""Seeded i.i.d. samplers for toroidal and spherical angular data.

Every sampler takes ``seed``, which may be an integer, a
:class:`numpy.random.Generator` or ``None``. Monte Carlo code should derive
one generator per replication with :func:`substream` so results do not
depend on execution order.

Samples are returned as ``(n, 2)`` arrays of ``(phi, theta)`` in radians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AngularDomainError
from .geometry import TWO_PI

__all__ = [
    "SineModelParams",
    "CosineModelParams",
    "FisherParams",
    "substream",
    "sample_von_mises",
    "sample_vm_sine",
    "sample_vm_cosine",
    "sample_fisher",
    "fisher_to_unit_vectors",
    "SampleStats",
]


def substream(seed: int, index: int) -> np.random.Generator:
    """Independent generator for replication ``index`` of a run seeded by ``seed``."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class SineModelParams:
    """Bivariate von Mises sine model.

    Density proportional to
    ``exp(k1 cos(phi - mu_phi) + k2 cos(theta - mu_theta)
    + k3 sin(phi - mu_phi) sin(theta - mu_theta))``.
    """

    mu_phi: float = 0.0
    mu_theta: float = 0.0
    kappa1: float = 2.0
    kappa2: float = 2.0
    kappa3: float = 0.0

    def __post_init__(self):
        if not (self.kappa1 > 0 and self.kappa2 > 0):
            raise AngularDomainError(f"kappa1 and kappa2 must be positive, got {self.kappa1}, {self.kappa2}")
        if not math.isfinite(self.kappa3):
            raise AngularDomainError("kappa3 must be finite")


@dataclass(frozen=True)
class CosineModelParams(SineModelParams):
    """Bivariate von Mises cosine model; ``kappa3`` multiplies
    ``cos(phi - mu_phi - theta + mu_theta)``."""


@dataclass(frozen=True)
class FisherParams:
    """Fisher distribution on the sphere.

    ``alpha`` is the colatitude and ``beta`` the longitude of the mean
    direction; points are ``(cos t, sin t cos p, sin t sin p)`` for
    colatitude ``t`` and longitude ``p``.
    """

    alpha: float = 0.0
    beta: float = 0.0
    kappa: float = 2.0

    def __post_init__(self):
        if not self.kappa >= 0:
            raise AngularDomainError(f"kappa must be non-negative, got {self.kappa!r}")


@dataclass
class SampleStats:
    """Bookkeeping filled in by the rejection samplers."""

    proposed: int = 0
    accepted: int = 0

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.proposed if self.proposed else float("nan")


def sample_von_mises(mu: float, kappa: float, n: int, seed=None) -> np.ndarray:
    """``n`` von Mises draws in ``[0, 2*pi)``; ``kappa = 0`` is uniform."""
    if not kappa >= 0:
        raise AngularDomainError(f"kappa must be non-negative, got {kappa!r}")
    rng = _rng(seed)
    x = rng.vonmises(0.0, kappa, size=n)
    return _wrap2pi(x + mu)


def _wrap2pi(x):
    x = np.mod(x, TWO_PI)
    x[x >= TWO_PI] = 0.0
    return x


def _rejection(params, n, rng, log_weight, stats):
    # Propose from independent von Mises marginals, keep with prob exp(log_weight - |kappa3|).
    out_phi = np.empty(n)
    out_theta = np.empty(n)
    filled = 0
    bound = abs(params.kappa3)
    while filled < n:
        need = n - filled
        batch = max(16, int(need * math.exp(min(bound, 20.0)) * 1.1) + 8)
        dphi = rng.vonmises(0.0, params.kappa1, size=batch)
        dtheta = rng.vonmises(0.0, params.kappa2, size=batch)
        if params.kappa3 == 0.0:
            keep = np.ones(batch, dtype=bool)
        else:
            keep = np.log(rng.random(batch)) < log_weight(dphi, dtheta) - bound
        stats.proposed += batch
        idx = np.flatnonzero(keep)[:need]
        # proposals beyond the last one used are not counted as consumed
        if idx.size == need and need < batch:
            stats.proposed -= batch - (idx[-1] + 1)
        stats.accepted += idx.size
        out_phi[filled : filled + idx.size] = dphi[idx]
        out_theta[filled : filled + idx.size] = dtheta[idx]
        filled += idx.size
    return np.column_stack([_wrap2pi(out_phi + params.mu_phi), _wrap2pi(out_theta + params.mu_theta)])


def sample_vm_sine(params: SineModelParams, n: int, seed=None, stats: SampleStats | None = None) -> np.ndarray:
    """Exact i.i.d. draws from the von Mises sine model by rejection.

    Pass a :class:`SampleStats` to record the acceptance rate.
    """
    k3 = params.kappa3
    return _rejection(
        params, n, _rng(seed), lambda a, b: k3 * np.sin(a) * np.sin(b), stats if stats is not None else SampleStats()
    )


def sample_vm_cosine(params: CosineModelParams, n: int, seed=None, stats: SampleStats | None = None) -> np.ndarray:
    """Exact i.i.d. draws from the von Mises cosine model by rejection."""
    k3 = params.kappa3
    return _rejection(
        params, n, _rng(seed), lambda a, b: k3 * np.cos(a - b), stats if stats is not None else SampleStats()
    )


def _fisher_cos_angle(kappa, u):
    # Inverse CDF of w = cos(angle to mean) with density ~ exp(kappa * w) on [-1, 1].
    if kappa == 0.0:
        return 2.0 * u - 1.0
    w = 1.0 + np.log(u + (1.0 - u) * np.exp(-2.0 * kappa)) / kappa
    return np.clip(w, -1.0, 1.0)


def _mean_frame(alpha, beta):
    mu = np.array([math.cos(alpha), math.sin(alpha) * math.cos(beta), math.sin(alpha) * math.sin(beta)])
    # any unit vector not parallel to mu seeds the orthonormal frame
    helper = np.array([0.0, 1.0, 0.0]) if abs(mu[1]) < 0.9 else np.array([0.0, 0.0, 1.0])
    e1 = helper - (helper @ mu) * mu
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(mu, e1)
    return mu, e1, e2


def fisher_to_unit_vectors(pairs) -> np.ndarray:
    """Map ``(phi, theta)`` rows to ``(cos theta, sin theta cos phi, sin theta sin phi)``."""
    arr = np.asarray(pairs, dtype=float)
    phi, theta = arr[:, 0], arr[:, 1]
    return np.column_stack([np.cos(theta), np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi)])


_BELOW_PI = np.nextafter(math.pi, 0.0)


def sample_fisher(params: FisherParams, n: int, seed=None) -> np.ndarray:
    """Exact i.i.d. draws from the Fisher distribution.

    Returns ``(phi, theta)`` rows: ``phi`` the longitude in ``[0, 2*pi)``,
    ``theta`` the colatitude in ``[0, pi)``.
    """
    rng = _rng(seed)
    w = _fisher_cos_angle(params.kappa, rng.random(n))
    psi = rng.uniform(0.0, TWO_PI, n)
    rad = np.sqrt(np.maximum(0.0, 1.0 - w * w))
    mu, e1, e2 = _mean_frame(params.alpha, params.beta)
    x = w[:, None] * mu + (rad * np.cos(psi))[:, None] * e1 + (rad * np.sin(psi))[:, None] * e2
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    theta = np.minimum(np.arccos(np.clip(x[:, 0], -1.0, 1.0)), _BELOW_PI)
    phi = _wrap2pi(np.arctan2(x[:, 2], x[:, 1]))
    return np.column_stack([phi, theta])
