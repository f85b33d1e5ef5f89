"""Single-changepoint tests for the mean direction of bivariate angular data.

The pipeline for a sample of ``n`` pairs:

1. estimate the marginal mean directions and centre the angles;
2. estimate the curved dispersion matrix and invert it;
3. form the per-observation quadratic form ``Q_i = v_i' S^{-1} v_i`` with
   ``v_i`` the signed root-areas of the centred pair;
   (by default ``v_i`` uses the angles as observed, measured from the
   origin ``(0, 0)``; only the dispersion matrix is built from centred
   angles);
4. build the standardised CUSUM ``U(k)`` of the Q-sequence and take
   ``max_{1 <= k < n} |U(k)|``;
5. compare against the Kolmogorov distribution (the law of the supremum of
   the absolute Brownian bridge).

The same code serves the torus and the sphere; the surface decides the
period of ``theta``, the area formulas and whether ``theta`` carries a sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .circular import (
    DET_EPSILON,
    CurvedDispersion,
    InverseDispersion,
    _center_pairs,
    _marginal_means,
    as_pairs,
    curved_dispersion,
    invert_dispersion,
    signed_root_areas,
)
from .errors import AngularDomainError, DegenerateVarianceError
from .geometry import SurfaceSpec

__all__ = [
    "TestConfig",
    "CusumResult",
    "q_sequence",
    "cusum",
    "max_abs_statistic",
    "kolmogorov_sf",
    "kolmogorov_cdf",
    "kolmogorov_quantile",
    "detect_changepoint",
    "MIN_TEST_SIZE",
]

MIN_TEST_SIZE = 4


@dataclass(frozen=True)
class TestConfig:
    __test__ = False  # keep pytest from collecting this

    surface: SurfaceSpec = field(default_factory=SurfaceSpec)
    alpha: float = 0.05
    det_epsilon: float = DET_EPSILON
    # "raw": Q from the observed angles; "centered": Q from mean-centred angles.
    # The centred variant is invariant to rotations of the data but has no
    # power against changes that are symmetric about the pooled mean.
    q_reference: str = "raw"

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise AngularDomainError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if self.q_reference not in ("raw", "centered"):
            raise AngularDomainError(f"q_reference must be 'raw' or 'centered', got {self.q_reference!r}")


@dataclass(frozen=True)
class CusumResult:
    """Outcome of one changepoint test.

    ``khat`` is 1-based: the estimated change happens after observation
    ``khat``, so the first segment is ``1..khat``.
    """

    q: np.ndarray
    u: np.ndarray
    statistic: float
    khat: int
    p_value: float
    s_q: float
    critical_value: float = float("nan")
    reject: bool = False
    means: tuple[float, float] = (float("nan"), float("nan"))
    dispersion: CurvedDispersion | None = None
    surface: SurfaceSpec | None = None
    alpha: float | None = None

    @property
    def n(self) -> int:
        return len(self.q)


def q_sequence(
    pairs, inv: InverseDispersion, surface: SurfaceSpec, means: tuple[float, float] | None = None
) -> np.ndarray:
    """Mahalanobis-type quadratic form ``v' S^{-1} v`` of each observation.

    ``v`` holds the signed root-squares of the two angles. Angles are taken
    as observed unless ``means`` is given, in which case they are centred
    on it first.
    """
    arr = as_pairs(pairs, surface)
    if means is not None:
        arr = _center_pairs(arr, surface, means)
    _, _, v = signed_root_areas(arr, surface)
    x, y = v[:, 0], v[:, 1]
    return inv.i11 * x * x + inv.i22 * y * y + 2.0 * inv.i12 * x * y


def cusum(q) -> tuple[np.ndarray, float]:
    """Standardised CUSUM path ``U(1..n)`` and the sample SD of ``q``.

    ``U(k) = (sum_{i<=k} q_i - k * mean(q)) / sqrt(n * var(q))`` with the
    ``n - 1`` variance divisor.
    """
    q = np.asarray(q, dtype=float)
    n = q.size
    if n < 2:
        raise AngularDomainError(f"CUSUM needs at least 2 values, got {n}")
    centered = q - q.mean()
    s_q = float(np.sqrt(np.sum(centered * centered) / (n - 1)))
    # relative threshold: a constant sequence leaves only rounding residue
    if s_q <= 1e-12 * max(1.0, float(np.max(np.abs(q)))):
        raise DegenerateVarianceError("Q-sequence is constant; nothing to test")
    u = np.cumsum(centered) / math.sqrt(n * s_q * s_q)
    return u, s_q


def max_abs_statistic(u) -> tuple[float, int]:
    """``max |U(k)|`` over ``k = 1..n-1`` and its smallest 1-based argmax."""
    u = np.asarray(u, dtype=float)
    if u.size == 0:
        raise AngularDomainError("empty CUSUM path")
    inner = np.abs(u[:-1]) if u.size > 1 else np.abs(u)
    k = int(np.argmax(inner))
    return float(inner[k]), k + 1


# -- Kolmogorov distribution ---------------------------------------------

_SERIES_TOL = 1e-16


def kolmogorov_sf(x: float) -> float:
    """``P(K > x)`` for ``K = sup |B_0(u)|`` over the standard Brownian bridge.

    Uses ``2 * sum_{k>=1} (-1)^(k-1) exp(-2 k^2 x^2)``, truncated once a term
    drops below 1e-16. Below ``x = 0.8`` the alternating series converges
    slowly and cancels badly, so the dual theta-function series for the CDF
    is used there instead.
    """
    x = float(x)
    if not x >= 0.0:
        raise AngularDomainError(f"Kolmogorov survival function needs x >= 0, got {x!r}")
    if x == 0.0:
        return 1.0
    if x < 0.8:
        return 1.0 - _cdf_small(x)
    total = 0.0
    k = 1
    while True:
        term = math.exp(-2.0 * k * k * x * x)
        total += term if k % 2 else -term
        if term < _SERIES_TOL:
            break
        k += 1
    return min(1.0, max(0.0, 2.0 * total))


def _cdf_small(x):
    # sqrt(2 pi)/x * sum_{k>=1} exp(-(2k-1)^2 pi^2 / (8 x^2))
    c = math.pi * math.pi / (8.0 * x * x)
    total = 0.0
    k = 1
    while True:
        term = math.exp(-(2 * k - 1) ** 2 * c)
        total += term
        if term < _SERIES_TOL * max(total, 1e-300) or term == 0.0:
            break
        k += 1
    return min(1.0, math.sqrt(2.0 * math.pi) / x * total)


def kolmogorov_cdf(x: float) -> float:
    if x <= 0.0:
        return 0.0
    if x < 0.8:
        return _cdf_small(x)
    return 1.0 - kolmogorov_sf(x)


def kolmogorov_quantile(alpha: float) -> float:
    """Upper-``alpha`` point ``x`` with ``kolmogorov_sf(x) == alpha``."""
    if not 0.0 < alpha < 1.0:
        raise AngularDomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    lo, hi = 0.1, 5.0
    f = lambda x: kolmogorov_sf(x) - alpha  # noqa: E731
    while f(lo) < 0.0 and lo > 1e-3:
        lo /= 2.0
    while f(hi) > 0.0 and hi < 40.0:
        hi *= 2.0
    return float(brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500))


# -- full test ------------------------------------------------------------


def detect_changepoint(pairs, config: TestConfig | None = None, *, surface: SurfaceSpec | None = None) -> CusumResult:
    """Test a bivariate angular sample for a single change in mean direction.

    ``pairs`` is an ``(n, 2)`` array of ``(phi, theta)`` in radians (or a
    list of :class:`AngularPair`). Passing ``surface`` alone is a shortcut
    for ``TestConfig(surface=surface)``.

    Raises :class:`~angularcp.errors.UndefinedMeanError`,
    :class:`~angularcp.errors.SingularDispersionError` or
    :class:`~angularcp.errors.DegenerateVarianceError` when the sample is
    too degenerate to test.
    """
    if config is None:
        config = TestConfig(surface=surface if surface is not None else SurfaceSpec())
    surface = config.surface
    arr = as_pairs(pairs, surface)
    if len(arr) < MIN_TEST_SIZE:
        raise AngularDomainError(f"a test needs at least {MIN_TEST_SIZE} observations, got {len(arr)}")

    means = _marginal_means(arr, surface)
    disp = curved_dispersion(arr, surface, means)
    inv = invert_dispersion(disp, config.det_epsilon)
    q = q_sequence(arr, inv, surface, means if config.q_reference == "centered" else None)
    u, s_q = cusum(q)
    stat, khat = max_abs_statistic(u)
    crit = _critical_value(config.alpha)
    return CusumResult(
        q=q,
        u=u,
        statistic=stat,
        khat=khat,
        p_value=kolmogorov_sf(stat),
        s_q=s_q,
        critical_value=crit,
        reject=stat > crit,
        means=means,
        dispersion=disp,
        surface=surface,
        alpha=config.alpha,
    )


_crit_cache: dict[float, float] = {}


def _critical_value(alpha):
    if alpha not in _crit_cache:
        _crit_cache[alpha] = kolmogorov_quantile(alpha)
    return _crit_cache[alpha]
