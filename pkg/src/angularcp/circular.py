"""Circular summaries and the curved dispersion matrix.

Angular samples are plain float arrays. Bivariate samples are arrays of
shape ``(n, 2)`` holding ``(phi, theta)`` per row; ``phi`` always has period
``2*pi`` and ``theta`` has the surface's vertical period (``2*pi`` on the
torus, ``pi`` for sphere colatitudes).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AngularDomainError, SingularDispersionError, UndefinedMeanError
from .geometry import TWO_PI, AngularPair, SurfaceSpec, square_of_angle

__all__ = [
    "AngularSeries",
    "CurvedDispersion",
    "InverseDispersion",
    "as_pairs",
    "circular_mean",
    "center_angle",
    "sgn",
    "curved_variance",
    "area_covariance",
    "curved_dispersion",
    "invert_dispersion",
    "signed_root_areas",
    "DET_EPSILON",
    "RESULTANT_EPSILON",
]

DET_EPSILON = 1e-12
RESULTANT_EPSILON = 1e-12


@dataclass(frozen=True)
class AngularSeries:
    """An ordered univariate angular sample with its period (``2*pi`` or ``pi``)."""

    values: np.ndarray
    period: float = TWO_PI

    def __post_init__(self):
        if not (math.isclose(self.period, TWO_PI) or math.isclose(self.period, math.pi)):
            raise AngularDomainError(f"period must be 2*pi or pi, got {self.period!r}")
        vals = np.asarray(self.values, dtype=float)
        if not np.all(np.isfinite(vals)):
            raise AngularDomainError("angular series contains non-finite values")
        vals = np.mod(vals, self.period)
        vals[vals >= self.period] = 0.0
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)


def as_pairs(pairs, surface: SurfaceSpec | None = None) -> np.ndarray:
    """Coerce pairs into a float array of shape ``(n, 2)``.

    Accepts an ``(n, 2)`` array-like or a sequence of :class:`AngularPair`.
    When ``surface`` is given the angles are reduced into their half-open
    ranges.
    """
    if len(pairs) and isinstance(pairs[0], AngularPair):
        arr = np.array([p.as_tuple() for p in pairs], dtype=float)
    else:
        arr = np.array(pairs, dtype=float)
        if arr.size == 0:
            arr = arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise AngularDomainError(f"expected an (n, 2) array of (phi, theta), got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise AngularDomainError("pairs contain non-finite values")
    if surface is not None:
        arr[:, 0] = center_angle(arr[:, 0], 0.0, TWO_PI)
        arr[:, 1] = center_angle(arr[:, 1], 0.0, surface.theta_period)
    return arr


def _values_and_period(series, period):
    if isinstance(series, AngularSeries):
        return series.values, series.period
    return np.asarray(series, dtype=float), period


def circular_mean(series, period: float = TWO_PI) -> float:
    """Mean direction of an angular sample, returned in ``[0, period)``.

    With ``period = pi`` the angles are doubled before averaging and the
    result halved, so axial data such as colatitudes stay in range.

    Raises :class:`UndefinedMeanError` when the sample is empty or its mean
    resultant length is below ``1e-12``.
    """
    values, period = _values_and_period(series, period)
    if values.size == 0:
        raise UndefinedMeanError("mean direction of an empty sample is undefined")
    scale = TWO_PI / period
    c = np.mean(np.cos(scale * values))
    s = np.mean(np.sin(scale * values))
    if math.hypot(c, s) < RESULTANT_EPSILON:
        raise UndefinedMeanError(
            f"mean resultant length {math.hypot(c, s):.3e} is zero; mean direction undefined"
        )
    return float(center_angle(math.atan2(s, c) / scale, 0.0, period))


def center_angle(angle, mean, period: float = TWO_PI):
    """``(angle - mean) mod period`` in ``[0, period)``."""
    out = np.mod(np.asarray(angle, dtype=float) - mean, period)
    out = np.where(out >= period, 0.0, out)
    return float(out) if np.ndim(out) == 0 else out


def sgn(angle):
    """+1 for angles below ``pi`` and -1 otherwise (so ``sgn(pi) == -1``)."""
    out = np.where(np.asarray(angle) < math.pi, 1.0, -1.0)
    return float(out) if np.ndim(out) == 0 else out


def curved_variance(series, surface: SurfaceSpec, mean: float | None = None, period: float | None = None) -> float:
    """Plug-in curved variance: the average square of the mean-centred angles.

    ``period`` defaults to the surface's vertical period when ``series`` is a
    raw array; pass ``period=2*pi`` for horizontal angles on the sphere. When
    ``mean`` is omitted the sample circular mean is used.
    """
    if period is None:
        period = surface.theta_period
    values, period = _values_and_period(series, period)
    if values.size == 0:
        raise UndefinedMeanError("curved variance of an empty sample is undefined")
    if mean is None:
        mean = circular_mean(values, period)
    return float(np.mean(square_of_angle(surface, center_angle(values, mean, period))))


def signed_root_areas(centered: np.ndarray, surface: SurfaceSpec):
    """Per-observation squares and signed root-areas of centred pairs.

    Returns ``(a, b, v)`` where ``a`` and ``b`` are the squares of the
    centred ``phi`` and ``theta`` and ``v`` is the ``(n, 2)`` array
    ``(sgn(phi_c) * sqrt(a), sgn(theta_c) * sqrt(b))``. On the sphere the
    colatitude carries no sign.
    """
    a = square_of_angle(surface, centered[:, 0])
    b = square_of_angle(surface, centered[:, 1])
    s_phi = sgn(centered[:, 0])
    s_theta = sgn(centered[:, 1]) if surface.is_torus else np.ones(len(centered))
    v = np.column_stack([s_phi * np.sqrt(a), s_theta * np.sqrt(b)])
    return np.atleast_1d(a), np.atleast_1d(b), v


def _marginal_means(arr, surface):
    return (circular_mean(arr[:, 0], TWO_PI), circular_mean(arr[:, 1], surface.theta_period))


def _center_pairs(arr, surface, means):
    mu_phi, mu_theta = means
    return np.column_stack(
        [center_angle(arr[:, 0], mu_phi, TWO_PI), center_angle(arr[:, 1], mu_theta, surface.theta_period)]
    )


def area_covariance(pairs, surface: SurfaceSpec, means: tuple[float, float] | None = None) -> float:
    """Average signed geometric mean of the two squares over centred pairs."""
    arr = as_pairs(pairs)
    if len(arr) == 0:
        raise UndefinedMeanError("area covariance of an empty sample is undefined")
    if means is None:
        means = _marginal_means(arr, surface)
    _, _, v = signed_root_areas(_center_pairs(arr, surface, means), surface)
    return float(np.mean(v[:, 0] * v[:, 1]))


@dataclass(frozen=True)
class InverseDispersion:
    i11: float
    i22: float
    i12: float

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.i11, self.i12], [self.i12, self.i22]])


@dataclass(frozen=True)
class CurvedDispersion:
    """Symmetric 2x2 matrix ``[[cv_phi, acov], [acov, cv_theta]]``."""

    cv_phi: float
    cv_theta: float
    acov: float

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.cv_phi, self.acov], [self.acov, self.cv_theta]])

    @property
    def det(self) -> float:
        return self.cv_phi * self.cv_theta - self.acov * self.acov

    @property
    def trace(self) -> float:
        return self.cv_phi + self.cv_theta


def curved_dispersion(
    pairs, surface: SurfaceSpec, means: tuple[float, float] | None = None
) -> CurvedDispersion:
    """Estimate the curved dispersion matrix from a bivariate angular sample.

    All three entries are computed on the same mean-centred angles. With
    ``means=None`` the marginal sample circular means are plugged in.
    """
    arr = as_pairs(pairs)
    if len(arr) < 2:
        raise AngularDomainError(f"curved dispersion needs at least 2 pairs, got {len(arr)}")
    if means is None:
        means = _marginal_means(arr, surface)
    a, b, v = signed_root_areas(_center_pairs(arr, surface, means), surface)
    return CurvedDispersion(
        cv_phi=float(np.mean(a)), cv_theta=float(np.mean(b)), acov=float(np.mean(v[:, 0] * v[:, 1]))
    )


def invert_dispersion(m: CurvedDispersion, eps: float = DET_EPSILON) -> InverseDispersion:
    det = m.det
    if not det > eps:
        raise SingularDispersionError(det, eps)
    return InverseDispersion(i11=m.cv_theta / det, i22=m.cv_phi / det, i12=-m.acov / det)
