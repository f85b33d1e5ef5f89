"""Area decompositions of the curved torus and the sphere.

Two diagonally opposite points ``(phi1, theta1)`` and ``(phi2, theta2)`` cut
the parameter rectangle into four regions::

    R1 = [phi1, phi2] x [theta1, theta2]
    R2 = complement(phi) x [theta1, theta2]
    R3 = [phi1, phi2] x complement(theta)
    R4 = complement(phi) x complement(theta)

Each region's surface area is divided by the total area of the surface, so
the results are proportions that do not depend on the overall scale. The
torus proportions depend on the radius ratio ``r / R`` only.

All area functions are vectorised over their angle arguments.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import AngularDomainError

TWO_PI = 2.0 * math.pi

__all__ = [
    "SurfaceKind",
    "SurfaceSpec",
    "AngularPair",
    "RegionAreas",
    "torus",
    "sphere",
    "region_areas",
    "proportionate_area",
    "square_of_angle",
    "numeric_surface_area",
    "area_element",
]


class SurfaceKind(str, enum.Enum):
    TORUS = "torus"
    SPHERE = "sphere"


@dataclass(frozen=True)
class SurfaceSpec:
    """The surface angular observations live on.

    ``ratio`` is ``r / R`` (tube radius over centre-line radius) and only
    matters for the torus.
    """

    kind: SurfaceKind = SurfaceKind.TORUS
    ratio: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "kind", SurfaceKind(self.kind))
        if self.kind is SurfaceKind.TORUS:
            if not (0.0 < self.ratio <= 1.0) or not math.isfinite(self.ratio):
                raise AngularDomainError(
                    f"torus radius ratio must lie in (0, 1], got {self.ratio!r}"
                )

    @property
    def is_torus(self) -> bool:
        return self.kind is SurfaceKind.TORUS

    @property
    def theta_period(self) -> float:
        """Modulus of the vertical angle: 2*pi on the torus, pi on the sphere."""
        return TWO_PI if self.is_torus else math.pi

    def __str__(self):
        if self.is_torus:
            return f"torus(ratio={self.ratio:g})"
        return "sphere"


def torus(ratio: float = 0.5) -> SurfaceSpec:
    return SurfaceSpec(SurfaceKind.TORUS, ratio)


def sphere() -> SurfaceSpec:
    return SurfaceSpec(SurfaceKind.SPHERE, 1.0)


@dataclass(frozen=True)
class AngularPair:
    """One bivariate angular observation, normalised into its half-open range."""

    phi: float
    theta: float
    surface: SurfaceSpec = SurfaceSpec()

    def __post_init__(self):
        if not (math.isfinite(self.phi) and math.isfinite(self.theta)):
            raise AngularDomainError(f"non-finite angle in ({self.phi}, {self.theta})")
        object.__setattr__(self, "phi", _wrap(self.phi, TWO_PI))
        object.__setattr__(self, "theta", _wrap(self.theta, self.surface.theta_period))

    def as_tuple(self) -> tuple[float, float]:
        return (self.phi, self.theta)


def _wrap(x, period):
    out = np.mod(x, period)
    # np.mod can round a tiny negative input up to exactly `period`
    out = np.where(out >= period, 0.0, out)
    if np.ndim(out) == 0:
        return float(out)
    return out


class RegionAreas(NamedTuple):
    """Normalised areas of the four regions; they sum to one."""

    a1: np.ndarray | float
    a2: np.ndarray | float
    a3: np.ndarray | float
    a4: np.ndarray | float

    def minimum(self):
        return np.minimum(np.minimum(self.a1, self.a2), np.minimum(self.a3, self.a4))


def _check_range(x, upper, name):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise AngularDomainError(f"{name} contains non-finite values")
    if np.any(x < 0.0) or np.any(x >= upper):
        bad = x[(x < 0.0) | (x >= upper)].ravel()[0]
        raise AngularDomainError(f"{name}={bad!r} outside [0, {upper:.6g})")
    return x


def _vertical_fraction(surface, t_lo, t_hi):
    # Fraction of the total area in the band t_lo <= theta <= t_hi (full phi range).
    if surface.is_torus:
        rho = surface.ratio
        return ((t_hi - t_lo) + rho * (np.sin(t_hi) - np.sin(t_lo))) / TWO_PI
    return (np.cos(t_lo) - np.cos(t_hi)) / 2.0


def region_areas(surface: SurfaceSpec, p1, p2) -> RegionAreas:
    """Normalised areas of the four regions cut out by two points.

    ``p1`` and ``p2`` are ``(phi, theta)`` pairs (or ``AngularPair``s, or
    arrays of shape ``(..., 2)``). The points are reordered so that the
    first region is ``[min phi, max phi] x [min theta, max theta]``.
    """
    phi1, theta1 = _split(p1)
    phi2, theta2 = _split(p2)
    period = surface.theta_period
    phi1 = _check_range(phi1, TWO_PI, "phi")
    phi2 = _check_range(phi2, TWO_PI, "phi")
    theta1 = _check_range(theta1, period, "theta")
    theta2 = _check_range(theta2, period, "theta")

    u = np.abs(phi2 - phi1) / TWO_PI
    w = _vertical_fraction(surface, np.minimum(theta1, theta2), np.maximum(theta1, theta2))
    return RegionAreas(*_as_float(u * w, (1.0 - u) * w, u * (1.0 - w), (1.0 - u) * (1.0 - w)))


def _as_float(*arrays):
    if all(np.ndim(a) == 0 for a in arrays):
        return tuple(float(a) for a in arrays)
    return arrays


def _split(p):
    if isinstance(p, AngularPair):
        return p.phi, p.theta
    arr = np.asarray(p, dtype=float)
    if arr.shape[-1:] != (2,):
        raise AngularDomainError(f"expected (phi, theta) pairs, got shape {arr.shape}")
    return arr[..., 0], arr[..., 1]


def proportionate_area(surface: SurfaceSpec, p1, p2):
    """Smallest of the four normalised region areas; always in ``[0, 1/4]``."""
    return region_areas(surface, p1, p2).minimum()


def square_of_angle(surface: SurfaceSpec, angle):
    """Proportionate area between ``(0, 0)`` and ``(angle, angle)``.

    The torus accepts angles in ``[0, 2*pi)`` and peaks at 1/4 for
    ``angle = pi``.

    On the sphere the same closed form is evaluated, which requires the
    vertical extent ``1 - cos(angle)``. This is well defined for any angle,
    so horizontal (longitude) angles in ``[0, 2*pi)`` are accepted too; the
    result is symmetric under ``angle -> 2*pi - angle``, vanishes at 0 and
    at ``pi``, and peaks at 1/8 for ``angle = pi/2``.
    """
    t = _check_range(angle, TWO_PI, "angle")
    u = t / TWO_PI
    if surface.is_torus:
        w = (t + surface.ratio * np.sin(t)) / TWO_PI
    else:
        w = (1.0 - np.cos(t)) / 2.0
    out = np.minimum(np.minimum(u * w, (1.0 - u) * w), np.minimum(u * (1.0 - w), (1.0 - u) * (1.0 - w)))
    # w can dip a hair below zero near t = 0 in floating point
    out = np.maximum(out, 0.0)
    return float(out) if np.ndim(out) == 0 else out


# -- quadrature oracle ------------------------------------------------------


def _embedding_partials(surface, phi, theta):
    """Partial derivatives X_phi, X_theta of the embedding in R^3 (R = 1)."""
    if surface.is_torus:
        r = surface.ratio
        radial = 1.0 + r * np.cos(theta)
        x_phi = np.stack([-radial * np.sin(phi), radial * np.cos(phi), np.zeros_like(phi)])
        x_theta = np.stack(
            [-r * np.sin(theta) * np.cos(phi), -r * np.sin(theta) * np.sin(phi), r * np.cos(theta)]
        )
    else:
        x_phi = np.stack([-np.sin(theta) * np.sin(phi), np.sin(theta) * np.cos(phi), np.zeros_like(phi)])
        x_theta = np.stack([np.cos(theta) * np.cos(phi), np.cos(theta) * np.sin(phi), -np.sin(theta)])
    return x_phi, x_theta


def area_element(surface: SurfaceSpec, phi, theta):
    """``sqrt(EG - F^2)`` from the first fundamental form of the embedding."""
    phi = np.asarray(phi, dtype=float)
    theta = np.asarray(theta, dtype=float)
    phi, theta = np.broadcast_arrays(phi, theta)
    x_phi, x_theta = _embedding_partials(surface, phi, theta)
    e = np.sum(x_phi * x_phi, axis=0)
    f = np.sum(x_phi * x_theta, axis=0)
    g = np.sum(x_theta * x_theta, axis=0)
    return np.sqrt(np.maximum(e * g - f * f, 0.0))


_GL_NODES = 96
_gl_x, _gl_w = np.polynomial.legendre.leggauss(_GL_NODES)


def _gauss_rect(surface, phi_lo, phi_hi, theta_lo, theta_hi):
    if phi_hi <= phi_lo or theta_hi <= theta_lo:
        return 0.0
    hp = 0.5 * (phi_hi - phi_lo)
    ht = 0.5 * (theta_hi - theta_lo)
    phis = phi_lo + hp * (_gl_x + 1.0)
    thetas = theta_lo + ht * (_gl_x + 1.0)
    grid = area_element(surface, phis[:, None], thetas[None, :])
    return float(hp * ht * (_gl_w @ grid @ _gl_w))


def _total_area(surface):
    return _gauss_rect(surface, 0.0, TWO_PI, 0.0, surface.theta_period)


def numeric_surface_area(surface: SurfaceSpec, phi_range, theta_range) -> float:
    """Normalised area of a parameter rectangle by Gauss-Legendre quadrature.

    Integrates the first-fundamental-form area element directly, so it is an
    independent check on :func:`region_areas`. Empty or reversed intervals
    contribute zero.
    """
    (p0, p1), (t0, t1) = phi_range, theta_range
    return _gauss_rect(surface, p0, p1, t0, t1) / _total_area(surface)
