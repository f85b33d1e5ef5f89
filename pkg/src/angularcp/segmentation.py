"""Multiple changepoints by binary segmentation.

Indices in reports are 1-based and ranges are closed, matching the way
segment tables are usually printed ("1-123", "124-348"). A split at ``khat``
of segment ``[s, e]`` produces ``[s, khat]`` and ``[khat + 1, e]``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

from .circular import as_pairs, circular_mean
from .cusum import MIN_TEST_SIZE, TestConfig, detect_changepoint
from .errors import AngularDomainError, DegeneracyError
from .geometry import TWO_PI, SurfaceSpec

logger = logging.getLogger(__name__)

__all__ = [
    "SegmentationConfig",
    "ChangepointEntry",
    "SegmentSummary",
    "ChangepointReport",
    "binary_segment",
    "segment_summaries",
]


@dataclass(frozen=True)
class SegmentationConfig:
    """Recursion policy.

    A segment is tested when it has at least ``min_segment`` observations.
    After a rejection the two halves are tested in turn, provided the parent
    had at least ``2 * min_segment`` observations. ``max_depth=None`` means
    no depth limit (the root is depth 0). With ``bonferroni=True`` a test at
    depth ``d`` uses level ``alpha / 2**d``.
    """

    alpha: float = 0.05
    min_segment: int = 20
    max_depth: int | None = None
    bonferroni: bool = False
    q_reference: str = "raw"

    def __post_init__(self):
        if self.min_segment < MIN_TEST_SIZE:
            raise AngularDomainError(f"min_segment must be >= {MIN_TEST_SIZE}, got {self.min_segment}")
        if not 0.0 < self.alpha < 1.0:
            raise AngularDomainError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if self.max_depth is not None and self.max_depth < 0:
            raise AngularDomainError("max_depth must be non-negative")


@dataclass(frozen=True)
class ChangepointEntry:
    segment_start: int
    segment_end: int
    khat: int
    p_value: float
    statistic: float
    depth: int


@dataclass(frozen=True)
class SegmentSummary:
    start: int
    end: int
    mean_phi: float | None
    mean_theta: float | None

    @property
    def size(self) -> int:
        return self.end - self.start + 1

    @property
    def mean_defined(self) -> bool:
        return self.mean_phi is not None and self.mean_theta is not None


@dataclass
class ChangepointReport:
    n: int
    surface: SurfaceSpec
    config: SegmentationConfig
    entries: list[ChangepointEntry] = field(default_factory=list)
    segments: list[SegmentSummary] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    tests_run: int = 0

    @property
    def changepoints(self) -> list[int]:
        return sorted(e.khat for e in self.entries)


def binary_segment(pairs, surface: SurfaceSpec, config: SegmentationConfig | None = None) -> ChangepointReport:
    """Find multiple mean-direction changes by recursive single-change tests."""
    config = config or SegmentationConfig()
    arr = as_pairs(pairs, surface)
    n = len(arr)
    if n < config.min_segment:
        raise AngularDomainError(f"need at least min_segment={config.min_segment} observations, got {n}")

    report = ChangepointReport(n=n, surface=surface, config=config)
    # explicit stack, right child pushed first so the left branch runs first
    stack = [(1, n, 0)]
    while stack:
        start, end, depth = stack.pop()
        size = end - start + 1
        if size < config.min_segment:
            continue
        if config.max_depth is not None and depth > config.max_depth:
            continue
        alpha = config.alpha / 2**depth if config.bonferroni else config.alpha
        test_cfg = TestConfig(surface=surface, alpha=alpha, q_reference=config.q_reference)
        report.tests_run += 1
        try:
            res = detect_changepoint(arr[start - 1 : end], test_cfg)
        except DegeneracyError as exc:
            msg = f"segment {start}-{end}: test skipped ({exc})"
            logger.warning(msg)
            report.warnings.append(msg)
            continue
        if not res.p_value < alpha:
            continue
        khat = start - 1 + res.khat
        report.entries.append(ChangepointEntry(start, end, khat, res.p_value, res.statistic, depth))
        if size >= 2 * config.min_segment:
            stack.append((khat + 1, end, depth + 1))
            stack.append((start, khat, depth + 1))

    report.entries.sort(key=lambda e: (e.segment_start, -e.segment_end))
    report.segments = segment_summaries(arr, report.changepoints, surface)
    return report


def segment_summaries(pairs, boundaries, surface: SurfaceSpec | None = None) -> list[SegmentSummary]:
    """Circular mean of each coordinate over the segments cut at ``boundaries``.

    ``boundaries`` are 1-based indices of the last observation before each
    change. A segment whose mean resultant vanishes gets ``None`` means.
    """
    surface = surface or SurfaceSpec()
    arr = as_pairs(pairs, surface)
    n = len(arr)
    cuts = list(boundaries)
    if cuts != sorted(cuts) or len(set(cuts)) != len(cuts):
        raise AngularDomainError(f"boundaries must be strictly increasing, got {cuts}")
    if cuts and (cuts[0] < 1 or cuts[-1] >= n):
        raise AngularDomainError(f"boundaries must lie in 1..{n - 1}, got {cuts}")

    out = []
    edges = [0, *cuts, n]
    for lo, hi in zip(edges[:-1], edges[1:]):
        seg = arr[lo:hi]
        out.append(
            SegmentSummary(
                start=lo + 1,
                end=hi,
                mean_phi=_safe_mean(seg[:, 0], TWO_PI),
                mean_theta=_safe_mean(seg[:, 1], surface.theta_period),
            )
        )
    return out


def _safe_mean(values, period):
    try:
        return circular_mean(values, period)
    except DegeneracyError:
        return None


def degrees(rad: float | None) -> float | None:
    return None if rad is None else rad * 180.0 / math.pi
