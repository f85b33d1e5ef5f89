"""CSV ingestion of angular series and JSON/CSV report rendering."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from decimal import Decimal
from pathlib import Path

import numpy as np

from .cusum import CusumResult
from .errors import AngularDomainError
from .geometry import TWO_PI, SurfaceSpec
from .segmentation import ChangepointReport, SegmentSummary
from .simulation import NullExperimentResult, PowerGridResult

__all__ = [
    "DataFormatError",
    "DatasetSpec",
    "AngularDataset",
    "parse_angular_csv",
    "emit_report",
    "format_angle",
]


class DataFormatError(ValueError):
    """Input data could not be turned into angular pairs.

    ``rows`` lists ``(line_number, message)`` for every rejected row.
    """

    def __init__(self, message: str, rows: list[tuple[int, str]] | None = None):
        self.rows = rows or []
        if self.rows:
            detail = "; ".join(f"line {ln}: {msg}" for ln, msg in self.rows[:10])
            more = f" (+{len(self.rows) - 10} more)" if len(self.rows) > 10 else ""
            message = f"{message}: {detail}{more}"
        super().__init__(message)


@dataclass(frozen=True)
class DatasetSpec:
    """Where and how to read a bivariate angular series.

    Columns are given by header name or 0-based position. By default the
    first two non-timestamp columns are ``phi`` and ``theta``. With
    ``latlon=True`` the columns hold latitude and longitude (in that order
    by default); latitude is mapped to colatitude ``theta = pi/2 - lat``
    and longitude becomes ``phi``.
    """

    path: str | Path
    units: str = "deg"
    surface: SurfaceSpec = field(default_factory=SurfaceSpec)
    phi_col: str | int | None = None
    theta_col: str | int | None = None
    time_col: str | int | None = None
    latlon: bool = False

    def __post_init__(self):
        if self.units not in ("deg", "rad"):
            raise AngularDomainError(f"units must be 'deg' or 'rad', got {self.units!r}")


@dataclass
class AngularDataset:
    pairs: np.ndarray
    timestamps: list[str] | None = None

    def __len__(self):
        return len(self.pairs)


def _resolve(col, header, default):
    if col is None:
        return default
    if isinstance(col, int) or (isinstance(col, str) and col.isdigit() and col not in header):
        idx = int(col)
        if not 0 <= idx < len(header):
            raise DataFormatError(f"column index {idx} out of range for {len(header)} columns")
        return idx
    if col not in header:
        raise DataFormatError(f"column {col!r} not found in header {header}")
    return header.index(col)


def parse_angular_csv(spec: DatasetSpec) -> AngularDataset:
    """Read a headed, comma-separated file into an ``(n, 2)`` radian array.

    Every data row must parse; otherwise :class:`DataFormatError` lists all
    offending rows with their line numbers.
    """
    path = Path(spec.path)
    try:
        text = path.read_text(encoding="utf-8-sig")
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc}") from exc

    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None:
        raise DataFormatError(f"{path}: empty file, expected a header row and at least one data row (found 0)")
    header = [h.strip() for h in header]

    time_idx = _resolve(spec.time_col, header, None)
    free = [i for i in range(len(header)) if i != time_idx]
    if len(free) < 2 and (spec.phi_col is None or spec.theta_col is None):
        raise DataFormatError(f"{path}: need two angle columns, header has {header}")
    if spec.latlon:
        theta_idx = _resolve(spec.theta_col, header, free[0] if free else None)
        phi_idx = _resolve(spec.phi_col, header, free[1] if len(free) > 1 else None)
    else:
        phi_idx = _resolve(spec.phi_col, header, free[0] if free else None)
        theta_idx = _resolve(spec.theta_col, header, free[1] if len(free) > 1 else None)

    scale = math.pi / 180.0 if spec.units == "deg" else 1.0
    period = spec.surface.theta_period
    pairs, stamps, bad = [], [], []
    for row in reader:
        line = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        try:
            phi = float(row[phi_idx]) * scale
            theta = float(row[theta_idx]) * scale
        except (IndexError, ValueError):
            bad.append((line, f"unparseable row {row!r}"))
            continue
        if not (math.isfinite(phi) and math.isfinite(theta)):
            bad.append((line, f"non-finite value in {row!r}"))
            continue
        if spec.latlon:
            if not -math.pi / 2 < theta <= math.pi / 2:
                bad.append((line, f"latitude {row[theta_idx]} outside (-90, 90] degrees"))
                continue
            theta = math.pi / 2 - theta
        pairs.append((_reduce(phi, TWO_PI), _reduce(theta, period)))
        if time_idx is not None:
            stamps.append(row[time_idx].strip() if time_idx < len(row) else "")
    if bad:
        raise DataFormatError(f"{path}: {len(bad)} row(s) rejected", bad)
    if not pairs:
        raise DataFormatError(f"{path}: no data rows (found 0)")
    return AngularDataset(np.array(pairs, dtype=float), stamps if time_idx is not None else None)


def _reduce(x, period):
    r = math.fmod(x, period)
    if r < 0:
        r += period
    return 0.0 if r >= period else r


# -- rendering --------------------------------------------------------------


def _dec(x: float | None, places: int):
    if x is None or (isinstance(x, float) and not math.isfinite(x)):
        return None
    return Decimal(f"{x:.{places}f}")


def _degrees(rad):
    return None if rad is None else rad * 180.0 / math.pi


def format_angle(rad: float | None) -> str:
    """``'4.88 (279.60)'``: radians then degrees, two decimals each."""
    if rad is None:
        return "undefined"
    return f"{rad:.2f} ({_degrees(rad):.2f})"


def _to_json(obj, indent=2, level=0) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, Decimal):
        return str(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return repr(float(obj)) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}"{k}": {_to_json(v, indent, level + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(_to_json(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _to_json(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _segment_dict(s: SegmentSummary):
    return {
        "segment": f"{s.start}-{s.end}",
        "start": s.start,
        "end": s.end,
        "mean_phi": _dec(s.mean_phi, 6),
        "mean_phi_deg": _dec(_degrees(s.mean_phi), 4),
        "mean_phi_display": format_angle(s.mean_phi),
        "mean_theta": _dec(s.mean_theta, 6),
        "mean_theta_deg": _dec(_degrees(s.mean_theta), 4),
        "mean_theta_display": format_angle(s.mean_theta),
    }


def _report_dict(r: ChangepointReport):
    return {
        "kind": "segmentation",
        "surface": r.surface.kind.value,
        "ratio": r.surface.ratio if r.surface.is_torus else None,
        "n": r.n,
        "alpha": r.config.alpha,
        "min_segment": r.config.min_segment,
        "tests_run": r.tests_run,
        "changepoints": [
            {
                "segment": f"{e.segment_start}-{e.segment_end}",
                "segment_start": e.segment_start,
                "segment_end": e.segment_end,
                "khat": e.khat,
                "statistic": _dec(e.statistic, 4),
                "p_value": _dec(e.p_value, 4),
            }
            for e in r.entries
        ],
        "segments": [_segment_dict(s) for s in r.segments],
        "warnings": list(r.warnings),
    }


def _cusum_dict(r: CusumResult):
    d = r.dispersion
    return {
        "kind": "single_test",
        "surface": None if r.surface is None else r.surface.kind.value,
        "ratio": r.surface.ratio if r.surface is not None and r.surface.is_torus else None,
        "n": r.n,
        "alpha": r.alpha,
        "statistic": _dec(r.statistic, 4),
        "khat": r.khat,
        "p_value": _dec(r.p_value, 4),
        "critical_value": _dec(r.critical_value, 4),
        "reject": bool(r.reject),
        "s_q": _dec(r.s_q, 6),
        "mean_phi": _dec(r.means[0], 6),
        "mean_phi_display": format_angle(r.means[0]),
        "mean_theta": _dec(r.means[1], 6),
        "mean_theta_display": format_angle(r.means[1]),
        "dispersion": None
        if d is None
        else {"cv_phi": _dec(d.cv_phi, 8), "cv_theta": _dec(d.cv_theta, 8), "acov": _dec(d.acov, 8)},
        "u": [_dec(v, 6) for v in r.u],
    }


def _null_dict(r: NullExperimentResult):
    c = r.config
    return {
        "kind": "null_experiment",
        "model": type(c.model).__name__,
        "n": c.n,
        "reps": c.reps,
        "alpha": c.alpha,
        "seed": c.seed,
        "rejection_rate": _dec(r.rejection_rate, 4),
        "ks_distance": _dec(r.ks_distance, 4),
        "failures": r.failures,
        "statistics": [_dec(s, 6) for s in r.statistics],
    }


def _power_dict(r: PowerGridResult):
    c = r.config
    return {
        "kind": "power_grid",
        "model": type(c.model).__name__,
        "n": c.n,
        "reps": c.reps,
        "alpha": c.alpha,
        "seed": c.seed,
        "kstar": c.kstar,
        "delta_phi": [_dec(v, 6) for v in c.delta_phi_grid],
        "delta_theta": [_dec(v, 6) for v in c.delta_theta_grid],
        "rates": [[_dec(v, 4) for v in row] for row in r.rates],
    }


def _report_csv(r: ChangepointReport, w):
    w.writerow(["segment", "khat", "p_value"])
    for e in r.entries:
        w.writerow([f"{e.segment_start}-{e.segment_end}", e.khat, f"{e.p_value:.4f}"])
    w.writerow([])
    w.writerow(["segment", "mean_phi", "mean_theta"])
    for s in r.segments:
        w.writerow([f"{s.start}-{s.end}", format_angle(s.mean_phi), format_angle(s.mean_theta)])


def _cusum_csv(r: CusumResult, w):
    w.writerow(["k", "q", "u"])
    for k, (q, u) in enumerate(zip(r.q, r.u), start=1):
        w.writerow([k, f"{q:.8f}", f"{u:.8f}"])


def _null_csv(r: NullExperimentResult, w):
    w.writerow(["rep", "statistic"])
    for i, s in enumerate(r.statistics, start=1):
        w.writerow([i, f"{s:.6f}"])


def _power_csv(r: PowerGridResult, w):
    w.writerow(["dtheta\\dphi", *(f"{v:.6f}" for v in r.delta_phi)])
    for dt, row in zip(r.delta_theta, r.rates):
        w.writerow([f"{dt:.6f}", *(f"{v:.4f}" for v in row)])


_RENDERERS = {
    ChangepointReport: (_report_dict, _report_csv),
    CusumResult: (_cusum_dict, _cusum_csv),
    NullExperimentResult: (_null_dict, _null_csv),
    PowerGridResult: (_power_dict, _power_csv),
}


def emit_report(report, fmt: str = "json") -> bytes:
    """Render a report or simulation result as UTF-8 JSON or CSV.

    JSON keys keep a fixed order. p-values and statistics are written with
    four decimals, and mean directions carry a ``"r.rr (d.dd)"`` display
    string next to the numeric radians and degrees.
    """
    for cls, (as_dict, as_csv) in _RENDERERS.items():
        if isinstance(report, cls):
            break
    else:
        raise TypeError(f"cannot render {type(report).__name__}")
    if fmt == "json":
        return (_to_json(as_dict(report)) + "\n").encode("utf-8")
    if fmt == "csv":
        buf = io.StringIO()
        as_csv(report, csv.writer(buf, lineterminator="\n"))
        return buf.getvalue().encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}; use 'json' or 'csv'")
