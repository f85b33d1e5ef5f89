"""Command-line interface: ``angularcp {detect,segment,simulate-null,simulate-power,sample}``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical degeneracy.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys

import numpy as np

from .cusum import TestConfig, detect_changepoint
from .errors import AngularDomainError, DegeneracyError
from .geometry import SurfaceSpec, sphere, torus
from .io import DataFormatError, DatasetSpec, emit_report, parse_angular_csv
from .samplers import CosineModelParams, FisherParams, SineModelParams
from .segmentation import SegmentationConfig, binary_segment
from .simulation import (
    NullExperimentConfig,
    PowerGridConfig,
    draw_sample,
    null_experiment,
    power_grid,
    surface_for,
)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_DEGENERATE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _angle(text: str) -> float:
    """Parse a radian value, allowing ``pi`` expressions such as ``pi/2.5`` or ``-pi/2``."""
    expr = text.strip().lower().replace("pi", repr(math.pi))
    if not all(c in "0123456789.+-*/e() " for c in expr):
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}")
    try:
        return float(eval(expr, {"__builtins__": {}}, {}))  # noqa: S307 - charset checked above
    except Exception as exc:
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}") from exc


def _grid(text: str) -> tuple[float, ...]:
    """``lo:hi:num`` (inclusive linspace) or a comma-separated list."""
    if ":" in text:
        lo, hi, num = text.split(":")
        return tuple(np.linspace(_angle(lo), _angle(hi), int(num)))
    return tuple(_angle(t) for t in text.split(","))


def _shared(p, data=True):
    p.add_argument("--surface", choices=["torus", "sphere"], default="torus")
    p.add_argument("--ratio", type=float, default=0.5, help="torus radius ratio r/R (default 0.5)")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--out", choices=["json", "csv"], default="json")
    p.add_argument("--q-reference", choices=["raw", "centered"], default="raw", help=argparse.SUPPRESS)
    if data:
        p.add_argument("file", help="CSV file with a header row")
        p.add_argument("--units", choices=["deg", "rad"], default="deg")
        p.add_argument("--phi-col", help="name or 0-based index of the phi column")
        p.add_argument("--theta-col", help="name or 0-based index of the theta column")
        p.add_argument("--time-col", help="name or 0-based index of a timestamp column")
        p.add_argument("--latlon", action="store_true", help="columns are latitude, longitude (degrees or radians)")


def _model_args(p):
    p.add_argument("--model", choices=["sine", "cosine", "fisher"], default="sine")
    p.add_argument("--mu-phi", type=_angle, default=0.0)
    p.add_argument("--mu-theta", type=_angle, default=0.0)
    p.add_argument("--kappa1", type=float, default=2.0)
    p.add_argument("--kappa2", type=float, default=2.0)
    p.add_argument("--kappa3", type=float, default=0.0)
    p.add_argument("--kappa", type=float, default=2.0, help="Fisher concentration")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ratio", type=float, default=0.5, help="torus radius ratio r/R (default 0.5)")
    p.add_argument("--out", choices=["json", "csv"], default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="angularcp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("detect", help="single changepoint test")
    _shared(p)

    p = sub.add_parser("segment", help="binary segmentation")
    _shared(p)
    p.add_argument("--min-seg", type=int, default=20)
    p.add_argument("--max-depth", type=int, default=None)
    p.add_argument("--bonferroni", action="store_true")

    for name in ("simulate-null", "simulate-power"):
        p = sub.add_parser(name, help="Monte Carlo " + name.split("-")[1])
        _model_args(p)
        p.add_argument("--alpha", type=float, default=0.05)
        p.add_argument("--reps", type=int, default=2000)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--q-reference", choices=["raw", "centered"], default="raw", help=argparse.SUPPRESS)
        if name == "simulate-null":
            p.add_argument("--n", type=int, default=1000)
        else:
            p.add_argument("--n", type=int, default=500)
            p.add_argument("--kstar-fraction", type=float, default=0.5)
            p.add_argument("--dphi", type=_grid, default=None, help="lo:hi:num or a,b,c (radians; pi allowed)")
            p.add_argument("--dtheta", type=_grid, default=None)

    p = sub.add_parser("sample", help="draw a sample as CSV")
    _model_args(p)
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--units", choices=["deg", "rad"], default="rad")
    return parser


def _surface(args) -> SurfaceSpec:
    return torus(args.ratio) if args.surface == "torus" else sphere()


def _model(args):
    if args.model == "fisher":
        return FisherParams(alpha=args.mu_theta, beta=args.mu_phi, kappa=args.kappa)
    cls = SineModelParams if args.model == "sine" else CosineModelParams
    return cls(args.mu_phi, args.mu_theta, args.kappa1, args.kappa2, args.kappa3)


def _load(args):
    spec = DatasetSpec(
        path=args.file,
        units=args.units,
        surface=_surface(args),
        phi_col=args.phi_col,
        theta_col=args.theta_col,
        time_col=args.time_col,
        latlon=args.latlon,
    )
    return parse_angular_csv(spec).pairs


def _run(args) -> bytes:
    cmd = args.command
    if cmd == "detect":
        cfg = TestConfig(surface=_surface(args), alpha=args.alpha, q_reference=args.q_reference)
        return emit_report(detect_changepoint(_load(args), cfg), args.out)
    if cmd == "segment":
        cfg = SegmentationConfig(
            alpha=args.alpha,
            min_segment=args.min_seg,
            max_depth=args.max_depth,
            bonferroni=args.bonferroni,
            q_reference=args.q_reference,
        )
        return emit_report(binary_segment(_load(args), _surface(args), cfg), args.out)
    if cmd == "simulate-null":
        cfg = NullExperimentConfig(
            model=_model(args),
            n=args.n,
            reps=args.reps,
            alpha=args.alpha,
            seed=args.seed,
            ratio=args.ratio,
            q_reference=args.q_reference,
            workers=args.workers,
        )
        return emit_report(null_experiment(cfg), args.out)
    if cmd == "simulate-power":
        model = _model(args)
        half_theta = math.pi / 2.5 if isinstance(model, FisherParams) else math.pi / 2
        cfg = PowerGridConfig(
            model=model,
            delta_phi_grid=args.dphi or tuple(np.linspace(-math.pi / 2, math.pi / 2, 21)),
            delta_theta_grid=args.dtheta or tuple(np.linspace(-half_theta, half_theta, 21)),
            n=args.n,
            reps=args.reps,
            alpha=args.alpha,
            seed=args.seed,
            kstar_fraction=args.kstar_fraction,
            ratio=args.ratio,
            q_reference=args.q_reference,
            workers=args.workers,
        )
        return emit_report(power_grid(cfg), args.out)
    if cmd == "sample":
        model = _model(args)
        x = draw_sample(model, args.n, np.random.default_rng(args.seed))
        if args.units == "deg":
            x = np.degrees(x)
        names = ("phi", "theta")
        if isinstance(model, FisherParams):
            names = ("longitude_phi", "colatitude_theta")
        lines = [",".join(names)] + [f"{a:.10f},{b:.10f}" for a, b in x]
        if args.out == "json":
            return (json.dumps({"surface": surface_for(model, args.ratio).kind.value, "pairs": x.tolist()}) + "\n").encode()
        return ("\n".join(lines) + "\n").encode()
    raise AssertionError(cmd)


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # --help exits 0, parse errors exit EXIT_USAGE via _Parser.error
        return int(exc.code or 0)
    try:
        payload = _run(args)
    except DataFormatError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DegeneracyError as exc:
        print(f"numerical degeneracy: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except AngularDomainError as exc:
        # bad flag values (ratio, alpha, kappa, ...) are usage errors; out-of-range data is caught above
        print(f"invalid argument: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.buffer.write(payload)
    sys.stdout.flush()
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
