"""Command-line surface: path classification, kernels, sweeps, dephasing.

Outputs are machine-readable (single-line JSON, or CSV for sweeps) and
byte-identical across runs for identical invocations.  Every error exits
nonzero with a single diagnostic line ``anyonsim: <ErrorName>: <detail>`` on
stderr, where ErrorName is the exception class from :mod:`anyonsim.errors`.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import amplitudes, config_space, exchange, homotopy
from .errors import AnyonSimError, BadRange, ParseError

ENV_BUDGET = "ANYONSIM_BUDGET"


def _g(value: float) -> str:
    """12 significant digits, '.' decimal separator, locale-independent."""
    return format(value, ".12g")


def _complex_dict(z: complex) -> dict:
    return {"re": z.real, "im": z.imag}


def _config_from_coords(coords: list[float]) -> config_space.TwoParticleConfig:
    x1, y1, x2, y2 = coords
    return config_space.TwoParticleConfig(
        config_space.Vec2(x1, y1), config_space.Vec2(x2, y2)
    )


def _parse_grid(text: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",") if p != ""]
    except ValueError as exc:
        raise ParseError(f"bad dt grid {text!r}: {exc}") from exc


def _resolve_budget(flag_value: int | None) -> int:
    if flag_value is None:
        env = os.environ.get(ENV_BUDGET)
        if env is None:
            return amplitudes.DEFAULT_BUDGET
        try:
            flag_value = int(env)
        except ValueError as exc:
            raise ParseError(f"{ENV_BUDGET} is not an integer: {env!r}") from exc
    if flag_value <= 0:
        raise ParseError(f"budget must be positive, got {flag_value}")
    return flag_value


def _load_path(path_file: str) -> config_space.DiscretePath:
    try:
        with open(path_file, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path_file}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path_file}: {exc}") from exc
    return config_space.path_from_json_dict(data)


def _cmd_winding(args: argparse.Namespace) -> int:
    path = _load_path(args.path_file)
    cls = homotopy.classify(path)
    report = {
        "kind": cls.kind.value,
        "winding": cls.winding,
        "total_angle": homotopy.total_angle(path),
    }
    print(json.dumps(report))
    return 0


def _cmd_kernel(args: argparse.Namespace) -> int:
    budget = _resolve_budget(args.budget)
    if args.workers < 1:
        raise ParseError(f"workers must be >= 1, got {args.workers}")
    lattice = config_space.LatticeSpec(extent=args.extent, spacing=args.spacing)
    endpoints = config_space.EndpointPair(
        start=_config_from_coords(args.start), end=_config_from_coords(args.end)
    )
    params = amplitudes.PhysicsParams(mass=args.mass, hbar=args.hbar)
    kernel = amplitudes.resolved_kernel(
        lattice,
        endpoints,
        args.steps,
        params,
        dt=args.dt,
        budget=budget,
        workers=args.workers,
    )
    doc = kernel.to_json_dict()
    report = {
        "endpoints": doc["endpoints"],
        "n_steps": doc["n_steps"],
        "partition_total": _complex_dict(kernel.total()),
    }
    if args.theta is not None:
        report["theta"] = args.theta
        report["weighted_total"] = _complex_dict(
            amplitudes.anyonic_kernel(kernel, args.theta)
        )
    if args.resolve:
        report["partials"] = doc["partials"]
    print(json.dumps(report))
    return 0


def _sweep_grid(args: argparse.Namespace) -> list[amplitudes.StatisticsSpec]:
    if args.points < 1:
        raise BadRange(f"points must be >= 1, got {args.points}")
    if args.theta_max < args.theta_min:
        raise BadRange(f"theta-max {args.theta_max} is below theta-min {args.theta_min}")
    if args.points == 1:
        thetas = [args.theta_min]
    else:
        span = args.theta_max - args.theta_min
        thetas = [args.theta_min + i * span / (args.points - 1) for i in range(args.points)]
    classes = {
        "boson": [amplitudes.OpClass.BOSON],
        "fermion": [amplitudes.OpClass.FERMION],
        "both": [amplitudes.OpClass.BOSON, amplitudes.OpClass.FERMION],
    }[args.op_class]
    return [
        amplitudes.StatisticsSpec(theta=t, op_class=c) for t in thetas for c in classes
    ]


def _cmd_sweep(args: argparse.Namespace) -> int:
    geom = exchange.ExchangeGeometry(radius=args.radius, n_steps=args.steps, dt=args.dt)
    params = amplitudes.PhysicsParams(mass=args.mass, hbar=args.hbar)
    rows = exchange.theta_sweep(geom, params, _sweep_grid(args))
    print("theta,op_class,phi,re_amp,im_amp")
    for row in rows:
        print(
            f"{_g(row.theta)},{row.op_class.value},{_g(row.phi)},"
            f"{_g(row.amplitude.real)},{_g(row.amplitude.imag)}"
        )
    return 0


def _cmd_dephase(args: argparse.Namespace) -> int:
    n_ref = 16
    geom = exchange.ExchangeGeometry(
        radius=args.radius, n_steps=n_ref, dt=args.duration / n_ref
    )
    params = amplitudes.PhysicsParams(mass=args.mass, hbar=args.hbar)
    fit = exchange.dephasing_exponent(geom, params, _parse_grid(args.dt_grid))
    report = {
        "slope": fit.slope,
        "predicted": fit.predicted,
        "rel_error": fit.rel_error,
        "intercept": fit.intercept,
        "residual": fit.residual,
        "samples": [
            {
                "dt": s.dt,
                "n_steps": s.n_steps,
                "phase_op": s.phase_op,
                "phase_dir": s.phase_dir,
            }
            for s in fit.samples
        ],
    }
    print(json.dumps(report))
    return 0


def _cmd_exchange(args: argparse.Namespace) -> int:
    geom = exchange.ExchangeGeometry(
        radius=args.radius,
        n_steps=args.steps,
        dt=args.dt,
        direction=exchange.Direction(args.direction),
    )
    params = amplitudes.PhysicsParams(mass=args.mass, hbar=args.hbar)
    path = exchange.build_exchange_path(geom)
    cls = homotopy.classify(path)
    factors = exchange.step_factors(path, params)
    stats = amplitudes.StatisticsSpec(
        theta=args.theta, op_class=amplitudes.OpClass(args.op_class)
    )
    kernel = amplitudes.ResolvedKernel(
        endpoints=config_space.EndpointPair(path.start, path.end),
        n_steps=path.n_steps,
        partials={cls: amplitudes.path_amplitude(path, params)},
    )
    result = exchange.exchange_phase(kernel, stats)
    report = {
        "kind": cls.kind.value,
        "winding": cls.winding,
        "total_angle": homotopy.total_angle(path),
        "n_flipped": sum(1 for f in factors if f.flipped),
        "theta": stats.theta,
        "op_class": stats.op_class.value,
        "phi": result.phi,
        "amplitude": _complex_dict(result.amplitude),
    }
    print(json.dumps(report))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anyonsim",
        description="Two-particle exchange statistics in the punctured plane.",
    )
    parser.add_argument(
        "--seed", type=int, default=None, help="seed for randomized subcommands (reserved)"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("winding", help="classify a path JSON file by winding")
    p.add_argument("path_file")
    p.set_defaults(func=_cmd_winding)

    p = sub.add_parser("kernel", help="brute-force winding-resolved propagator")
    p.add_argument("--extent", type=int, required=True)
    p.add_argument("--spacing", type=float, default=1.0)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--start", required=True, nargs=4, type=float,
                   metavar=("X1", "Y1", "X2", "Y2"))
    p.add_argument("--end", required=True, nargs=4, type=float,
                   metavar=("X1", "Y1", "X2", "Y2"))
    p.add_argument("--dt", type=float, default=1.0)
    p.add_argument("--mass", type=float, default=1.0)
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--resolve", action="store_true", help="emit per-class partials")
    p.add_argument("--budget", type=int, default=None, help=f"walk budget (or ${ENV_BUDGET})")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_kernel)

    p = sub.add_parser("sweep", help="exchange phase across statistics angles (CSV)")
    p.add_argument("--theta-min", type=float, required=True)
    p.add_argument("--theta-max", type=float, required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--op-class", choices=["boson", "fermion", "both"], default="both")
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=32)
    p.add_argument("--dt", type=float, default=0.05)
    p.add_argument("--mass", type=float, default=1.0)
    p.add_argument("--hbar", type=float, default=1.0)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("dephase", help="opposite-step phase growth vs 1/dt")
    p.add_argument("--dt-grid", required=True, metavar="DT1,DT2,...")
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--duration", type=float, default=2.0, help="total exchange time held fixed")
    p.add_argument("--mass", type=float, default=1.0)
    p.add_argument("--hbar", type=float, default=1.0)
    p.set_defaults(func=_cmd_dephase)

    p = sub.add_parser("exchange", help="designated exchange path diagnostics")
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=32)
    p.add_argument("--dt", type=float, default=0.05)
    p.add_argument(
        "--direction", choices=["ccw", "cw"], default="ccw",
        help="phase extraction follows the counter-clockwise convention",
    )
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--op-class", choices=["boson", "fermion"], default="boson")
    p.add_argument("--mass", type=float, default=1.0)
    p.add_argument("--hbar", type=float, default=1.0)
    p.set_defaults(func=_cmd_exchange)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except AnyonSimError as exc:
        print(f"anyonsim: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
