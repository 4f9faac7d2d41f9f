"""The designated-exchange-path experiment.

Both particles traverse antipodal semicircular arcs about a common center, so
the pair ends in the swapped configuration after half a rotation of the
relative vector.  Treating each time step operationally gives a product of
per-step factors (direct amplitude +/- opposite amplitude).  Three things are
measured here:

* the opposite-step action phase grows like m D^2 / (hbar dt) as the step
  time shrinks (D the inter-particle distance), which dephases every term
  containing an opposite transition, while the direct-step phase vanishes
  linearly in dt;
* a fundamental domain (a fixed half of the configuration space) makes the
  direct/opposite labels unambiguous, and a simple exchange path crosses its
  boundary exactly once, swapping the roles of the two factors at that step;
* combining the surviving all-direct product with the winding weight
  exp(i theta / 2) and the single operational sign yields the exchange phase
  phi = theta/2 (bosons) or theta/2 + pi (fermions).
"""

from __future__ import annotations

import cmath
import enum
import math
import statistics
from dataclasses import dataclass, replace
from typing import Callable, Iterable

from .amplitudes import (
    OpClass,
    PhysicsParams,
    ResolvedKernel,
    StatisticsSpec,
    anyonic_kernel,
    anyonic_weight,
    path_amplitude,
)
from .config_space import (
    DiscretePath,
    EndpointPair,
    TwoParticleConfig,
    Vec2,
    validate_path,
)
from .errors import (
    DegenerateGrid,
    NoDominantClass,
    NotExchangeKernel,
    ValidationError,
)
from .homotopy import HomotopyClass, Kind, classify

TAU = 2.0 * math.pi


class Direction(enum.Enum):
    CCW = "ccw"
    CW = "cw"


@dataclass(frozen=True)
class ExchangeGeometry:
    """Semicircular exchange of a pair at distance 2*radius about center,
    in n_steps uniform angular increments of duration dt each."""

    radius: float
    n_steps: int
    dt: float
    direction: Direction = Direction.CCW
    center: Vec2 = Vec2(0.0, 0.0)

    def __post_init__(self):
        if not self.radius > 0:
            raise ValidationError(f"radius must be > 0, got {self.radius}")
        if self.n_steps < 2:
            raise ValidationError(f"n_steps must be >= 2, got {self.n_steps}")
        if not self.dt > 0:
            raise ValidationError(f"dt must be > 0, got {self.dt}")

    @property
    def duration(self) -> float:
        return self.n_steps * self.dt

    @property
    def separation(self) -> float:
        """Inter-particle distance D, constant along the exchange."""
        return 2.0 * self.radius


def build_exchange_path(geom: ExchangeGeometry) -> DiscretePath:
    """Discretized exchange: antipodal arcs ending exactly in the swapped
    configuration (the last configuration is snapped so the endpoints compare
    equal under exact coordinate equality)."""
    sign = 1.0 if geom.direction is Direction.CCW else -1.0
    cx, cy, r = geom.center.x, geom.center.y, geom.radius
    configs = []
    for k in range(geom.n_steps + 1):
        phi = sign * math.pi * k / geom.n_steps
        dx, dy = r * math.cos(phi), r * math.sin(phi)
        configs.append(TwoParticleConfig(Vec2(cx + dx, cy + dy), Vec2(cx - dx, cy - dy)))
    start = configs[0]
    configs[-1] = TwoParticleConfig(start.p2, start.p1)
    path = DiscretePath(dt=geom.dt, configs=tuple(configs))
    validate_path(path)
    return path


def _upper_half_plane(config: TwoParticleConfig) -> bool:
    # polar angle of the relative vector in [0, pi); exact arithmetic, no trig
    r = config.relative
    return r.y > 0.0 or (r.y == 0.0 and r.x > 0.0)


@dataclass(frozen=True)
class FundamentalDomain:
    """A chosen half of configuration space fixing which transitions are
    direct.  Exactly one of config, swap(config) satisfies the rule; the
    default takes relative vectors with polar angle in [0, pi)."""

    rule: Callable[[TwoParticleConfig], bool] = _upper_half_plane

    def contains(self, config: TwoParticleConfig) -> bool:
        return self.rule(config)


@dataclass(frozen=True)
class StepFactor:
    """One step's operational pair of one-step amplitudes.

    alpha_dir propagates to the next configuration as-is, alpha_op to its
    swap; flipped marks steps that cross the domain boundary, where the two
    labels exchange roles.  The raw action increments are kept because the
    dephasing analysis needs phases without mod-2*pi wrapping.
    """

    alpha_dir: complex
    alpha_op: complex
    flipped: bool
    action_dir: float
    action_op: float


def _sq(a: Vec2, b: Vec2) -> float:
    dx, dy = b.x - a.x, b.y - a.y
    return dx * dx + dy * dy


def step_factors(
    path: DiscretePath,
    params: PhysicsParams = PhysicsParams(),
    domain: FundamentalDomain = FundamentalDomain(),
) -> tuple[StepFactor, ...]:
    """Per-step direct and opposite one-step amplitudes along a path."""
    validate_path(path)
    out = []
    scale = params.mass / (2.0 * path.dt)
    inside = domain.contains(path.configs[0])
    for k in range(path.n_steps):
        a, b = path.configs[k], path.configs[k + 1]
        s_dir = scale * (_sq(a.p1, b.p1) + _sq(a.p2, b.p2))
        s_op = scale * (_sq(a.p1, b.p2) + _sq(a.p2, b.p1))
        next_inside = domain.contains(b)
        out.append(
            StepFactor(
                alpha_dir=cmath.exp(1j * s_dir / params.hbar),
                alpha_op=cmath.exp(1j * s_op / params.hbar),
                flipped=inside != next_inside,
                action_dir=s_dir,
                action_op=s_op,
            )
        )
        inside = next_inside
    return tuple(out)


@dataclass(frozen=True)
class DephasingSample:
    dt: float
    n_steps: int
    phase_op: float
    phase_dir: float


@dataclass(frozen=True)
class DephasingFit:
    """Least-squares fit of the opposite-step phase against 1/dt."""

    slope: float
    intercept: float
    residual: float
    predicted: float
    rel_error: float
    samples: tuple[DephasingSample, ...]


def dephasing_exponent(
    geom: ExchangeGeometry,
    params: PhysicsParams,
    dt_grid: Iterable[float],
) -> DephasingFit:
    """Fit the unwrapped opposite-step action phase against 1/dt.

    The exchange duration T = n_steps * dt of geom is held fixed while the
    grid refines the time step (n = T / dt intermediate points), mirroring
    how the discretization is meant to be taken to its limit.  The slope
    approaches m D^2 / hbar; the direct-step phase shrinks linearly in dt.
    Phases come from exact per-step actions, never from arg of the amplitude,
    which is blind to multiples of 2*pi.
    """
    dts = sorted(set(float(v) for v in dt_grid), reverse=True)
    if len(dts) < 3 or any(v <= 0 for v in dts):
        raise DegenerateGrid("need at least 3 distinct positive dt values")
    duration = geom.duration
    samples = []
    for dt in dts:
        n = round(duration / dt)
        if n < 2:
            raise DegenerateGrid(
                f"dt {dt} leaves fewer than 2 steps of the exchange of duration {duration}"
            )
        factors = step_factors(build_exchange_path(replace(geom, n_steps=n, dt=dt)), params)
        # every step of the semicircle is congruent; the first is representative
        samples.append(
            DephasingSample(
                dt=dt,
                n_steps=n,
                phase_op=factors[0].action_op / params.hbar,
                phase_dir=factors[0].action_dir / params.hbar,
            )
        )
    xs = [1.0 / s.dt for s in samples]
    ys = [s.phase_op for s in samples]
    slope, intercept = statistics.linear_regression(xs, ys)
    residual = math.sqrt(
        math.fsum((y - (slope * x + intercept)) ** 2 for x, y in zip(xs, ys)) / len(xs)
    )
    predicted = params.mass * geom.separation**2 / params.hbar
    return DephasingFit(
        slope=slope,
        intercept=intercept,
        residual=residual,
        predicted=predicted,
        rel_error=abs(slope - predicted) / predicted,
        samples=tuple(samples),
    )


_PLUS_HALF = HomotopyClass(Kind.EXCHANGE, 0.5)


@dataclass(frozen=True)
class ExchangePhase:
    """Total exchange phase phi in [0, 2*pi) with its diagnostic amplitude."""

    phi: float
    amplitude: complex
    theta: float
    op_class: OpClass


def exchange_phase(resolved: ResolvedKernel, stats: StatisticsSpec) -> ExchangePhase:
    """Exchange phase of a +1/2-dominated exchange kernel.

    phi = arg(exp(i theta / 2) * s) with s = +1 for operational bosons and
    -1 for operational fermions, i.e. theta/2 or theta/2 + pi mod 2*pi.  The
    +1/2 class must dominate the kernel in magnitude; the full interference
    amplitude s * anyonic_kernel is reported alongside for diagnostics.
    """
    if resolved.kind is not Kind.EXCHANGE:
        raise NotExchangeKernel("exchange phase requires swapped endpoints")
    dominant = abs(resolved.partials.get(_PLUS_HALF, 0j))
    rest = math.fsum(
        abs(amp) for cls, amp in resolved.partials.items() if cls != _PLUS_HALF
    )
    if not dominant > rest:
        raise NoDominantClass(
            f"|K^(+1/2)| = {dominant} does not dominate the remaining classes ({rest})"
        )
    sign = 1.0 if stats.op_class is OpClass.BOSON else -1.0
    phi = cmath.phase(anyonic_weight(_PLUS_HALF, stats.theta) * sign) % TAU
    amplitude = sign * anyonic_kernel(resolved, stats.theta)
    return ExchangePhase(phi=phi, amplitude=amplitude, theta=stats.theta, op_class=stats.op_class)


@dataclass(frozen=True)
class SweepRow:
    theta: float
    op_class: OpClass
    phi: float
    amplitude: complex


def theta_sweep(
    geom: ExchangeGeometry,
    params: PhysicsParams,
    stats_grid: Iterable[StatisticsSpec],
) -> tuple[SweepRow, ...]:
    """Exchange phase across a grid of statistics angles and classes.

    The kernel is the one-path propagator of the designated exchange built
    from geom (the experiment is about that path, not a path sum); phi is
    affine in theta with slope 1/2 per operational class.
    """
    stats_list = list(stats_grid)
    if not stats_list:
        return ()
    path = build_exchange_path(geom)
    kernel = ResolvedKernel(
        endpoints=EndpointPair(path.start, path.end),
        n_steps=path.n_steps,
        partials={classify(path): path_amplitude(path, params)},
    )
    rows = []
    for stats in stats_list:
        result = exchange_phase(kernel, stats)
        rows.append(
            SweepRow(
                theta=stats.theta,
                op_class=stats.op_class,
                phi=result.phi,
                amplitude=result.amplitude,
            )
        )
    return tuple(rows)
