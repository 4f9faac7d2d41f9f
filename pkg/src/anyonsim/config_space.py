"""Configuration space of two labeled particles in the plane.

Coincidence of the two particles is forbidden: removing the diagonal from the
two-particle space punctures the plane of the relative coordinate r = p1 - p2,
and it is that puncture which gives discrete paths a well-defined winding.
This module holds the value types (vectors, configurations, paths, lattices),
path validation, and the brute-force lattice walk enumeration that the
propagator machinery is built on.

A path is valid when no configuration is coincident and the relative vector
turns by strictly less than pi radians per step.  Steps that flip r exactly
antiparallel are rejected rather than assigned a sign: the winding of such a
step would be ambiguous.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import (
    CoincidenceAtStep,
    EndpointOffLattice,
    RoundingInconsistency,
    TurnTooLargeAtStep,
    ValidationError,
)

#: stay + 4-neighborhood; 25 joint moves for the pair
DEFAULT_MOVES: tuple[tuple[int, int], ...] = ((0, 0), (1, 0), (-1, 0), (0, 1), (0, -1))

_SNAP_TOL = 1e-9


@dataclass(frozen=True)
class Vec2:
    """A point or displacement in the plane. Components must be finite."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValidationError(f"non-finite vector component ({self.x}, {self.y})")

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class TwoParticleConfig:
    """Positions of the two labeled particles.

    Construction is permissive so that externally supplied data can be loaded
    and then diagnosed; coincidence is reported by :func:`validate_path`.
    """

    p1: Vec2
    p2: Vec2

    @property
    def relative(self) -> Vec2:
        return self.p1 - self.p2

    @property
    def coincident(self) -> bool:
        return self.p1 == self.p2


def swap(config: TwoParticleConfig) -> TwoParticleConfig:
    """Exchange the two particle labels. Involutive."""
    return TwoParticleConfig(config.p2, config.p1)


@dataclass(frozen=True)
class DiscretePath:
    """A uniformly time-stepped sequence of two-particle configurations."""

    dt: float
    configs: tuple[TwoParticleConfig, ...]

    def __post_init__(self):
        object.__setattr__(self, "configs", tuple(self.configs))
        if not (isinstance(self.dt, (int, float)) and self.dt > 0):
            raise ValidationError(f"dt must be > 0, got {self.dt}")
        if len(self.configs) < 2:
            raise ValidationError("a path needs at least two configurations")

    @property
    def n_steps(self) -> int:
        return len(self.configs) - 1

    @property
    def start(self) -> TwoParticleConfig:
        return self.configs[0]

    @property
    def end(self) -> TwoParticleConfig:
        return self.configs[-1]


@dataclass(frozen=True)
class EndpointPair:
    """Initial and final configuration of a propagator."""

    start: TwoParticleConfig
    end: TwoParticleConfig


@dataclass(frozen=True)
class LatticeSpec:
    """Square lattice of sites (i, j) * spacing with |i|, |j| <= extent."""

    extent: int
    spacing: float = 1.0
    moves: tuple[tuple[int, int], ...] = DEFAULT_MOVES

    def __post_init__(self):
        if self.extent < 1:
            raise ValidationError(f"extent must be >= 1, got {self.extent}")
        if not self.spacing > 0:
            raise ValidationError(f"spacing must be > 0, got {self.spacing}")
        object.__setattr__(self, "moves", tuple(tuple(m) for m in self.moves))

    def site(self, i: int, j: int) -> Vec2:
        return Vec2(i * self.spacing, j * self.spacing)

    def config(self, site1: tuple[int, int], site2: tuple[int, int]) -> TwoParticleConfig:
        return TwoParticleConfig(self.site(*site1), self.site(*site2))


def validate_path(path: DiscretePath) -> None:
    """Raise on the first invariant violation along the path.

    Checks, in path order: no coincident configuration, and every step turns
    the relative vector by strictly less than pi.  CoincidenceAtStep carries
    the config index, TurnTooLargeAtStep the step index (config k -> k+1).
    """
    configs = path.configs
    if configs[0].coincident:
        raise CoincidenceAtStep(0)
    r = configs[0].relative
    for k in range(len(configs) - 1):
        nxt = configs[k + 1]
        if nxt.coincident:
            raise CoincidenceAtStep(k + 1)
        nr = nxt.relative
        cross = r.x * nr.y - r.y * nr.x
        dot = r.x * nr.x + r.y * nr.y
        if cross == 0.0 and dot < 0.0:
            raise TurnTooLargeAtStep(k)
        r = nr


def reverse_path(path: DiscretePath) -> DiscretePath:
    return DiscretePath(path.dt, path.configs[::-1])


def concat_paths(first: DiscretePath, second: DiscretePath) -> DiscretePath:
    """Join two paths sharing a junction configuration (and time step)."""
    if first.dt != second.dt:
        raise ValidationError("cannot concatenate paths with different dt")
    if first.configs[-1] != second.configs[0]:
        raise ValidationError("paths do not share a junction configuration")
    return DiscretePath(first.dt, first.configs + second.configs[1:])


# --- JSON form used by the CLI: {"dt": ..., "configs": [[[x1,y1],[x2,y2]], ...]}


def path_to_json_dict(path: DiscretePath) -> dict:
    return {
        "dt": path.dt,
        "configs": [
            [[c.p1.x, c.p1.y], [c.p2.x, c.p2.y]] for c in path.configs
        ],
    }


def path_from_json_dict(data: dict) -> DiscretePath:
    try:
        dt = float(data["dt"])
        configs = tuple(
            TwoParticleConfig(Vec2(float(p1[0]), float(p1[1])), Vec2(float(p2[0]), float(p2[1])))
            for p1, p2 in data["configs"]
        )
    except ValidationError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ValidationError(f"malformed path JSON: {exc}") from exc
    return DiscretePath(dt=dt, configs=configs)


# --- lattice walk enumeration ------------------------------------------------


def _snap_to_sites(lattice: LatticeSpec, config: TwoParticleConfig) -> tuple[int, int, int, int]:
    """Map a configuration to integer site coordinates, or fail."""
    sites = []
    for v in (config.p1.x, config.p1.y, config.p2.x, config.p2.y):
        scaled = v / lattice.spacing
        i = round(scaled)
        if abs(scaled - i) > _SNAP_TOL or abs(i) > lattice.extent:
            raise EndpointOffLattice(
                f"coordinate {v} is not a lattice site (spacing {lattice.spacing}, extent {lattice.extent})"
            )
        sites.append(i)
    return tuple(sites)


def _joint_moves(moves: Sequence[tuple[int, int]]) -> tuple[tuple[int, int, int, int, int], ...]:
    # lexicographic in (move index of particle 1, move index of particle 2);
    # last entry is the squared displacement of the joint move
    return tuple(
        (dx1, dy1, dx2, dy2, dx1 * dx1 + dy1 * dy1 + dx2 * dx2 + dy2 * dy2)
        for dx1, dy1 in moves
        for dx2, dy2 in moves
    )


def _check_endpoints(start4: tuple[int, ...], end4: tuple[int, ...], n_steps: int) -> None:
    if n_steps < 1:
        raise ValidationError(f"n_steps must be >= 1, got {n_steps}")
    if start4[0] == start4[2] and start4[1] == start4[3]:
        raise ValidationError("start configuration is coincident")
    if end4[0] == end4[2] and end4[1] == end4[3]:
        raise ValidationError("end configuration is coincident")


def enumerate_walks(
    lattice: LatticeSpec,
    endpoints: EndpointPair,
    n_steps: int,
    dt: float = 1.0,
) -> Iterator[DiscretePath]:
    """Yield every valid n_steps-walk between the endpoints.

    Each particle makes one lattice move per step; no configuration along a
    yielded walk is coincident and every step turns the relative vector by
    less than pi.  Walks are produced in lexicographic order of joint move
    indices, so the stream is deterministic.
    """
    start4 = _snap_to_sites(lattice, endpoints.start)
    end4 = _snap_to_sites(lattice, endpoints.end)
    _check_endpoints(start4, end4, n_steps)
    joint = _joint_moves(lattice.moves)
    extent = lattice.extent
    e1x, e1y, e2x, e2y = end4
    sp = lattice.spacing

    def rec(x1, y1, x2, y2, rx, ry, left, trail):
        if left == 0:
            if x1 == e1x and y1 == e1y and x2 == e2x and y2 == e2y:
                yield trail
            return
        rem = left - 1
        for dx1, dy1, dx2, dy2, _cost in joint:
            nx1 = x1 + dx1
            ny1 = y1 + dy1
            if nx1 > extent or nx1 < -extent or ny1 > extent or ny1 < -extent:
                continue
            nx2 = x2 + dx2
            ny2 = y2 + dy2
            if nx2 > extent or nx2 < -extent or ny2 > extent or ny2 < -extent:
                continue
            nrx = nx1 - nx2
            nry = ny1 - ny2
            if nrx == 0 and nry == 0:
                continue
            cross = rx * nry - ry * nrx
            if cross == 0 and rx * nrx + ry * nry < 0:
                continue
            if abs(nx1 - e1x) + abs(ny1 - e1y) > rem:
                continue
            if abs(nx2 - e2x) + abs(ny2 - e2y) > rem:
                continue
            yield from rec(nx1, ny1, nx2, ny2, nrx, nry, rem, trail + ((nx1, ny1, nx2, ny2),))

    sx1, sy1, sx2, sy2 = start4
    for trail in rec(sx1, sy1, sx2, sy2, sx1 - sx2, sy1 - sy2, n_steps, (start4,)):
        configs = tuple(
            TwoParticleConfig(Vec2(a * sp, b * sp), Vec2(c * sp, d * sp))
            for a, b, c, d in trail
        )
        yield DiscretePath(dt=dt, configs=configs)


# --- winding/action census, the aggregation behind resolved kernels ----------
#
# Counting walks bucketed by (doubled winding, total squared site displacement)
# keeps the aggregation in exact integer arithmetic: the census of a walk set
# is identical no matter how the enumeration is partitioned across workers.

_ROUND_TOL = 2e-9  # on doubled winding, i.e. 1e-9 in full turns


def _census_rec(joint, extent, x1, y1, x2, y2, rx, ry, end4, left, angle, ssq, counts):
    if left == 0:
        if (x1, y1, x2, y2) == end4:
            half_turns = angle / math.pi
            w2 = round(half_turns)
            if abs(half_turns - w2) > _ROUND_TOL:
                raise RoundingInconsistency(
                    f"accumulated turning {angle} rad is not near a half-integer winding"
                )
            key = (w2, ssq)
            counts[key] = counts.get(key, 0) + 1
        return
    e1x, e1y, e2x, e2y = end4
    rem = left - 1
    atan2 = math.atan2
    for dx1, dy1, dx2, dy2, cost in joint:
        nx1 = x1 + dx1
        ny1 = y1 + dy1
        if nx1 > extent or nx1 < -extent or ny1 > extent or ny1 < -extent:
            continue
        nx2 = x2 + dx2
        ny2 = y2 + dy2
        if nx2 > extent or nx2 < -extent or ny2 > extent or ny2 < -extent:
            continue
        nrx = nx1 - nx2
        nry = ny1 - ny2
        if nrx == 0 and nry == 0:
            continue
        cross = rx * nry - ry * nrx
        dot = rx * nrx + ry * nry
        if cross == 0:
            if dot < 0:
                continue
            na = angle
        else:
            na = angle + atan2(cross, dot)
        if abs(nx1 - e1x) + abs(ny1 - e1y) > rem:
            continue
        if abs(nx2 - e2x) + abs(ny2 - e2y) > rem:
            continue
        _census_rec(joint, extent, nx1, ny1, nx2, ny2, nrx, nry, end4, rem, na, ssq + cost, counts)


def _census_task(args) -> dict[tuple[int, int], int]:
    joint, extent, state, end4, left = args
    x1, y1, x2, y2, angle, ssq = state
    counts: dict[tuple[int, int], int] = {}
    _census_rec(joint, extent, x1, y1, x2, y2, x1 - x2, y1 - y2, end4, left, angle, ssq, counts)
    return counts


def walk_census(
    lattice: LatticeSpec,
    endpoints: EndpointPair,
    n_steps: int,
    workers: int = 1,
) -> dict[tuple[int, int], int]:
    """Count valid walks, bucketed by (doubled winding, squared displacement).

    Keys are (w2, ssq) where w2 = 2 * winding in full turns (an integer for
    any closed-or-swapped endpoint pair) and ssq is the sum over steps of the
    squared site displacement of both particles.  Values are exact walk
    counts, so the result is independent of enumeration partitioning; with
    workers > 1 the first step is fanned out over a process pool.
    """
    start4 = _snap_to_sites(lattice, endpoints.start)
    end4 = _snap_to_sites(lattice, endpoints.end)
    _check_endpoints(start4, end4, n_steps)
    joint = _joint_moves(lattice.moves)
    extent = lattice.extent

    # expand the first step by hand so it can be partitioned across workers
    x1, y1, x2, y2 = start4
    rx, ry = x1 - x2, y1 - y2
    rem = n_steps - 1
    tasks = []
    for dx1, dy1, dx2, dy2, cost in joint:
        nx1 = x1 + dx1
        ny1 = y1 + dy1
        if nx1 > extent or nx1 < -extent or ny1 > extent or ny1 < -extent:
            continue
        nx2 = x2 + dx2
        ny2 = y2 + dy2
        if nx2 > extent or nx2 < -extent or ny2 > extent or ny2 < -extent:
            continue
        nrx = nx1 - nx2
        nry = ny1 - ny2
        if nrx == 0 and nry == 0:
            continue
        cross = rx * nry - ry * nrx
        dot = rx * nrx + ry * nry
        if cross == 0:
            if dot < 0:
                continue
            na = 0.0
        else:
            na = math.atan2(cross, dot)
        if abs(nx1 - end4[0]) + abs(ny1 - end4[1]) > rem:
            continue
        if abs(nx2 - end4[2]) + abs(ny2 - end4[3]) > rem:
            continue
        tasks.append((joint, extent, (nx1, ny1, nx2, ny2, na, cost), end4, rem))

    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            partial_counts = list(pool.map(_census_task, tasks))
    else:
        partial_counts = [_census_task(t) for t in tasks]

    counts: dict[tuple[int, int], int] = {}
    for part in partial_counts:
        for key, n in part.items():
            counts[key] = counts.get(key, 0) + n
    return counts
