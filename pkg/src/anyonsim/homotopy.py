"""Homotopy classification of discrete paths in the punctured relative plane.

For two non-coincident particles in 2D the loops of the relative coordinate
around the puncture form the group of integers under addition: the class of a
path is its winding number.  We compute it by the continuous-lift method,
accumulating the signed turning of the relative vector step by step.  That is
what makes half-integer windings possible: a path that ends in the swapped
configuration reverses the relative vector, so its lift ends an odd multiple
of pi away from where it started.

Windings are reported in full counter-clockwise turns: integers for closed
paths (kind Direct), odd multiples of 1/2 for exchange paths.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .config_space import DiscretePath, Vec2, swap, validate_path
from .errors import (
    AntiparallelAmbiguity,
    EndpointsNotClosedOrExchanged,
    NotComparable,
    RoundingInconsistency,
    ZeroVector,
)

TAU = 2.0 * math.pi

#: tolerance between accumulated turning (in turns) and the nearest half-integer
WINDING_TOL = 1e-9


class Kind(enum.Enum):
    """Endpoint relation of a classifiable path."""

    DIRECT = "Direct"
    EXCHANGE = "Exchange"


@dataclass(frozen=True)
class HomotopyClass:
    """Winding number plus the direct/exchange endpoint tag.

    Direct classes carry integer windings, exchange classes half-odd-integer
    ones; the constructor enforces that pairing.
    """

    kind: Kind
    winding: float

    def __post_init__(self):
        w2 = 2.0 * self.winding
        if w2 != round(w2):
            raise ValueError(f"winding must be a half-integer, got {self.winding}")
        is_integer = round(w2) % 2 == 0
        if is_integer != (self.kind is Kind.DIRECT):
            raise ValueError(
                f"{self.kind.value} class cannot have winding {self.winding}"
            )


def signed_angle(r_from: Vec2, r_to: Vec2) -> float:
    """Signed rotation in (-pi, pi) carrying the direction of r_from to r_to.

    Positive is counter-clockwise.  Exactly antiparallel vectors are refused:
    the sign of a half-turn is not determined by its endpoints.
    """
    if (r_from.x == 0.0 and r_from.y == 0.0) or (r_to.x == 0.0 and r_to.y == 0.0):
        raise ZeroVector("cannot measure the angle of a zero vector")
    cross = r_from.x * r_to.y - r_from.y * r_to.x
    dot = r_from.x * r_to.x + r_from.y * r_to.y
    if cross == 0.0 and dot < 0.0:
        raise AntiparallelAmbiguity("vectors are exactly antiparallel")
    return math.atan2(cross, dot)


def total_angle(path: DiscretePath) -> float:
    """Accumulated signed turning of the relative vector, in radians.

    Additive under concatenation and negated by reversal.  Depends only on
    the relative coordinate, so translating both particles together changes
    nothing.
    """
    validate_path(path)
    relatives = [c.relative for c in path.configs]
    return math.fsum(
        signed_angle(relatives[k], relatives[k + 1]) for k in range(len(relatives) - 1)
    )


def _nearest_half_integer(turns: float) -> float:
    w2 = round(2.0 * turns)
    if abs(2.0 * turns - w2) > 2.0 * WINDING_TOL:
        raise RoundingInconsistency(
            f"accumulated turning of {turns} turns is not near a half-integer"
        )
    return w2 / 2.0


def classify(path: DiscretePath) -> HomotopyClass:
    """Homotopy class of a closed (Direct) or swapped-endpoint (Exchange) path.

    The winding is total_angle / 2*pi rounded to the nearest half-integer;
    a residual beyond 1e-9 turns, or a parity that contradicts the endpoint
    relation, fails loudly instead of being rounded away.
    """
    angle = total_angle(path)
    start, end = path.start, path.end
    if end == start:
        kind = Kind.DIRECT
    elif end == swap(start):
        kind = Kind.EXCHANGE
    else:
        raise EndpointsNotClosedOrExchanged(
            "path endpoints are neither equal nor swapped"
        )
    winding = _nearest_half_integer(angle / TAU)
    try:
        return HomotopyClass(kind, winding)
    except ValueError as exc:
        raise RoundingInconsistency(str(exc)) from exc


def class_relative(path_a: DiscretePath, path_b: DiscretePath) -> int:
    """Winding of path_a relative to path_b; 0 means homotopic.

    Both paths must share start and end configurations.  Their accumulated
    turnings then differ by an integer number of full turns, and that integer
    is returned.
    """
    angle_a = total_angle(path_a)
    angle_b = total_angle(path_b)
    if path_a.start != path_b.start or path_a.end != path_b.end:
        raise NotComparable("paths have different endpoints")
    turns = (angle_a - angle_b) / TAU
    n = round(turns)
    if abs(turns - n) > WINDING_TOL:
        raise RoundingInconsistency(
            f"relative turning of {turns} turns is not near an integer"
        )
    return n
