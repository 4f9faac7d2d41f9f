"""Amplitudes: discretized actions, winding-resolved propagators, and the
operational combination rules.

A propagator between two lattice configurations is computed by brute force:
every valid walk contributes exp(i S / hbar) with S the free kinetic action,
and contributions are grouped by the winding class of the walk.  The total
over classes reproduces the unrestricted walk sum exactly; reweighting class
w by exp(i theta w) before summing turns the pair into anyons of statistics
angle theta.

Amplitudes are plain Python complex numbers throughout.
"""

from __future__ import annotations

import cmath
import enum
import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .config_space import (
    DiscretePath,
    EndpointPair,
    LatticeSpec,
    swap,
    validate_path,
    walk_census,
)
from .errors import (
    BudgetExceeded,
    EndpointsNotClosedOrExchanged,
    IncompleteMap,
    NonSquare,
    RoundingInconsistency,
    ValidationError,
)
from .homotopy import HomotopyClass, Kind

#: default cap on the brute-force joint-move sequence count
DEFAULT_BUDGET = 10_000_000


@dataclass(frozen=True)
class PhysicsParams:
    """Particle mass and hbar; natural units by default."""

    mass: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not (self.mass > 0 and self.hbar > 0):
            raise ValidationError("mass and hbar must be positive")


class OpClass(enum.Enum):
    """The two operational symmetrization rules."""

    BOSON = "boson"
    FERMION = "fermion"


@dataclass(frozen=True)
class StatisticsSpec:
    """Statistics angle theta (phase of one full CCW rotation) plus the
    operational class. theta is 4*pi-periodic in every observable here."""

    theta: float
    op_class: OpClass

    def __post_init__(self):
        if not math.isfinite(self.theta):
            raise ValidationError(f"theta must be finite, got {self.theta}")

    @property
    def canonical_theta(self) -> float:
        return self.theta % (4.0 * math.pi)


def endpoint_kind(endpoints: EndpointPair) -> Kind:
    """Direct for closed endpoints, Exchange for swapped ones."""
    if endpoints.end == endpoints.start:
        return Kind.DIRECT
    if endpoints.end == swap(endpoints.start):
        return Kind.EXCHANGE
    raise EndpointsNotClosedOrExchanged(
        "endpoints must be equal (Direct) or swapped (Exchange) to resolve winding classes"
    )


@dataclass(frozen=True)
class ResolvedKernel:
    """Propagator split into per-winding-class partial amplitudes."""

    endpoints: EndpointPair
    n_steps: int
    partials: Mapping[HomotopyClass, complex]

    def __post_init__(self):
        object.__setattr__(self, "partials", dict(self.partials))
        kind = endpoint_kind(self.endpoints)
        for cls in self.partials:
            if cls.kind is not kind:
                raise ValidationError(
                    f"partial of kind {cls.kind.value} in a {kind.value} kernel"
                )

    @property
    def kind(self) -> Kind:
        return endpoint_kind(self.endpoints)

    def sorted_classes(self) -> list[HomotopyClass]:
        return sorted(self.partials, key=lambda c: c.winding)

    def total(self) -> complex:
        """Partition total: the unrestricted walk sum, recovered from the classes."""
        return sum((self.partials[c] for c in self.sorted_classes()), 0j)

    def to_json_dict(self) -> dict:
        ep = self.endpoints
        return {
            "endpoints": {
                "start": [[ep.start.p1.x, ep.start.p1.y], [ep.start.p2.x, ep.start.p2.y]],
                "end": [[ep.end.p1.x, ep.end.p1.y], [ep.end.p2.x, ep.end.p2.y]],
            },
            "n_steps": self.n_steps,
            "partials": [
                {
                    "kind": c.kind.value,
                    "winding": c.winding,
                    "re": self.partials[c].real,
                    "im": self.partials[c].imag,
                }
                for c in self.sorted_classes()
            ],
        }


def action(path: DiscretePath, params: PhysicsParams = PhysicsParams()) -> float:
    """Free-particle kinetic action of the discretized two-particle path:
    sum over steps of m (|dp1|^2 + |dp2|^2) / (2 dt)."""
    validate_path(path)
    dt = path.dt
    total = 0.0
    for k in range(path.n_steps):
        a, b = path.configs[k], path.configs[k + 1]
        d1 = b.p1 - a.p1
        d2 = b.p2 - a.p2
        total += (d1.x * d1.x + d1.y * d1.y + d2.x * d2.x + d2.y * d2.y) / (2.0 * dt)
    return params.mass * total


def path_amplitude(path: DiscretePath, params: PhysicsParams = PhysicsParams()) -> complex:
    """exp(i S / hbar); always unit modulus."""
    return cmath.exp(1j * action(path, params) / params.hbar)


def resolved_kernel(
    lattice: LatticeSpec,
    endpoints: EndpointPair,
    n_steps: int,
    params: PhysicsParams = PhysicsParams(),
    *,
    dt: float = 1.0,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> ResolvedKernel:
    """Brute-force propagator resolved by winding class.

    partials[w] sums exp(i S / hbar) over every enumerated walk of winding w;
    classes without walks are absent.  Endpoints must be closed or swapped,
    otherwise winding has no absolute half-integer value.  The enumeration is
    refused up front when the joint-move sequence bound exceeds the budget.
    """
    kind = endpoint_kind(endpoints)
    if dt <= 0:
        raise ValidationError(f"dt must be > 0, got {dt}")
    estimate = (len(lattice.moves) ** 2) ** n_steps
    if estimate > budget:
        raise BudgetExceeded(
            f"estimated {estimate} joint-move sequences exceed budget {budget}"
        )
    counts = walk_census(lattice, endpoints, n_steps, workers=workers)

    action_unit = params.mass * lattice.spacing**2 / (2.0 * dt * params.hbar)
    phases: dict[int, complex] = {}
    partials: dict[HomotopyClass, complex] = {}
    direct = kind is Kind.DIRECT
    for w2 in sorted({key[0] for key in counts}):
        if (w2 % 2 == 0) != direct:
            raise RoundingInconsistency(
                f"walk of doubled winding {w2} in a {kind.value} kernel"
            )
        amp = 0j
        for ssq in sorted(ssq for w, ssq in counts if w == w2):
            phase = phases.get(ssq)
            if phase is None:
                phase = phases[ssq] = cmath.exp(1j * action_unit * ssq)
            amp += counts[(w2, ssq)] * phase
        partials[HomotopyClass(kind, w2 / 2.0)] = amp
    return ResolvedKernel(endpoints=endpoints, n_steps=n_steps, partials=partials)


def anyonic_weight(cls: HomotopyClass, theta: float) -> complex:
    """Topological phase exp(i theta w) of winding class w.

    One full CCW rotation of the pair accrues exp(i theta); an exchange is
    half a rotation, so a +1/2 class accrues exp(i theta / 2).
    """
    return cmath.exp(1j * theta * cls.winding)


def anyonic_kernel(resolved: ResolvedKernel, theta: float) -> complex:
    """Winding-weighted propagator: sum over classes of exp(i theta w) K^w."""
    return sum(
        (anyonic_weight(c, theta) * resolved.partials[c] for c in resolved.sorted_classes()),
        0j,
    )


# --- the three composition rules for outcome-sequence amplitudes -------------


def feynman_product(ab: complex, bc: complex) -> complex:
    """Amplitude of a two-leg sequence: the product of the leg amplitudes."""
    return ab * bc


def feynman_sum(abd: complex, acd: complex) -> complex:
    """Amplitude through unmeasured alternatives: the sum over them."""
    return abd + acd


def probability(a: complex) -> float:
    """Squared modulus of an amplitude."""
    return a.real * a.real + a.imag * a.imag


# --- operational combination of distinguishable-particle amplitudes ----------


@dataclass(frozen=True)
class PermutationAmplitudes:
    """Transition amplitude for each permutation of the final configuration.

    Permutations of range(n) are represented as tuples: sigma maps slot j to
    sigma[j].  A complete map holds all n! of them.
    """

    n: int
    alpha: Mapping[tuple[int, ...], complex]

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"n must be >= 1, got {self.n}")
        object.__setattr__(self, "alpha", dict(self.alpha))


def permutation_sign(sigma: tuple[int, ...]) -> int:
    """+1 for even permutations, -1 for odd, by counting transpositions
    through the cycle decomposition."""
    seen = [False] * len(sigma)
    transpositions = 0
    for start in range(len(sigma)):
        if seen[start]:
            continue
        cycle_len = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = sigma[j]
            cycle_len += 1
        transpositions += cycle_len - 1
    return -1 if transpositions % 2 else 1


def operational_combine(perms: PermutationAmplitudes, op_class: OpClass) -> complex:
    """Combine distinguishable-particle amplitudes over all permutations:
    a plain sum for bosons, a sign-weighted sum for fermions.

    For n = 2 this is alpha_direct + alpha_opposite (boson) or
    alpha_direct - alpha_opposite (fermion).
    """
    total = 0j
    for sigma in itertools.permutations(range(perms.n)):
        try:
            amp = perms.alpha[sigma]
        except KeyError:
            raise IncompleteMap(f"missing amplitude for permutation {sigma}") from None
        if op_class is OpClass.FERMION:
            total += permutation_sign(sigma) * amp
        else:
            total += amp
    return total


def noninteracting_alpha(single_kernel: Sequence[Sequence[complex]]) -> PermutationAmplitudes:
    """Permutation amplitudes of n non-interacting particles.

    Entry (j, k) of the matrix is the single-particle amplitude from start j
    to end k; the amplitude of permutation sigma is the product over j of
    M[j][sigma(j)].  Combining these gives the permanent (boson) or the
    determinant (fermion) of the matrix.
    """
    rows = [tuple(complex(v) for v in row) for row in single_kernel]
    n = len(rows)
    if n == 0 or any(len(row) != n for row in rows):
        raise NonSquare(f"expected a square matrix, got rows of lengths {[len(r) for r in rows]}")
    alpha = {}
    for sigma in itertools.permutations(range(n)):
        prod = 1 + 0j
        for j in range(n):
            prod *= rows[j][sigma[j]]
        alpha[sigma] = prod
    return PermutationAmplitudes(n=n, alpha=alpha)
