"""Shared test utilities: independent oracles and random walk generation.

The oracles here deliberately avoid the library's own code paths: walk
validity is re-derived from complex ratios, the permanent comes from Laplace
expansion, and winding checks go through the public path objects.
"""

from __future__ import annotations

import cmath
import itertools
import math
import random

from anyonsim import DiscretePath, TwoParticleConfig, Vec2

MOVES = ((0, 0), (1, 0), (-1, 0), (0, 1), (0, -1))


def lattice_path(sites, dt=1.0, spacing=1.0):
    """Build a DiscretePath from (x1, y1, x2, y2) integer site tuples."""
    configs = tuple(
        TwoParticleConfig(Vec2(a * spacing, b * spacing), Vec2(c * spacing, d * spacing))
        for a, b, c, d in sites
    )
    return DiscretePath(dt=dt, configs=configs)


def relative_path(rel_points, dt=1.0, origin=(0.0, 0.0)):
    """Path with particle 2 pinned at origin and particle 1 at origin + r."""
    ox, oy = origin
    configs = tuple(
        TwoParticleConfig(Vec2(ox + rx, oy + ry), Vec2(ox, oy)) for rx, ry in rel_points
    )
    return DiscretePath(dt=dt, configs=configs)


def antipodal_path(rel_points, dt=1.0):
    """Path with the particles at +/- r/2, so reversing r swaps the pair."""
    configs = tuple(
        TwoParticleConfig(Vec2(rx / 2, ry / 2), Vec2(-rx / 2, -ry / 2))
        for rx, ry in rel_points
    )
    return DiscretePath(dt=dt, configs=configs)


def brute_force_walks(extent, start, end, n_steps, moves=MOVES):
    """All valid walks by exhaustive product over joint move sequences.

    Validity is checked through an independent formulation: the per-step turn
    of the relative coordinate is the phase of the ratio of the relative
    positions as complex numbers, and a phase of exactly +/- pi is rejected.
    """
    joint = tuple(itertools.product(moves, moves))
    walks = []
    for seq in itertools.product(range(len(joint)), repeat=n_steps):
        sites = [start]
        ok = True
        for idx in seq:
            (dx1, dy1), (dx2, dy2) = joint[idx]
            x1, y1, x2, y2 = sites[-1]
            nxt = (x1 + dx1, y1 + dy1, x2 + dx2, y2 + dy2)
            if any(abs(v) > extent for v in nxt):
                ok = False
                break
            r_prev = complex(x1 - x2, y1 - y2)
            r_next = complex(nxt[0] - nxt[2], nxt[1] - nxt[3])
            if r_next == 0:
                ok = False
                break
            turn = cmath.phase(r_next / r_prev)
            if abs(turn) >= math.pi:
                ok = False
                break
            sites.append(nxt)
        if ok and sites[-1] == end:
            walks.append(tuple(sites))
    return walks


def random_valid_walk(rng: random.Random, extent=3, n_steps=8, dt=1.0):
    """Uniformly random-ish valid lattice walk: random start, then a random
    valid joint move per step (stay-stay is always valid, so never stuck)."""
    while True:
        x1, y1, x2, y2 = (rng.randint(-extent, extent) for _ in range(4))
        if (x1, y1) != (x2, y2):
            break
    sites = [(x1, y1, x2, y2)]
    for _ in range(n_steps):
        x1, y1, x2, y2 = sites[-1]
        rx, ry = x1 - x2, y1 - y2
        candidates = []
        for dx1, dy1 in MOVES:
            nx1, ny1 = x1 + dx1, y1 + dy1
            if abs(nx1) > extent or abs(ny1) > extent:
                continue
            for dx2, dy2 in MOVES:
                nx2, ny2 = x2 + dx2, y2 + dy2
                if abs(nx2) > extent or abs(ny2) > extent:
                    continue
                nrx, nry = nx1 - nx2, ny1 - ny2
                if nrx == 0 and nry == 0:
                    continue
                if rx * nry - ry * nrx == 0 and rx * nrx + ry * nry < 0:
                    continue
                candidates.append((nx1, ny1, nx2, ny2))
        sites.append(rng.choice(candidates))
    return lattice_path(sites, dt=dt)


def laplace_permanent(matrix):
    """Permanent by Laplace expansion along the first row."""
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    total = 0j
    for col in range(n):
        minor = [row[:col] + row[col + 1 :] for row in matrix[1:]]
        total += matrix[0][col] * laplace_permanent(minor)
    return total


def fsum_complex(values):
    """Exactly rounded complex sum (independent accumulation for oracles)."""
    values = list(values)
    return complex(
        math.fsum(v.real for v in values), math.fsum(v.imag for v in values)
    )
