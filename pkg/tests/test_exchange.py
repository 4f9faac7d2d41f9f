import math
import random

import pytest

from anyonsim import (
    DiscretePath,
    Direction,
    EndpointPair,
    ExchangeGeometry,
    FundamentalDomain,
    HomotopyClass,
    Kind,
    OpClass,
    PhysicsParams,
    ResolvedKernel,
    StatisticsSpec,
    TwoParticleConfig,
    Vec2,
    build_exchange_path,
    classify,
    concat_paths,
    dephasing_exponent,
    exchange_phase,
    path_amplitude,
    step_factors,
    swap,
    theta_sweep,
    total_angle,
)
from anyonsim.errors import (
    DegenerateGrid,
    NoDominantClass,
    NotExchangeKernel,
    ValidationError,
)

TAU = 2 * math.pi


def angle_close(a, b, tol=1e-9):
    return abs(math.remainder(a - b, TAU)) <= tol


class TestBuildExchangePath:
    def test_two_step_ccw_geometry(self):
        geom = ExchangeGeometry(radius=1.0, n_steps=2, dt=1.0)
        path = build_exchange_path(geom)
        p1 = [c.p1 for c in path.configs]
        assert p1[0] == Vec2(1.0, 0.0)
        assert p1[1].x == pytest.approx(0.0, abs=1e-15)
        assert p1[1].y == pytest.approx(1.0)
        assert p1[2] == Vec2(-1.0, 0.0)
        for c in path.configs:
            assert c.p2.x == pytest.approx(-c.p1.x) and c.p2.y == pytest.approx(-c.p1.y)
        assert classify(path) == HomotopyClass(Kind.EXCHANGE, 0.5)

    def test_cw_mirrors(self):
        geom = ExchangeGeometry(radius=1.0, n_steps=6, dt=0.5, direction=Direction.CW)
        assert classify(build_exchange_path(geom)) == HomotopyClass(Kind.EXCHANGE, -0.5)

    @pytest.mark.parametrize("n_steps", [2, 3, 5, 16, 64])
    def test_total_angle_is_half_turn(self, n_steps):
        geom = ExchangeGeometry(radius=0.7, n_steps=n_steps, dt=0.1)
        assert total_angle(build_exchange_path(geom)) == pytest.approx(math.pi, abs=1e-9)

    def test_ends_exactly_swapped(self):
        geom = ExchangeGeometry(radius=1.3, n_steps=7, dt=0.2, center=Vec2(0.4, -2.0))
        path = build_exchange_path(geom)
        assert path.end == swap(path.start)

    def test_double_exchange_is_full_rotation(self):
        geom = ExchangeGeometry(radius=1.0, n_steps=8, dt=0.25)
        first = build_exchange_path(geom)
        second = DiscretePath(first.dt, tuple(swap(c) for c in first.configs))
        loop = concat_paths(first, second)
        assert classify(loop) == HomotopyClass(Kind.DIRECT, 1.0)

    def test_geometry_validation(self):
        with pytest.raises(ValidationError):
            ExchangeGeometry(radius=0.0, n_steps=4, dt=0.1)
        with pytest.raises(ValidationError):
            ExchangeGeometry(radius=1.0, n_steps=1, dt=0.1)


class TestFundamentalDomain:
    def test_exactly_one_of_config_and_swap(self):
        rng = random.Random(19)
        domain = FundamentalDomain()
        for _ in range(500):
            c = TwoParticleConfig(
                Vec2(rng.uniform(-3, 3), rng.uniform(-3, 3)),
                Vec2(rng.uniform(-3, 3), rng.uniform(-3, 3)),
            )
            if c.coincident:
                continue
            assert domain.contains(c) != domain.contains(swap(c))

    def test_boundary_rays(self):
        domain = FundamentalDomain()
        assert domain.contains(TwoParticleConfig(Vec2(1, 0), Vec2(-1, 0)))
        assert not domain.contains(TwoParticleConfig(Vec2(-1, 0), Vec2(1, 0)))


class TestStepFactors:
    def test_stationary_step_at_separation_two(self):
        c = TwoParticleConfig(Vec2(1.0, 0.0), Vec2(-1.0, 0.0))
        path = DiscretePath(dt=1.0, configs=(c, c))
        (factor,) = step_factors(path)
        assert factor.alpha_dir == 1 + 0j
        assert factor.action_dir == 0.0
        # opposite transition carries each particle across distance D = 2
        assert factor.action_op == pytest.approx(4.0)
        assert factor.alpha_op == pytest.approx(complex(math.cos(4), math.sin(4)))
        assert not factor.flipped

    def test_halving_dt_doubles_opposite_phase(self):
        c = TwoParticleConfig(Vec2(1.0, 0.0), Vec2(-1.0, 0.0))
        coarse = step_factors(DiscretePath(dt=1.0, configs=(c, c)))[0]
        fine = step_factors(DiscretePath(dt=0.5, configs=(c, c)))[0]
        assert fine.action_op == pytest.approx(2 * coarse.action_op)

    def test_unit_modulus_along_exchange(self):
        geom = ExchangeGeometry(radius=1.0, n_steps=12, dt=0.05)
        for factor in step_factors(build_exchange_path(geom), PhysicsParams(mass=2.0)):
            assert abs(factor.alpha_dir) == pytest.approx(1.0)
            assert abs(factor.alpha_op) == pytest.approx(1.0)

    @pytest.mark.parametrize("n_steps", [2, 3, 8, 33])
    @pytest.mark.parametrize("direction", [Direction.CCW, Direction.CW])
    def test_simple_exchange_flips_once(self, n_steps, direction):
        geom = ExchangeGeometry(radius=1.0, n_steps=n_steps, dt=0.1, direction=direction)
        path = build_exchange_path(geom)
        factors = step_factors(path)
        # independent oracle: evaluate the [0, pi) rule per config via atan2
        angles = [math.atan2(c.relative.y, c.relative.x) % TAU for c in path.configs]
        inside = [0.0 <= a < math.pi for a in angles]
        expected = sum(1 for k in range(len(inside) - 1) if inside[k] != inside[k + 1])
        assert expected == 1
        assert sum(1 for f in factors if f.flipped) == 1


class TestDephasing:
    def test_slope_matches_m_d_squared(self):
        geom = ExchangeGeometry(radius=1.0, n_steps=100, dt=0.02)
        fit = dephasing_exponent(geom, PhysicsParams(), [0.1, 0.05, 0.025, 0.0125])
        assert fit.predicted == 4.0
        assert fit.rel_error < 0.01

    def test_doubling_distance_quadruples_slope(self):
        params = PhysicsParams()
        grid = [0.1, 0.05, 0.025, 0.0125]
        small = dephasing_exponent(ExchangeGeometry(radius=1.0, n_steps=100, dt=0.02), params, grid)
        large = dephasing_exponent(ExchangeGeometry(radius=2.0, n_steps=100, dt=0.02), params, grid)
        assert large.slope == pytest.approx(4 * small.slope, rel=1e-3)

    def test_slope_insensitive_to_reference_step_count(self):
        # same total duration, different nominal discretization of geom
        params = PhysicsParams()
        grid = [0.1, 0.05, 0.025, 0.0125]
        a = dephasing_exponent(ExchangeGeometry(radius=1.0, n_steps=100, dt=0.02), params, grid)
        b = dephasing_exponent(ExchangeGeometry(radius=1.0, n_steps=50, dt=0.04), params, grid)
        assert a.slope == pytest.approx(b.slope, rel=1e-12)

    def test_direct_phase_vanishes_linearly(self):
        geom = ExchangeGeometry(radius=1.0, n_steps=100, dt=0.02)
        fit = dephasing_exponent(geom, PhysicsParams(), [0.2, 0.1, 0.05, 0.02])
        ratios = [s.phase_dir / s.dt for s in fit.samples]
        assert max(ratios) - min(ratios) < 0.02 * max(ratios)

    def test_degenerate_grid(self):
        geom = ExchangeGeometry(radius=1.0, n_steps=16, dt=0.125)
        with pytest.raises(DegenerateGrid):
            dephasing_exponent(geom, PhysicsParams(), [0.1, 0.05])
        with pytest.raises(DegenerateGrid):
            dephasing_exponent(geom, PhysicsParams(), [0.1, 0.1, 0.1])
        with pytest.raises(DegenerateGrid):
            dephasing_exponent(geom, PhysicsParams(), [0.1, -0.2, 0.05])

    def test_dt_larger_than_half_duration_rejected(self):
        geom = ExchangeGeometry(radius=1.0, n_steps=16, dt=0.125)  # duration 2.0
        with pytest.raises(DegenerateGrid):
            dephasing_exponent(geom, PhysicsParams(), [2.0, 0.1, 0.05])


def _one_path_kernel(direction=Direction.CCW):
    geom = ExchangeGeometry(radius=1.0, n_steps=8, dt=0.125, direction=direction)
    path = build_exchange_path(geom)
    return ResolvedKernel(
        endpoints=EndpointPair(path.start, path.end),
        n_steps=path.n_steps,
        partials={classify(path): path_amplitude(path)},
    )


class TestExchangePhase:
    def test_theta_zero_boson(self):
        result = exchange_phase(_one_path_kernel(), StatisticsSpec(0.0, OpClass.BOSON))
        assert angle_close(result.phi, 0.0)

    def test_theta_zero_fermion(self):
        result = exchange_phase(_one_path_kernel(), StatisticsSpec(0.0, OpClass.FERMION))
        assert angle_close(result.phi, math.pi)

    def test_theta_pi_boson(self):
        result = exchange_phase(_one_path_kernel(), StatisticsSpec(math.pi, OpClass.BOSON))
        assert angle_close(result.phi, math.pi / 2)

    def test_boson_fermion_differ_by_pi(self):
        for theta in (0.0, 0.7, math.pi, 5.0, 11.3):
            b = exchange_phase(_one_path_kernel(), StatisticsSpec(theta, OpClass.BOSON))
            f = exchange_phase(_one_path_kernel(), StatisticsSpec(theta, OpClass.FERMION))
            assert angle_close(f.phi - b.phi, math.pi)

    def test_amplitude_diagnostic(self):
        kernel = _one_path_kernel()
        result = exchange_phase(kernel, StatisticsSpec(0.0, OpClass.FERMION))
        (amp,) = kernel.partials.values()
        assert result.amplitude == pytest.approx(-amp)

    def test_direct_kernel_rejected(self):
        start = TwoParticleConfig(Vec2(1, 0), Vec2(-1, 0))
        kernel = ResolvedKernel(
            endpoints=EndpointPair(start, start),
            n_steps=2,
            partials={HomotopyClass(Kind.DIRECT, 0.0): 1 + 0j},
        )
        with pytest.raises(NotExchangeKernel):
            exchange_phase(kernel, StatisticsSpec(0.0, OpClass.BOSON))

    def test_no_dominant_class(self):
        with pytest.raises(NoDominantClass):
            exchange_phase(
                _one_path_kernel(Direction.CW), StatisticsSpec(0.0, OpClass.BOSON)
            )


class TestThetaSweep:
    def test_boson_phi_values(self):
        geom = ExchangeGeometry(radius=1.0, n_steps=8, dt=0.125)
        grid = [StatisticsSpec(t, OpClass.BOSON) for t in (0.0, math.pi, TAU)]
        rows = theta_sweep(geom, PhysicsParams(), grid)
        assert [r.phi for r in rows] == pytest.approx([0.0, math.pi / 2, math.pi], abs=1e-9)

    def test_fermion_wraps(self):
        geom = ExchangeGeometry(radius=1.0, n_steps=8, dt=0.125)
        rows = theta_sweep(
            geom,
            PhysicsParams(),
            [StatisticsSpec(t, OpClass.FERMION) for t in (0.0, TAU)],
        )
        assert angle_close(rows[0].phi, math.pi)
        assert angle_close(rows[1].phi, 0.0)

    def test_slope_is_half(self):
        geom = ExchangeGeometry(radius=1.0, n_steps=8, dt=0.125)
        thetas = [0.3 + 0.4 * k for k in range(8)]
        rows = theta_sweep(
            geom, PhysicsParams(), [StatisticsSpec(t, OpClass.BOSON) for t in thetas]
        )
        for row in rows:
            assert angle_close(row.phi, row.theta / 2)

    def test_empty_grid(self):
        geom = ExchangeGeometry(radius=1.0, n_steps=8, dt=0.125)
        assert theta_sweep(geom, PhysicsParams(), []) == ()
