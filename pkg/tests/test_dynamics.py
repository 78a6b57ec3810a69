import math
from fractions import Fraction

import numpy as np
import pytest

from Toric_Agent.balancing import particular_steady_state, scaling_vector
from Toric_Agent.common.data_structures import IntegratorConfig, RateAssignment, RateKind, TrajectoryStatus
from Toric_Agent.common.errors import NonFiniteStateError, NotReversibleError
from Toric_Agent.dynamics import (
    InvariantPolyhedron, MassActionSystem, RungeKuttaIntegrator, attraction_sweep, boundary_distance,
    detailed_rhs, lyapunov_derivative, mass_action_rhs, reversible_pair_rhs, rk4_step, simulate
)
from Toric_Agent.network_core import parse_network

TIGHT = dict(rtol=1e-10, atol=1e-12)


def _random_positive(rng, s, low=0.1, high=3.0):
    return np.array([rng.uniform(low, high) for _ in range(s)])


class TestRightHandSide:
    @pytest.mark.parametrize("fixture", ['triangle', 'trap', 'recombination'])
    def test_pair_form_matches_mass_action(self, fixture, request, rng):
        parsed = request.getfixturevalue(fixture)
        for _ in range(100):
            c = _random_positive(rng, parsed.network.s)
            expected = mass_action_rhs(parsed.network, parsed.rates, c)
            actual = reversible_pair_rhs(parsed.network, parsed.rates, c)
            assert np.allclose(actual, expected, atol=1e-12, rtol=1e-12)

    def test_triangle_uniform_example(self, triangle):
        c = [2.0, 1.0]
        assert detailed_rhs(triangle.network, [1.0, 1.0], c).tolist() == [-9.0, 9.0]
        assert mass_action_rhs(triangle.network, triangle.rates, c).tolist() == [-9.0, 9.0]

    def test_vanishes_at_inverse_scaling(self, triangle):
        L = np.array([0.5, 2.0])
        assert np.allclose(detailed_rhs(triangle.network, L, 1.0 / L), 0.0, atol=1e-14)

    def test_weighted_form_matches_mass_action(self, triangle, rng):
        values = {(0, 1): 2, (1, 0): 1, (0, 2): 4, (2, 0): 1, (1, 2): 2, (2, 1): 1}
        rates = RateAssignment({e: Fraction(v) for e, v in values.items()}, RateKind.EXACT)
        L = scaling_vector(triangle.network, rates, [1.0, 1.0]).values
        for _ in range(50):
            c = _random_positive(rng, 2)
            assert np.allclose(detailed_rhs(triangle.network, L, c, rates=rates),
                               mass_action_rhs(triangle.network, rates, c), atol=1e-10)

    def test_not_reversible(self, two_substrate):
        with pytest.raises(NotReversibleError):
            detailed_rhs(two_substrate.network, np.ones(two_substrate.network.s),
                         np.ones(two_substrate.network.s))
        with pytest.raises(NotReversibleError):
            reversible_pair_rhs(two_substrate.network, two_substrate.rates,
                                np.ones(two_substrate.network.s))

    def test_negative_concentration_rejected(self, triangle):
        with pytest.raises(ValueError):
            mass_action_rhs(triangle.network, triangle.rates, [-1.0, 1.0])

    def test_integrator_rhs_does_not_clip(self):
        parsed = parse_network("A -> B ; k=1\n")
        system = MassActionSystem(parsed.network, parsed.rates)
        assert system(0.0, np.array([-1e-3, 1.0])) == pytest.approx([1e-3, -1e-3], rel=1e-12)

    def test_zero_complex_monomial(self, two_substrate):
        rhs = mass_action_rhs(two_substrate.network, two_substrate.rates, np.zeros(two_substrate.network.s))
        # 只有流入反应 0 -> S1、0 -> S2 在零浓度处有通量
        assert rhs[two_substrate.network.species.index('S1')] == pytest.approx(1.0)
        assert rhs[two_substrate.network.species.index('S2')] == pytest.approx(1.0)


class TestIntegrator:
    def test_rk4_step_accuracy(self):
        y = rk4_step(lambda t, y: -y, 0.0, np.array([1.0]), 0.1)
        assert abs(y[0] - math.exp(-0.1)) < 1e-6

    def test_step_collapse(self):
        config = IntegratorConfig(method='rk4', step=1e-2, t_end=1.0, convergence_tol=None)
        status, t, y = RungeKuttaIntegrator(config).integrate(lambda t, y: -1e20 * np.ones_like(y),
                                                              np.array([1.0]))
        assert status is TrajectoryStatus.STEP_COLLAPSE
        assert t == 0.0

    def test_non_finite_state(self):
        config = IntegratorConfig(t_end=1.0, convergence_tol=None)
        with pytest.raises(NonFiniteStateError):
            RungeKuttaIntegrator(config).integrate(lambda t, y: np.full_like(y, np.nan), np.array([1.0]))

    def test_max_steps(self):
        config = IntegratorConfig(method='rk4', max_steps=3, convergence_tol=None)
        status, t, _ = RungeKuttaIntegrator(config).integrate(lambda t, y: -y, np.array([1.0]))
        assert status is TrajectoryStatus.MAX_STEPS
        assert t == pytest.approx(0.03)

    def test_invalid_config(self):
        with pytest.raises(ValueError):
            IntegratorConfig(step=0.0)


class TestPolyhedron:
    def test_triangle_segment(self, triangle):
        net = triangle.network
        polyhedron = InvariantPolyhedron.from_network(net, [1.0, 1.0])
        assert polyhedron.dimension == 1
        assert boundary_distance([1.0, 1.0]) == 1.0
        assert polyhedron.boundary_distance([1.0, 1.0]) == pytest.approx(math.sqrt(2))
        assert polyhedron.boundary_distance([0.0, 2.0]) == 0.0
        assert polyhedron.faces_near([1e-3, 1.999], eps=0.01) == (0,)
        assert polyhedron.inward_normal((0,)) == pytest.approx([1 / math.sqrt(2), -1 / math.sqrt(2)])
        assert polyhedron.contains([0.5, 1.5])
        assert not polyhedron.contains([1.0, 2.0])


class TestSimulation:
    def test_triangle_converges_to_birch_point(self, triangle):
        trajectory = simulate(triangle.network, triangle.rates, [2.0, 0.5])
        assert trajectory.status is TrajectoryStatus.CONVERGED
        assert trajectory.final_state == pytest.approx([1.25, 1.25], abs=1e-6)
        assert len(trajectory.monitors) == len(trajectory.states) == len(trajectory.times)
        assert all(b > a for a, b in zip(trajectory.times, trajectory.times[1:]))

    @pytest.mark.parametrize("fixture", ['triangle', 'trap'])
    def test_entropy_descent_and_attraction(self, fixture, request, rng):
        parsed = request.getfixturevalue(fixture)
        config = IntegratorConfig(t_end=200.0, **TIGHT)
        for _ in range(20):
            c0 = _random_positive(rng, parsed.network.s)
            trajectory = simulate(parsed.network, parsed.rates, c0, config=config)
            energies = [m.E_value for m in trajectory.monitors]
            assert all(b <= a + 1e-10 for a, b in zip(energies, energies[1:]))
            assert max(m.conservation_drift for m in trajectory.monitors) <= 1e-8
            assert trajectory.monitors[-1].distance_to_birch <= 1e-6

    def test_rk4_and_rk45_agree(self, triangle):
        c0 = [2.0, 0.5]
        fixed = simulate(triangle.network, triangle.rates, c0,
                         config=IntegratorConfig(method='rk4', step=1e-2, t_end=50.0, convergence_tol=None))
        adaptive = simulate(triangle.network, triangle.rates, c0,
                            config=IntegratorConfig(t_end=50.0, convergence_tol=None))
        assert fixed.status is adaptive.status is TrajectoryStatus.COMPLETED
        assert np.allclose(fixed.final_state, adaptive.final_state, atol=1e-6)

    def test_without_birch_point(self, triangle_noncyclic):
        trajectory = simulate(triangle_noncyclic.network, triangle_noncyclic.rates, [1.0, 1.0],
                              config=IntegratorConfig(t_end=5.0))
        assert trajectory.c_star is None
        assert all(m.E_value is None for m in trajectory.monitors)
        assert max(m.conservation_drift for m in trajectory.monitors) <= 1e-8

    def test_invalid_initial(self, triangle):
        with pytest.raises(ValueError):
            simulate(triangle.network, triangle.rates, [0.0, 1.0])

    def test_csv_layout(self, triangle):
        trajectory = simulate(triangle.network, triangle.rates, [2.0, 0.5], config=IntegratorConfig(t_end=1.0))
        assert trajectory.csv_header(2) == [
            't', 'c_1', 'c_2', 'E', 'conservation_drift', 'boundary_distance', 'dist_to_birch']
        rows = trajectory.csv_rows()
        assert len(rows) == len(trajectory)
        assert all(len(row) == 7 for row in rows)

    def test_attraction_sweep(self, trap, rng):
        starts = [_random_positive(rng, trap.network.s) for _ in range(4)]
        distances = attraction_sweep(trap.network, trap.rates, starts)
        assert len(distances) == 4
        assert max(distances) <= 1e-6


class TestLyapunov:
    @pytest.mark.parametrize("fixture", ['triangle', 'trap', 'recombination'])
    def test_derivative_non_positive(self, fixture, request, rng):
        parsed = request.getfixturevalue(fixture)
        c_star = particular_steady_state(parsed.network, parsed.rates)
        assert abs(lyapunov_derivative(parsed.network, parsed.rates, c_star, c_star)) <= 1e-9
        for _ in range(1000):
            c = _random_positive(rng, parsed.network.s, low=0.05, high=5.0)
            assert lyapunov_derivative(parsed.network, parsed.rates, c, c_star) <= 1e-9
