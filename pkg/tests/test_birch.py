from fractions import Fraction

import numpy as np
import pytest

from Toric_Agent.birch import BirchPointSolver, birch_point, random_point_in_polyhedron, transformed_entropy
from Toric_Agent.common.data_structures import RateAssignment, RateKind
from Toric_Agent.common.errors import MaxIterationsError, NotComplexBalancingError
from Toric_Agent.dynamics import InvariantPolyhedron, mass_action_rhs
from Toric_Agent.network_core import orthonormal_stoichiometric_basis
from Toric_Agent.tree_constants import tree_constants_minor


def skewed_triangle_rates():
    values = {(0, 1): 2, (1, 0): 1, (0, 2): 4, (2, 0): 1, (1, 2): 2, (2, 1): 1}
    return RateAssignment({e: Fraction(v) for e, v in values.items()}, RateKind.EXACT)


class TestTransformedEntropy:
    def test_zero_at_reference(self):
        assert transformed_entropy([1.0, 2.0], [1.0, 2.0]) == 0.0

    def test_positive_elsewhere(self):
        assert transformed_entropy([1.5, 1.0], [1.0, 2.0]) > 0

    def test_boundary_point(self):
        assert transformed_entropy([0.0, 2.0], [1.0, 2.0]) == pytest.approx(1.0)

    def test_known_value(self):
        assert transformed_entropy([2.0, 1.0], [1.0, 1.0]) == pytest.approx(2 * np.log(2) - 1, rel=1e-12)

    @pytest.mark.parametrize("name", ['triangle', 'trap'])
    def test_positive_on_polyhedron_away_from_birch_point(self, request, name):
        parsed = request.getfixturevalue(name)
        c0 = np.linspace(0.5, 2.0, parsed.network.s)
        c_star = birch_point(parsed.network, parsed.rates, c0).c_star
        assert transformed_entropy(c_star, c_star) == 0.0
        Q = orthonormal_stoichiometric_basis(parsed.network)
        rng = np.random.default_rng(5)
        for _ in range(100):
            point = random_point_in_polyhedron(c_star, Q, rng)
            assert np.linalg.norm(point - c_star) > 0
            assert transformed_entropy(point, c_star) > 0

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            transformed_entropy([-0.1, 1.0], [1.0, 1.0])


class TestBirchPoint:
    def test_triangle_uniform_rates(self, triangle):
        result = birch_point(triangle.network, triangle.rates, [2.0, 0.5])
        assert result.c_star == pytest.approx([1.25, 1.25], rel=1e-9)
        assert set(result.residuals) == {'affine', 'orthogonality', 'steady_relative', 'steady_absolute'}
        assert all(value <= 1e-8 for value in result.residuals.values())

    def test_steady_residual_reported_in_absolute_and_relative_form(self, triangle):
        values = {edge: Fraction(1000) for edge in triangle.rates.values}
        rates = RateAssignment(values, RateKind.EXACT)
        result = birch_point(triangle.network, rates, [20.0, 5.0])
        c1, c2 = result.c_star
        psi_norm = np.linalg.norm([c1 * c1, c1 * c2, c2 * c2])
        assert result.residuals['steady_absolute'] == pytest.approx(
            result.residuals['steady_relative'] * psi_norm * 1000, rel=1e-9, abs=1e-300)
        assert result.residuals['steady_relative'] <= 1e-8

    @pytest.mark.parametrize("rates_factory, c0", [
        (None, [3.0, 3.0]),
        (skewed_triangle_rates, [1.0, 2.0]),
    ])
    def test_start_on_steady_state_variety_needs_no_newton_step(self, triangle, rates_factory, c0):
        rates = triangle.rates if rates_factory is None else rates_factory()
        result = birch_point(triangle.network, rates, c0)
        assert result.iterations == 0
        assert np.array_equal(result.c_star, np.array(c0))

    @pytest.mark.parametrize("name", ['triangle', 'trap', 'recombination'])
    def test_objective_strictly_decreases(self, request, name):
        parsed = request.getfixturevalue(name)
        c0 = np.linspace(0.3, 2.5, parsed.network.s)
        solver = BirchPointSolver()
        solver.solve(parsed.network, parsed.rates, c0)
        history = solver.objective_history
        assert len(history) > 1
        assert all(later < earlier for earlier, later in zip(history, history[1:]))

    def test_ratio_follows_tree_constants(self, triangle):
        rates = skewed_triangle_rates()
        K = tree_constants_minor(triangle.network, rates).values
        c0 = np.array([2.0, 0.5])
        expected = np.array([float(K[1]), float(K[2])])
        expected *= c0.sum() / expected.sum()
        result = birch_point(triangle.network, rates, c0)
        assert result.c_star == pytest.approx(expected, rel=1e-9)

    def test_steady_state_on_trap(self, trap):
        c0 = np.linspace(0.5, 2.0, trap.network.s)
        result = birch_point(trap.network, trap.rates, c0)
        assert np.max(np.abs(mass_action_rhs(trap.network, trap.rates, result.c_star))) < 1e-8
        polyhedron = InvariantPolyhedron.from_network(trap.network, c0)
        assert polyhedron.conservation_drift(result.c_star) < 1e-8

    def test_uniqueness_probe(self, recombination):
        c0 = np.array([1.0, 2.0, 0.5, 1.5, 1.0, 0.7, 1.3, 2.2])
        probe = BirchPointSolver().probe_uniqueness(recombination.network, recombination.rates, c0,
                                                    starts=5, seed=7)
        assert len(probe['solutions']) == 5
        assert probe['spread'] <= 1e-8

    def test_not_complex_balancing(self, triangle):
        values = dict(triangle.rates.values)
        values[(0, 1)] = Fraction(2)
        with pytest.raises(NotComplexBalancingError):
            birch_point(triangle.network, RateAssignment(values, RateKind.EXACT), [1.0, 1.0])

    @pytest.mark.parametrize("c0", [[1.0], [1.0, 0.0], [1.0, -1.0], [np.inf, 1.0]])
    def test_invalid_initial(self, triangle, c0):
        with pytest.raises(ValueError):
            birch_point(triangle.network, triangle.rates, c0)

    def test_iteration_limit(self, triangle):
        with pytest.raises(MaxIterationsError) as excinfo:
            birch_point(triangle.network, triangle.rates, [2.0, 0.5], max_iterations=0)
        assert excinfo.value.to_dict()['error'] == 'MaxIterationsError'
