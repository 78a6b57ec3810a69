from fractions import Fraction

import numpy as np
import pytest

from Toric_Agent.balancing import (
    circuit_identities_hold, complex_balance_residual, detailed_balancing_exact, is_lawrence_type,
    particular_steady_state, reversible_pairing, scaling_vector, steady_state_binomial_residuals
)
from Toric_Agent.cayley_lattice import moduli_membership_exact
from Toric_Agent.common.data_structures import RateAssignment, RateKind
from Toric_Agent.common.errors import NotComplexBalancingError, NotDetailedBalancingError
from Toric_Agent.network_core import complex_monomials

# 三角形网络的三个回路（按可逆对 (1,2),(1,3),(2,3) 排列）
TRIANGLE_CIRCUITS = ((2, -1, 0), (0, -1, 2), (1, 0, -1))


def triangle_rates(k12=2, k21=1, k13=4, k31=1, k23=2, k32=1):
    values = {(0, 1): k12, (1, 0): k21, (0, 2): k13, (2, 0): k31, (1, 2): k23, (2, 1): k32}
    return RateAssignment({e: Fraction(v) for e, v in values.items()}, RateKind.EXACT)


class TestPairing:
    def test_triangle_pairs(self, triangle):
        pairing = reversible_pairing(triangle.network)
        assert pairing.pairs == ((0, 1), (0, 2), (1, 2))
        assert pairing.fully_reversible

    def test_leftover_edges(self, two_substrate):
        pairing = reversible_pairing(two_substrate.network)
        assert not pairing.fully_reversible
        assert len(pairing.leftover) == 2

    def test_lawrence_type(self, trap, triangle):
        assert is_lawrence_type(trap.network)
        assert not is_lawrence_type(triangle.network)


class TestDetailedBalancing:
    def test_triangle_identities_hold(self, triangle):
        rates = triangle_rates()
        assert circuit_identities_hold(triangle.network, rates, TRIANGLE_CIRCUITS) == [True, True, True]
        assert detailed_balancing_exact(triangle.network, rates).balanced
        assert moduli_membership_exact(triangle.network, rates).balanced

    @pytest.mark.parametrize("override,expected", [
        ({'k12': 3}, [False, True, False]),
        ({'k23': 3}, [True, False, False]),
        ({'k13': 5}, [False, False, True]),
    ])
    def test_broken_identity(self, triangle, override, expected):
        rates = triangle_rates(**override)
        assert circuit_identities_hold(triangle.network, rates, TRIANGLE_CIRCUITS) == expected
        result = detailed_balancing_exact(triangle.network, rates)
        assert not result.balanced
        assert result.reason == "circuit violated"
        assert result.violated.product != 1
        assert result.to_dict()['detailed_balancing'] is False

    def test_not_reversible(self, two_substrate):
        result = detailed_balancing_exact(two_substrate.network, two_substrate.rates)
        assert not result.balanced
        assert result.reason == "not reversible"

    def test_zero_circuits_always_balanced(self, trap, rng, rate_sampler):
        for _ in range(20):
            rates = rate_sampler(trap.network, rng)
            result = detailed_balancing_exact(trap.network, rates)
            assert result.balanced
            assert len(result.circuits) == 0
            assert moduli_membership_exact(trap.network, rates).balanced

    def test_detailed_implies_complex_balancing(self, rng, reversible_factory, rate_sampler,
                                                detailed_rates_factory):
        for _ in range(100):
            net = reversible_factory(rng, rng.randint(3, 6), pairs=rng.randint(2, 5))
            rates, c_star = detailed_rates_factory(net, rng)
            assert detailed_balancing_exact(net, rates).balanced
            assert moduli_membership_exact(net, rates).balanced
            point = [float(x) for x in c_star]
            scale = max(float(v) for v in rates.values.values()) * float(np.max(complex_monomials(net, point)))
            residual = complex_balance_residual(net, rates, point)
            assert np.max(np.abs(residual)) <= 1e-12 * scale

            random_rates = rate_sampler(net, rng)
            if detailed_balancing_exact(net, random_rates).balanced:
                assert moduli_membership_exact(net, random_rates).balanced


class TestSteadyState:
    def test_triangle_uniform(self, triangle):
        c_hat = particular_steady_state(triangle.network, triangle.rates)
        assert c_hat[0] == pytest.approx(c_hat[1], rel=1e-12)

    def test_binomials_vanish_at_particular_solution(self, recombination):
        c_hat = particular_steady_state(recombination.network, recombination.rates)
        residuals = steady_state_binomial_residuals(recombination.network, recombination.rates, c_hat)
        assert np.max(np.abs(residuals)) < 1e-8

    def test_not_complex_balancing(self, triangle):
        with pytest.raises(NotComplexBalancingError):
            particular_steady_state(triangle.network, triangle_rates(k12=2, k13=1, k23=1))

    def test_non_weakly_reversible(self, triangle_noncyclic):
        with pytest.raises(NotComplexBalancingError):
            particular_steady_state(triangle_noncyclic.network, triangle_noncyclic.rates)


class TestScalingVector:
    def test_triangle(self, triangle):
        result = scaling_vector(triangle.network, triangle_rates(), [1.0, 1.0])
        assert result.birch_point == pytest.approx((2 / 3, 4 / 3), rel=1e-8)
        assert result.values == pytest.approx((1.5, 0.75), rel=1e-8)

    def test_requires_detailed_balancing(self, triangle):
        with pytest.raises(NotDetailedBalancingError):
            scaling_vector(triangle.network, triangle_rates(k12=2, k13=1, k23=1), [1.0, 1.0])
