"""
动力学模块 - 右端项、Runge-Kutta 积分、不变多面体与监控
"""

from .rhs import MassActionSystem, mass_action_rhs, reversible_pair_rhs, detailed_rhs
from .integrators import RungeKuttaIntegrator, rk4_step, rkf45_step
from .polyhedron import InvariantPolyhedron, boundary_distance
from .simulation import simulate, lyapunov_derivative, attraction_sweep

__all__ = [
    'MassActionSystem', 'mass_action_rhs', 'reversible_pair_rhs', 'detailed_rhs',
    'RungeKuttaIntegrator', 'rk4_step', 'rkf45_step',
    'InvariantPolyhedron', 'boundary_distance',
    'simulate', 'lyapunov_derivative', 'attraction_sweep'
]
