"""
Birch 点模块 - 变换熵与 Birch 点求解
"""

from .solver import (
    transformed_entropy, BirchPointSolver, birch_point, random_point_in_polyhedron
)

__all__ = ['transformed_entropy', 'BirchPointSolver', 'birch_point', 'random_point_in_polyhedron']
