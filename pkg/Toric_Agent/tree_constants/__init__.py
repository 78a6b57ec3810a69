"""
树常数模块 - Matrix-Tree 主子式与 i-树枚举
"""

from .matrix_tree import (
    tree_constants_minor, enumerate_i_trees, tree_constants_enumerated,
    tree_polynomial, kernel_residual
)

__all__ = [
    'tree_constants_minor', 'enumerate_i_trees', 'tree_constants_enumerated',
    'tree_polynomial', 'kernel_residual'
]
