"""
Cayley 格模块 - Cayley 矩阵、整数核与模空间成员判定
"""

from .cayley import (
    cayley_matrix, cayley_rank, cayley_kernel_dimension, extended_cayley_matrix,
    integer_kernel_basis, saturated_kernel_basis, binomial_in_moduli,
    moduli_membership_exact
)

__all__ = [
    'cayley_matrix', 'cayley_rank', 'cayley_kernel_dimension', 'extended_cayley_matrix',
    'integer_kernel_basis', 'saturated_kernel_basis', 'binomial_in_moduli',
    'moduli_membership_exact'
]
