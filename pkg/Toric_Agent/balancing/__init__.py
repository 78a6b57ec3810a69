"""
平衡模块 - 细致平衡判定、特解稳态与尺度向量
"""

from .detailed import (
    reversible_pairing, is_lawrence_type, pair_matrix, circuit_basis,
    detailed_balancing_exact, circuit_identities_hold
)
from .steady_state import (
    particular_steady_state, steady_state_binomial_residuals,
    complex_balance_residual, scaling_vector
)

__all__ = [
    'reversible_pairing', 'is_lawrence_type', 'pair_matrix', 'circuit_basis',
    'detailed_balancing_exact', 'circuit_identities_hold',
    'particular_steady_state', 'steady_state_binomial_residuals',
    'complex_balance_residual', 'scaling_vector'
]
