"""
Toric Agent - 质量作用反应网络的环面动力系统分析

主要组件：
- 网络核心（解析、连通类、弱可逆性、亏量）
- 树常数（Matrix-Tree 主子式与 i-树枚举）
- Cayley 格（整数核与复平衡判定）
- 平衡（细致平衡、特解稳态、尺度向量）
- Birch 点求解与轨迹模拟
- 分层与 Farkas 证书
- 示例语料运行器
"""

from .network_core import parse_network, serialize_network, parse_rates_file, merge_rates, analyze
from .tree_constants import tree_constants_minor, tree_constants_enumerated, enumerate_i_trees
from .cayley_lattice import cayley_matrix, integer_kernel_basis, binomial_in_moduli, moduli_membership_exact
from .balancing import detailed_balancing_exact, particular_steady_state, scaling_vector
from .birch import BirchPointSolver, birch_point, transformed_entropy
from .dynamics import simulate, mass_action_rhs, detailed_rhs, InvariantPolyhedron
from .strata import acyclic_orientations, stratum_of, farkas_vector, descent_check
from .corpus import run_corpus
from .common.performance_monitor import AnalysisPerformanceMonitor

# 简写别名
check_complex_balancing = moduli_membership_exact
check_detailed_balancing = detailed_balancing_exact

__all__ = [
    'parse_network', 'serialize_network', 'parse_rates_file', 'merge_rates', 'analyze',
    'tree_constants_minor', 'tree_constants_enumerated', 'enumerate_i_trees',
    'cayley_matrix', 'integer_kernel_basis', 'binomial_in_moduli', 'moduli_membership_exact',
    'detailed_balancing_exact', 'particular_steady_state', 'scaling_vector',
    'BirchPointSolver', 'birch_point', 'transformed_entropy',
    'simulate', 'mass_action_rhs', 'detailed_rhs', 'InvariantPolyhedron',
    'acyclic_orientations', 'stratum_of', 'farkas_vector', 'descent_check',
    'run_corpus', 'AnalysisPerformanceMonitor',

    # 别名
    'check_complex_balancing',
    'check_detailed_balancing',
]

__version__ = "1.0.0"
__author__ = "Toric Agent Team"
