"""
网络核心模块 - 数据模型的解析/序列化与结构分析
"""

from .parser import (
    parse_network, serialize_network, parse_rates_file, merge_rates, parse_rate_literal
)
from .kinetics import (
    complex_monomials, check_row_sums, float_laplacian, exact_log, orthonormal_stoichiometric_basis
)
from .structure import (
    reaction_digraph, linkage_classes, class_of, is_weakly_reversible,
    stoichiometric_subspace, deficiency, laplacian, conservation_laws,
    conservation_vector, is_conservative, analyze, reachability_weakly_reversible
)

__all__ = [
    'parse_network', 'serialize_network', 'parse_rates_file', 'merge_rates', 'parse_rate_literal',
    'complex_monomials', 'check_row_sums', 'float_laplacian', 'exact_log', 'orthonormal_stoichiometric_basis',
    'reaction_digraph', 'linkage_classes', 'class_of', 'is_weakly_reversible',
    'stoichiometric_subspace', 'deficiency', 'laplacian', 'conservation_laws',
    'conservation_vector', 'is_conservative', 'analyze', 'reachability_weakly_reversible'
]
