"""
环面动力系统分析 - 共同模块

包含各分析模块共享的数据结构、异常、精确线性代数与性能监控
"""

from .data_structures import (
    RateKind, IntegratorMethod, TrajectoryStatus,
    ReactionNetwork, RateAssignment, ParsedNetwork,
    WeakReversibility, StructuralReport, ITree, TreeConstants,
    CayleyMatrix, LatticeBasis, BinomialWitness, ModuliMembership,
    ReversiblePairing, CircuitWitness, DetailedBalancing, ScalingVector,
    BirchPoint, IntegratorConfig, MonitorSample, Trajectory,
    AcyclicOrientation, StratumLocation, FarkasCertificate, DualCertificate,
    DescentReport, number_to_json
)
from .errors import (
    ToricAgentError, NetworkInputError, NetworkSyntaxError, NetworkValidationError,
    RateAssignmentError, LatticeDimensionError, ToricDomainError,
    NotComplexBalancingError, NotDetailedBalancingError, NotReversibleError,
    MaxIterationsError, NonFiniteStateError, EnumerationGuardError,
    StructuralInconsistencyError
)
from .exact_lp import ExactSimplex
from .performance_monitor import AnalysisPerformanceMonitor

__all__ = [
    'RateKind', 'IntegratorMethod', 'TrajectoryStatus',
    'ReactionNetwork', 'RateAssignment', 'ParsedNetwork',
    'WeakReversibility', 'StructuralReport', 'ITree', 'TreeConstants',
    'CayleyMatrix', 'LatticeBasis', 'BinomialWitness', 'ModuliMembership',
    'ReversiblePairing', 'CircuitWitness', 'DetailedBalancing', 'ScalingVector',
    'BirchPoint', 'IntegratorConfig', 'MonitorSample', 'Trajectory',
    'AcyclicOrientation', 'StratumLocation', 'FarkasCertificate', 'DualCertificate',
    'DescentReport', 'number_to_json',
    'ToricAgentError', 'NetworkInputError', 'NetworkSyntaxError', 'NetworkValidationError',
    'RateAssignmentError', 'LatticeDimensionError', 'ToricDomainError',
    'NotComplexBalancingError', 'NotDetailedBalancingError', 'NotReversibleError',
    'MaxIterationsError', 'NonFiniteStateError', 'EnumerationGuardError',
    'StructuralInconsistencyError',
    'ExactSimplex', 'AnalysisPerformanceMonitor'
]
