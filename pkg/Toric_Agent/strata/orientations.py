"""
无环定向与分层

每个可逆对 {i,j} 选一个方向；诱导有向图无环即为一个分层的标签。
点 c 所在分层由 (L*c)^{y_i} 与 (L*c)^{y_j} 的严格大小关系决定，相对差在 tie_tol 内视为平局。
"""

import logging
from itertools import product
from typing import List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from config.settings import get_config
from ..balancing.detailed import reversible_pairing
from ..common.data_structures import AcyclicOrientation, ReactionNetwork, StratumLocation
from ..common.errors import EnumerationGuardError, NotReversibleError
from ..network_core.kinetics import complex_monomials

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


def _pairs(network: ReactionNetwork) -> Tuple[Edge, ...]:
    pairing = reversible_pairing(network)
    if not pairing.fully_reversible:
        raise NotReversibleError("分层只对可逆网络定义")
    return pairing.pairs


def orientation_from_edges(network: ReactionNetwork, edges: Sequence[Edge]) -> Optional[AcyclicOrientation]:
    """定向图无环时返回带拓扑序的 AcyclicOrientation（边按可逆对次序排列），否则 None"""
    edges = tuple(sorted(edges, key=lambda e: (min(e), max(e))))
    graph = nx.DiGraph()
    graph.add_nodes_from(range(network.n))
    graph.add_edges_from(edges)
    if not nx.is_directed_acyclic_graph(graph):
        return None
    order = tuple(nx.lexicographical_topological_sort(graph))
    return AcyclicOrientation(edges=edges, topological_order=order)


def acyclic_orientations(network: ReactionNetwork, max_pairs: Optional[int] = None) -> List[AcyclicOrientation]:
    """穷举 2^p 种定向，保留无环者；第 k 位为 0 表示 i→j（i<j）"""
    pairs = _pairs(network)
    guard = int(max_pairs if max_pairs is not None else get_config()['strata']['max_pairs'])
    if len(pairs) > guard:
        raise EnumerationGuardError(f"可逆对数 {len(pairs)} 超过定向枚举上限 {guard}",
                                    size=len(pairs), limit=guard)

    orientations = []
    for mask in range(2 ** len(pairs)):
        edges = [
            (i, j) if not (mask >> k) & 1 else (j, i)
            for k, (i, j) in enumerate(pairs)
        ]
        orientation = orientation_from_edges(network, edges)
        if orientation is not None:
            orientations.append(orientation)
    logger.debug(f"{len(pairs)} 个可逆对，{len(orientations)} 个无环定向")
    return orientations


def _scaled_monomials(network: ReactionNetwork, L: Sequence[float], c: Sequence[float]) -> np.ndarray:
    L = np.asarray(L, dtype=float)
    c = np.asarray(c, dtype=float)
    if np.any(L <= 0):
        raise ValueError("尺度向量 L 必须严格为正")
    if np.any(c < 0):
        raise ValueError("浓度不能为负")
    return complex_monomials(network, L * c)


def stratum_of(network: ReactionNetwork, L: Sequence[float], c: Sequence[float],
               tie_tol: Optional[float] = None) -> StratumLocation:
    """按 (L*c)^{y_i} > (L*c)^{y_j} 给每个可逆对定向；相对差 ≤ tie_tol 记为平局"""
    tie_tol = tie_tol if tie_tol is not None else get_config()['numerics']['tie_tol']
    values = _scaled_monomials(network, L, c)
    strict, tied = [], []
    for i, j in _pairs(network):
        vi, vj = values[i], values[j]
        if abs(vi - vj) <= tie_tol * max(abs(vi), abs(vj)):
            tied.append((i, j))
        elif vi > vj:
            strict.append((i, j))
        else:
            strict.append((j, i))

    orientation = None
    if not tied:
        orientation = orientation_from_edges(network, strict)
    return StratumLocation(orientation=orientation, strict_edges=tuple(strict), tied_pairs=tuple(tied))


def stratum_closure_orientations(network: ReactionNetwork, L: Sequence[float], c: Sequence[float],
                                 tie_tol: Optional[float] = None,
                                 max_completions: Optional[int] = None) -> List[AcyclicOrientation]:
    """与严格不等式一致的全部无环补全；点位于这些分层的闭包中"""
    location = stratum_of(network, L, c, tie_tol)
    if location.orientation is not None:
        return [location.orientation]

    guard = int(max_completions if max_completions is not None else get_config()['strata']['max_tie_completions'])
    tied = location.tied_pairs
    if 2 ** len(tied) > guard:
        raise EnumerationGuardError(f"{len(tied)} 个平局对的补全数超过上限 {guard}",
                                    size=2 ** len(tied), limit=guard)

    completions = []
    for choice in product((0, 1), repeat=len(tied)):
        extra = [(i, j) if bit == 0 else (j, i) for bit, (i, j) in zip(choice, tied)]
        orientation = orientation_from_edges(network, list(location.strict_edges) + extra)
        if orientation is not None:
            completions.append(orientation)
    return completions
