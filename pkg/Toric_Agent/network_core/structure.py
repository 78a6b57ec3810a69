"""
结构分析：连通类、弱可逆性、化学计量子空间、亏量、Laplacian、守恒律

结构量一律用精确有理运算；连通性交给 networkx。
"""

import logging
from fractions import Fraction
from typing import List, Optional, Tuple

import networkx as nx
import numpy as np

from ..common.data_structures import (
    RateAssignment, RateKind, ReactionNetwork, StructuralReport, WeakReversibility
)
from ..common.errors import StructuralInconsistencyError
from ..common.exact_linalg import independent_rows, integer_kernel
from ..common.exact_lp import ExactSimplex

logger = logging.getLogger(__name__)


def reaction_digraph(network: ReactionNetwork) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(range(network.n))
    graph.add_edges_from(network.edges)
    return graph


def linkage_classes(network: ReactionNetwork) -> Tuple[Tuple[int, ...], ...]:
    """无向连通分量；类内升序，类按最小元素排序。l = len(返回值)"""
    graph = reaction_digraph(network).to_undirected()
    classes = [tuple(sorted(component)) for component in nx.connected_components(graph)]
    return tuple(sorted(classes))


def class_of(network: ReactionNetwork) -> Tuple[int, ...]:
    """每个配合物所在连通类的序号"""
    membership = [0] * network.n
    for index, cls in enumerate(linkage_classes(network)):
        for i in cls:
            membership[i] = index
    return tuple(membership)


def is_weakly_reversible(network: ReactionNetwork) -> WeakReversibility:
    """每个连通类作为有向图都强连通"""
    graph = reaction_digraph(network)
    per_class = tuple(
        nx.is_strongly_connected(graph.subgraph(cls))
        for cls in linkage_classes(network)
    )
    return WeakReversibility(weakly_reversible=all(per_class), per_class=per_class)


def stoichiometric_subspace(network: ReactionNetwork) -> Tuple[Tuple[Tuple[int, ...], ...], int]:
    """S 的整数基（反应向量的线性无关子集，按出现顺序）及 σ"""
    vectors = []
    for vec in network.reaction_vectors():
        if vec not in vectors:
            vectors.append(vec)
    if not vectors or network.s == 0:
        return (), 0
    pivots = independent_rows(vectors)
    basis = tuple(vectors[k] for k in pivots)
    return basis, len(basis)


def deficiency(network: ReactionNetwork, cross_check: bool = True) -> int:
    """δ = n - σ - l；可选与 Cayley 核维数交叉校验"""
    _, sigma = stoichiometric_subspace(network)
    l = len(linkage_classes(network))
    delta = network.n - sigma - l

    if cross_check:
        from ..cayley_lattice.cayley import cayley_kernel_dimension
        kernel_dim = cayley_kernel_dimension(network)
        if kernel_dim != delta or delta < 0:
            raise StructuralInconsistencyError(
                f"亏量交叉校验失败: n-σ-l = {delta}，Cayley 核维数 = {kernel_dim}")
    return delta


def laplacian(network: ReactionNetwork, rates: RateAssignment) -> np.ndarray:
    """
    A_κ（Laplacian 的相反数）

    非对角元 (i,j) 为 κ_ij，对角元使行和为零。精确模式下为 Fraction 的 object 数组。
    """
    rates.check_domain(network)
    n = network.n
    if rates.kind is RateKind.EXACT:
        matrix = np.full((n, n), Fraction(0), dtype=object)
    else:
        matrix = np.zeros((n, n), dtype=float)
    for (i, j), value in rates.values.items():
        matrix[i, j] = matrix[i, j] + value
        matrix[i, i] = matrix[i, i] - value
    return matrix


def conservation_laws(network: ReactionNetwork) -> Tuple[Tuple[int, ...], ...]:
    """S^⊥ 的整数基"""
    basis, sigma = stoichiometric_subspace(network)
    if sigma == 0:
        return tuple(tuple(int(i == k) for i in range(network.s)) for k in range(network.s))
    return integer_kernel(basis, network.s)


def conservation_vector(network: ReactionNetwork) -> Optional[Tuple[Fraction, ...]]:
    """严格正的守恒向量 m（m·(y_j - y_i) = 0，m ≥ 1）；不存在返回 None"""
    basis, sigma = stoichiometric_subspace(network)
    s = network.s
    if sigma == 0:
        return tuple(Fraction(1) for _ in range(s))
    # m = β + 1, β ≥ 0: R·β = -R·1
    rhs = [-sum(row) for row in basis]
    beta = ExactSimplex().feasible_point(s, A_eq=basis, b_eq=rhs)
    if beta is None:
        return None
    return tuple(b + 1 for b in beta)


def is_conservative(network: ReactionNetwork) -> bool:
    """存在严格正守恒律 ⇔ 不变多面体有界"""
    return conservation_vector(network) is not None


def analyze(network: ReactionNetwork) -> StructuralReport:
    """结构报告：连通类、弱可逆性、σ、δ、模空间余维数与 Lawrence 型"""
    from ..balancing.detailed import is_lawrence_type
    from ..cayley_lattice.cayley import cayley_kernel_dimension

    classes = linkage_classes(network)
    reversibility = is_weakly_reversible(network)
    basis, sigma = stoichiometric_subspace(network)
    delta = network.n - sigma - len(classes)
    kernel_dim = cayley_kernel_dimension(network)
    if kernel_dim != delta:
        raise StructuralInconsistencyError(
            f"亏量交叉校验失败: n-σ-l = {delta}，Cayley 核维数 = {kernel_dim}")

    report = StructuralReport(
        species=network.species,
        complexes=network.complexes,
        edges=network.edges,
        linkage_classes=classes,
        weakly_reversible=reversibility.weakly_reversible,
        strongly_connected_classes=reversibility.per_class,
        sigma=sigma,
        delta=delta,
        stoich_basis=basis,
        complex_labels=tuple(network.complex_label(i) for i in range(network.n)),
        moduli_codimension=kernel_dim,
        lawrence_type=is_lawrence_type(network),
    )
    logger.info(f"🔍 结构分析: n={network.n}, l={len(classes)}, σ={sigma}, δ={delta}, "
                f"弱可逆={reversibility.weakly_reversible}")
    return report


def reachability_weakly_reversible(network: ReactionNetwork) -> bool:
    """暴力可达性判定（同一连通类内两两可达），用作 is_weakly_reversible 的对照"""
    graph = reaction_digraph(network)
    reach: List[set] = [set(nx.descendants(graph, i)) | {i} for i in range(network.n)]
    for cls in linkage_classes(network):
        for i in cls:
            if not set(cls) <= reach[i]:
                return False
    return True
