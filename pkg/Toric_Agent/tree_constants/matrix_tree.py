"""
树常数 K_i

两条独立路径：
1. 按连通类取 Laplacian 块的 (n_c-1) 阶主子式（精确模式 Bareiss，浮点模式 numpy.linalg.det）
2. 枚举全部 i-树（以 i 为唯一汇点的生成树）并对 κ^T 求和，作为对照
"""

import logging
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from config.settings import get_config
from ..common.data_structures import ITree, RateAssignment, RateKind, ReactionNetwork, TreeConstants
from ..common.errors import EnumerationGuardError, RateAssignmentError
from ..common.exact_linalg import bareiss_determinant
from ..network_core.structure import class_of, is_weakly_reversible, laplacian, linkage_classes

logger = logging.getLogger(__name__)


def _enumeration_guard(max_class_size: Optional[int]) -> int:
    if max_class_size is not None:
        return int(max_class_size)
    return int(get_config()['tree_constants']['enumeration_max_class_size'])


def tree_constants_minor(network: ReactionNetwork, rates: RateAssignment) -> TreeConstants:
    """K_i = (-1)^{n_c-1}·det(类块删去第 i 行第 i 列)"""
    matrix = laplacian(network, rates)
    exact = rates.kind is RateKind.EXACT
    values: List = [None] * network.n

    for cls in linkage_classes(network):
        size = len(cls)
        sign = -1 if (size - 1) % 2 else 1
        block = matrix[np.ix_(cls, cls)]
        for position, i in enumerate(cls):
            keep = [k for k in range(size) if k != position]
            minor = block[np.ix_(keep, keep)]
            if exact:
                det = bareiss_determinant(minor.tolist()) if keep else Fraction(1)
                values[i] = sign * det
            else:
                det = float(np.linalg.det(minor.astype(float))) if keep else 1.0
                values[i] = sign * det + 0.0

    return TreeConstants(
        values=tuple(values),
        linkage_class=class_of(network),
        strongly_connected=is_weakly_reversible(network).per_class,
        kind=rates.kind,
    )


def enumerate_i_trees(network: ReactionNetwork, i: int, max_class_size: Optional[int] = None) -> List[ITree]:
    """
    枚举 i-树：类内每个非汇点恰选一条出边，且沿父指针不成环

    逐点赋值并在每次赋值后检查新环，因而结果无重复。
    """
    guard = _enumeration_guard(max_class_size)
    membership = class_of(network)
    cls = linkage_classes(network)[membership[i]]
    if len(cls) > guard:
        raise EnumerationGuardError(
            f"配合物 {i + 1} 所在连通类有 {len(cls)} 个节点，超过枚举上限 {guard}",
            size=len(cls), limit=guard)

    others = [v for v in cls if v != i]
    options = {v: sorted(w for (u, w) in network.edges if u == v) for v in others}
    if any(not options[v] for v in others):
        return []

    parent = {}
    trees: List[ITree] = []

    def closes_cycle(start: int) -> bool:
        node = parent[start]
        while node in parent:
            if node == start:
                return True
            node = parent[node]
        return node == start

    def assign(depth: int):
        if depth == len(others):
            trees.append(ITree(sink=i, edges=tuple((v, parent[v]) for v in others)))
            return
        v = others[depth]
        for w in options[v]:
            parent[v] = w
            if not closes_cycle(v):
                assign(depth + 1)
            del parent[v]

    assign(0)
    return trees


def _tree_weight(tree: ITree, rates: RateAssignment):
    weight = Fraction(1) if rates.kind is RateKind.EXACT else 1.0
    for edge in tree.edges:
        weight = weight * rates[edge]
    return weight


def tree_constants_enumerated(network: ReactionNetwork, rates: RateAssignment,
                              max_class_size: Optional[int] = None) -> TreeConstants:
    """K_i = Σ_{T 为 i-树} κ^T"""
    rates.check_domain(network)
    values = []
    counts = []
    zero = Fraction(0) if rates.kind is RateKind.EXACT else 0.0
    for i in range(network.n):
        trees = enumerate_i_trees(network, i, max_class_size)
        total = zero
        for tree in trees:
            total = total + _tree_weight(tree, rates)
        values.append(total)
        counts.append(len(trees))

    return TreeConstants(
        values=tuple(values),
        linkage_class=class_of(network),
        strongly_connected=is_weakly_reversible(network).per_class,
        kind=rates.kind,
        monomial_counts=tuple(counts),
    )


def tree_polynomial(network: ReactionNetwork, i: int,
                    max_class_size: Optional[int] = None) -> List[Tuple[str, ...]]:
    """K_i 的单项式列表，每个单项式是边标签的有序元组"""
    monomials = []
    for tree in enumerate_i_trees(network, i, max_class_size):
        monomials.append(tuple(sorted(network.label_of(u, v) for u, v in tree.edges)))
    return sorted(monomials)


def kernel_residual(network: ReactionNetwork, rates: RateAssignment,
                    K: Sequence) -> Tuple:
    """K·A_κ 的每个分量；A_κ 按连通类分块，因此即逐类的左核残差"""
    if len(K) != network.n:
        raise RateAssignmentError(f"K 的长度 {len(K)} 与配合物数 {network.n} 不一致")
    matrix = laplacian(network, rates)
    residual = []
    for j in range(network.n):
        total = Fraction(0) if rates.kind is RateKind.EXACT else 0.0
        for i in range(network.n):
            entry = matrix[i, j]
            if entry != 0:
                total = total + K[i] * entry
        residual.append(total)
    return tuple(residual)
