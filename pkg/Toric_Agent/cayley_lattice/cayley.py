"""
Cayley 矩阵与整数核格

Cay_G(Y)：上方 s 行为各连通类的指数向量并排，下方 l 行为类指示行。
核向量 u 对应二项式 K^{u+} - K^{u-}；在正卦限上，K 属于模空间当且仅当
对核格的一组（有限指数子格）基逐个满足 K^{b+} = K^{b-}。
"""

import logging
from typing import Sequence, Tuple, Union

from ..common.data_structures import (
    BinomialWitness, CayleyMatrix, LatticeBasis, ModuliMembership, RateAssignment,
    RateKind, ReactionNetwork
)
from ..common.errors import LatticeDimensionError
from ..common.exact_linalg import (
    exact_rank, integer_kernel, mat_vec, monomial, saturated_kernel, split_signs
)
from ..network_core.structure import is_weakly_reversible, linkage_classes
from ..tree_constants.matrix_tree import tree_constants_minor

logger = logging.getLogger(__name__)

MatrixLike = Union[CayleyMatrix, Sequence[Sequence[int]]]


def cayley_matrix(network: ReactionNetwork) -> CayleyMatrix:
    """(s+l)×n 整数矩阵，列按连通类分组；column_order 记录列对应的配合物"""
    classes = linkage_classes(network)
    column_order = tuple(i for cls in classes for i in cls)
    rows = []
    for k in range(network.s):
        rows.append(tuple(network.complexes[i][k] for i in column_order))
    for cls in classes:
        members = set(cls)
        rows.append(tuple(int(i in members) for i in column_order))
    return CayleyMatrix(rows=tuple(rows), column_order=column_order,
                        linkage_classes=classes, s=network.s)


def _rows_and_width(matrix: MatrixLike) -> Tuple[Tuple[Tuple[int, ...], ...], int]:
    if isinstance(matrix, CayleyMatrix):
        return matrix.in_complex_order(), len(matrix.column_order)
    rows = tuple(tuple(int(v) for v in row) for row in matrix)
    width = len(rows[0]) if rows else 0
    return rows, width


def cayley_rank(network: ReactionNetwork) -> int:
    """rank = σ + l"""
    cay = cayley_matrix(network)
    return exact_rank(cay.rows, network.n)


def cayley_kernel_dimension(network: ReactionNetwork) -> int:
    return network.n - cayley_rank(network)


def extended_cayley_matrix(network: ReactionNetwork) -> Tuple[Tuple[int, ...], ...]:
    """
    ((s+l)×(s+n)) 矩阵 [-I_s | Y^T ; 0 | 指示行]，列为 s 个物种再接 n 个配合物（原始次序）

    核维数 = n + s - (σ + l + s) = δ。
    """
    s, n = network.s, network.n
    rows = []
    for k in range(s):
        identity = tuple(-1 if t == k else 0 for t in range(s))
        rows.append(identity + tuple(network.complexes[i][k] for i in range(n)))
    for cls in linkage_classes(network):
        members = set(cls)
        rows.append((0,) * s + tuple(int(i in members) for i in range(n)))
    return tuple(rows)


def integer_kernel_basis(matrix: MatrixLike) -> LatticeBasis:
    """有理零空间基清分母为本原整数向量（首个非零分量为正，字典序排序）"""
    rows, width = _rows_and_width(matrix)
    return LatticeBasis(vectors=integer_kernel(rows, width), dimension=width)


def saturated_kernel_basis(matrix: MatrixLike) -> LatticeBasis:
    """ker_Z 的 Z-基（幺模列变换）"""
    rows, width = _rows_and_width(matrix)
    return LatticeBasis(vectors=saturated_kernel(rows, width), dimension=width)


def binomial_in_moduli(network: ReactionNetwork, u: Sequence[int]) -> bool:
    """u = u₊ - u₋ 编码二项式 K^{u₊} - K^{u₋}；成员条件 Cay·u = 0"""
    if len(u) != network.n:
        raise LatticeDimensionError(f"格向量长度 {len(u)} 与配合物数 {network.n} 不一致")
    rows = cayley_matrix(network).in_complex_order()
    return all(v == 0 for v in mat_vec(rows, [int(x) for x in u]))


def moduli_membership_exact(network: ReactionNetwork, rates: RateAssignment) -> ModuliMembership:
    """
    复平衡判定：K 是否位于 V(M_G) 的正部分

    非弱可逆网络直接判否；浮点速率按二进制精确值转换为有理数后判定。
    """
    rates.check_domain(network)
    basis = integer_kernel_basis(cayley_matrix(network))
    kernel_dim = len(basis)

    if not is_weakly_reversible(network).weakly_reversible:
        return ModuliMembership(balanced=False, kernel_dim=kernel_dim, basis=basis,
                                reason="not weakly reversible")

    if rates.kind is RateKind.FLOAT:
        logger.warning("⚠️ 浮点速率已按二进制值精确转换为有理数，判定结果对舍入敏感")
        rates = rates.as_exact()

    K = tree_constants_minor(network, rates)
    for vector in basis:
        plus, minus = split_signs(vector)
        lhs = monomial(K.values, plus)
        rhs = monomial(K.values, minus)
        if lhs != rhs:
            logger.info(f"❌ 二项式不成立: u={vector}")
            return ModuliMembership(
                balanced=False, kernel_dim=kernel_dim, basis=basis, tree_constants=K,
                violated=BinomialWitness(u_plus=plus, u_minus=minus, lhs=lhs, rhs=rhs),
                reason="binomial violated")

    logger.info(f"✅ 复平衡成立（核维数 {kernel_dim}）")
    return ModuliMembership(balanced=True, kernel_dim=kernel_dim, basis=basis, tree_constants=K)
