"""
细致平衡判定

可逆对 {i,j} 构成矩阵 R（每行 y_j - y_i）；对 R 的左核整数基 λ 检查
Π (κ_ij/κ_ji)^{λ_e} = 1。全部在 Fraction 中精确计算。
"""

import logging
from collections import Counter
from fractions import Fraction
from typing import List, Tuple

from ..common.data_structures import (
    CircuitWitness, DetailedBalancing, LatticeBasis, RateAssignment, RateKind,
    ReactionNetwork, ReversiblePairing
)
from ..common.exact_linalg import integer_kernel, monomial, split_signs

logger = logging.getLogger(__name__)


def reversible_pairing(network: ReactionNetwork) -> ReversiblePairing:
    """按 i<j 存储的可逆对（字典序）与缺少反向边的单向边（边序）"""
    edges = set(network.edges)
    pairs = sorted({(min(i, j), max(i, j)) for i, j in network.edges if (j, i) in edges})
    leftover = tuple((i, j) for i, j in network.edges if (j, i) not in edges)
    return ReversiblePairing(pairs=tuple(pairs), leftover=leftover)


def is_lawrence_type(network: ReactionNetwork) -> bool:
    """完全可逆且每个配合物恰好属于一个可逆对；此时细致平衡与复平衡判定一致"""
    pairing = reversible_pairing(network)
    if not pairing.fully_reversible:
        return False
    counts = Counter(k for pair in pairing.pairs for k in pair)
    return all(counts.get(i, 0) == 1 for i in range(network.n))


def pair_matrix(network: ReactionNetwork, pairs: Tuple[Tuple[int, int], ...]) -> List[Tuple[int, ...]]:
    """R：每个可逆对一行 y_j - y_i"""
    return [network.reaction_vector(i, j) for i, j in pairs]


def circuit_basis(network: ReactionNetwork, pairing: ReversiblePairing) -> LatticeBasis:
    """λ^T R = 0 的整数基（R^T 的整数核）"""
    p = len(pairing.pairs)
    if p == 0:
        return LatticeBasis(vectors=(), dimension=0)
    R = pair_matrix(network, pairing.pairs)
    transposed = [tuple(R[e][k] for e in range(p)) for k in range(network.s)]
    return LatticeBasis(vectors=integer_kernel(transposed, p), dimension=p)


def circuit_product(ratios, exponents) -> Tuple[Fraction, Tuple[int, ...], Tuple[int, ...]]:
    plus, minus = split_signs(exponents)
    return monomial(ratios, plus) / monomial(ratios, minus), plus, minus


def detailed_balancing_exact(network: ReactionNetwork, rates: RateAssignment) -> DetailedBalancing:
    """细致平衡 ⇔ 对每个回路基向量 λ，Π (κ_ij/κ_ji)^{λ_e} = 1"""
    rates.check_domain(network)
    pairing = reversible_pairing(network)
    if not pairing.fully_reversible:
        logger.info(f"❌ 网络不可逆（{len(pairing.leftover)} 条单向边）")
        return DetailedBalancing(balanced=False, pairing=pairing, reason="not reversible")

    if rates.kind is RateKind.FLOAT:
        logger.warning("⚠️ 浮点速率已按二进制值精确转换为有理数，判定结果对舍入敏感")
        rates = rates.as_exact()

    basis = circuit_basis(network, pairing)
    ratios = [rates[(i, j)] / rates[(j, i)] for i, j in pairing.pairs]
    for vector in basis:
        product, _, _ = circuit_product(ratios, vector)
        if product != 1:
            logger.info(f"❌ 回路条件不成立: λ={vector}, 乘积={product}")
            return DetailedBalancing(
                balanced=False, pairing=pairing, circuits=basis,
                violated=CircuitWitness(pairs=pairing.pairs, exponents=tuple(vector), product=product),
                reason="circuit violated")

    logger.info(f"✅ 细致平衡成立（{len(basis)} 个回路）")
    return DetailedBalancing(balanced=True, pairing=pairing, circuits=basis)


def circuit_identities_hold(network: ReactionNetwork, rates: RateAssignment,
                            exponents_list) -> List[bool]:
    """逐个检查给定回路指数（按可逆对字典序）的乘积是否为 1"""
    pairing = reversible_pairing(network)
    exact = rates.as_exact()
    ratios = [exact[(i, j)] / exact[(j, i)] for i, j in pairing.pairs]
    return [circuit_product(ratios, exps)[0] == 1 for exps in exponents_list]
