"""
特解稳态 ĉ 与尺度向量 L

在每条（必在类内的）边上 K_i c^{y_j} = K_j c^{y_i}，取对数得线性系统
(y_j - y_i)·x = log K_j - log K_i，x = log c。用最小范数最小二乘求解。
"""

import logging
from typing import Optional, Sequence

import numpy as np

from config.settings import get_config
from ..common.data_structures import RateAssignment, ReactionNetwork, ScalingVector, TreeConstants
from ..common.errors import NotComplexBalancingError, NotDetailedBalancingError
from ..network_core.kinetics import complex_monomials, exact_log, float_laplacian
from ..tree_constants.matrix_tree import tree_constants_minor
from .detailed import detailed_balancing_exact

logger = logging.getLogger(__name__)


def _tree_logs(K: TreeConstants) -> np.ndarray:
    for i, value in enumerate(K.values):
        if not value > 0:
            raise NotComplexBalancingError(
                f"K_{i + 1} = {value} 非正（所在连通类不强连通），不存在正的复平衡稳态")
    return np.array([exact_log(v) for v in K.values], dtype=float)


def particular_steady_state(network: ReactionNetwork, rates: RateAssignment,
                            tol: Optional[float] = None) -> np.ndarray:
    """
    一个正的复平衡稳态 ĉ

    系统欠定（σ < s）时取最小范数的对数解；归一化残差超过 tol 时抛 NotComplexBalancingError。
    """
    tol = tol if tol is not None else get_config()['numerics']['steady_state_tol']
    K = tree_constants_minor(network, rates)
    logs = _tree_logs(K)

    Y = network.stoichiometric_matrix.astype(float)
    M = np.array([Y[j] - Y[i] for i, j in network.edges], dtype=float)
    b = np.array([logs[j] - logs[i] for i, j in network.edges], dtype=float)

    x, *_ = np.linalg.lstsq(M, b, rcond=None)
    residual = float(np.linalg.norm(M @ x - b) / max(1.0, np.linalg.norm(b)))
    if residual > tol:
        raise NotComplexBalancingError(
            f"对数线性系统的归一化残差 {residual:.3e} 超过容差 {tol:.1e}", residual=residual)

    c_hat = np.exp(x)
    logger.debug(f"特解稳态 ĉ = {c_hat}, 残差 {residual:.3e}")
    return c_hat


def steady_state_binomial_residuals(network: ReactionNetwork, rates: RateAssignment,
                                    c: Sequence[float]) -> np.ndarray:
    """每条边上的二项式 K_i c^{y_j} - K_j c^{y_i}"""
    K = tree_constants_minor(network, rates)
    values = np.array([float(v) for v in K.values])
    psi = complex_monomials(network, c)
    return np.array([values[i] * psi[j] - values[j] * psi[i] for i, j in network.edges])


def complex_balance_residual(network: ReactionNetwork, rates: RateAssignment,
                             c: Sequence[float]) -> np.ndarray:
    """Ψ(c)·A_κ（长度 n），复平衡稳态处为零"""
    return complex_monomials(network, c) @ float_laplacian(network, rates)


def scaling_vector(network: ReactionNetwork, rates: RateAssignment,
                   c0: Sequence[float]) -> ScalingVector:
    """L = 1/c*，c* 为 c0 所在不变多面体中的 Birch 点"""
    from ..birch.solver import birch_point

    decision = detailed_balancing_exact(network, rates)
    if not decision.balanced:
        raise NotDetailedBalancingError(f"速率不满足细致平衡: {decision.reason}")
    birch = birch_point(network, rates, c0)
    c_star = tuple(float(x) for x in birch.c_star)
    return ScalingVector(values=tuple(1.0 / x for x in c_star), birch_point=c_star)
