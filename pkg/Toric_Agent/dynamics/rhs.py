"""
质量作用方程右端项

dc/dt = Ψ(c)·A_κ·Y；可逆网络上等价于按可逆对求和的二项式形式。
"""

import logging
from typing import Optional, Sequence

import numpy as np

from ..balancing.detailed import reversible_pairing
from ..common.data_structures import RateAssignment, ReactionNetwork
from ..common.errors import NotReversibleError
from ..network_core.kinetics import complex_monomials, float_laplacian

logger = logging.getLogger(__name__)


class MassActionSystem:
    """
    预先计算 A_κ·Y 的右端项，供积分器反复调用

    不对 c 做截断：负分量由积分器拒步处理，监控量在 simulation 中截断。
    """

    def __init__(self, network: ReactionNetwork, rates: RateAssignment):
        self.network = network
        self.rates = rates
        self._AY = float_laplacian(network, rates) @ network.stoichiometric_matrix.astype(float)
        self.evaluations = 0

    def __call__(self, t: float, c: np.ndarray) -> np.ndarray:
        self.evaluations += 1
        return complex_monomials(self.network, c) @ self._AY


def mass_action_rhs(network: ReactionNetwork, rates: RateAssignment, c: Sequence[float]) -> np.ndarray:
    """Ψ(c)·A_κ·Y"""
    c = np.asarray(c, dtype=float)
    if np.any(c < 0):
        raise ValueError("mass_action_rhs 要求 c ≥ 0")
    return MassActionSystem(network, rates)(0.0, c)


def _require_reversible(network: ReactionNetwork):
    pairing = reversible_pairing(network)
    if not pairing.fully_reversible:
        missing = ", ".join(f"({i + 1},{j + 1})" for i, j in pairing.leftover)
        raise NotReversibleError(f"网络含单向边: {missing}")
    return pairing


def reversible_pair_rhs(network: ReactionNetwork, rates: RateAssignment, c: Sequence[float]) -> np.ndarray:
    """Σ_{i<j} (κ_ij c^{y_i} - κ_ji c^{y_j})(y_j - y_i)"""
    pairing = _require_reversible(network)
    psi = complex_monomials(network, c)
    Y = network.stoichiometric_matrix.astype(float)
    total = np.zeros(network.s)
    for i, j in pairing.pairs:
        flux = float(rates[(i, j)]) * psi[i] - float(rates[(j, i)]) * psi[j]
        total += flux * (Y[j] - Y[i])
    return total


def detailed_rhs(network: ReactionNetwork, L: Sequence[float], c: Sequence[float],
                 rates: Optional[RateAssignment] = None) -> np.ndarray:
    """
    Σ_{i<j} w_ij·((L*c)^{y_i} - (L*c)^{y_j})(y_j - y_i)

    缺省 w_ij = 1；给出 rates 时 w_ij = κ_ij·L^{-y_i}，细致平衡下此式与 mass_action_rhs 逐点相等。
    """
    pairing = _require_reversible(network)
    L = np.asarray(L, dtype=float)
    if np.any(L <= 0):
        raise ValueError("尺度向量 L 必须严格为正")
    scaled = complex_monomials(network, L * np.asarray(c, dtype=float))
    Y = network.stoichiometric_matrix.astype(float)
    L_power = complex_monomials(network, L)
    total = np.zeros(network.s)
    for i, j in pairing.pairs:
        weight = 1.0 if rates is None else float(rates[(i, j)]) / L_power[i]
        total += weight * (scaled[i] - scaled[j]) * (Y[j] - Y[i])
    return total
