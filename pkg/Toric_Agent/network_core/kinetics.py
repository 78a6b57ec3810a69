"""
质量作用动力学的浮点基元

Ψ(c) = (c^{y_1}, …, c^{y_n})，约定 0^0 = 1（零配合物恒为 1）。
"""

import math
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from config.settings import get_config
from ..common.data_structures import RateAssignment, ReactionNetwork
from ..common.errors import StructuralInconsistencyError
from .structure import stoichiometric_subspace


def complex_monomials(network: ReactionNetwork, c: Sequence[float]) -> np.ndarray:
    """Ψ(c)，长度 n"""
    c = np.asarray(c, dtype=float)
    Y = network.stoichiometric_matrix.astype(float)
    return np.prod(np.power(c[np.newaxis, :], Y), axis=1)


def check_row_sums(matrix: np.ndarray, tol: float) -> float:
    """行和最大绝对值不超过 tol·max|元素|，返回该相对值"""
    scale = float(np.max(np.abs(matrix))) if matrix.size else 0.0
    if scale == 0.0:
        return 0.0
    relative = float(np.max(np.abs(matrix.sum(axis=1)))) / scale
    if relative > tol:
        raise StructuralInconsistencyError(f"浮点 Laplacian 行和 {relative:.3e} 超出容差 {tol:.1e}")
    return relative


def float_laplacian(network: ReactionNetwork, rates: RateAssignment,
                    row_sum_tol: Optional[float] = None) -> np.ndarray:
    """A_κ 的浮点版本（积分与最小二乘使用），构造后检查行和"""
    rates.check_domain(network)
    n = network.n
    matrix = np.zeros((n, n), dtype=float)
    for (i, j), value in rates.values.items():
        matrix[i, j] += float(value)
        matrix[i, i] -= float(value)
    if row_sum_tol is None:
        row_sum_tol = get_config()['numerics']['laplacian_float_tol']
    check_row_sums(matrix, row_sum_tol)
    return matrix


def orthonormal_stoichiometric_basis(network: ReactionNetwork) -> np.ndarray:
    """S 的正交基 Q（s×σ，QR 分解）"""
    basis, sigma = stoichiometric_subspace(network)
    if sigma == 0:
        return np.zeros((network.s, 0))
    B = np.array(basis, dtype=float).T
    Q, _ = np.linalg.qr(B)
    return Q[:, :sigma]


def exact_log(value) -> float:
    """log(value)；Fraction 按分子分母分别取对数，避免转换为 float 时溢出"""
    if isinstance(value, Fraction):
        return math.log(value.numerator) - math.log(value.denominator)
    return math.log(float(value))
