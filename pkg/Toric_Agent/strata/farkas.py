"""
Farkas 证书与下降检查

对定向 E' 与物种下标集 I（坐标面 F_I），二者恰有其一：
  - 原问题：α_k ≥ 1 (k∈I)，α 在 I 外为 0，(y_j - y_i)·α ≥ 0 对所有 (i,j) ∈ E'
  - 对偶：λ ≥ 0，v = Σ λ_e (y_j - y_i) 满足 v_k ≤ 0 (k∈I) 且 Σ_{k∈I} v_k ≤ -1
两者均用精确有理单纯形求解。
"""

import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..common.data_structures import (
    AcyclicOrientation, DescentReport, DualCertificate, FarkasCertificate, RateAssignment,
    ReactionNetwork, Trajectory
)
from ..common.errors import StructuralInconsistencyError
from ..common.exact_lp import ExactSimplex
from ..dynamics.rhs import detailed_rhs
from .orientations import stratum_closure_orientations

logger = logging.getLogger(__name__)

Certificate = Union[FarkasCertificate, DualCertificate]


def _normalize_face(network: ReactionNetwork, face: Sequence[int]) -> Tuple[int, ...]:
    face = tuple(sorted({int(k) for k in face}))
    if not face:
        raise ValueError("面下标集 I 不能为空")
    if face[0] < 0 or face[-1] >= network.s:
        raise ValueError(f"面下标超出物种范围 1..{network.s}")
    return face


def farkas_vector(network: ReactionNetwork, orientation: AcyclicOrientation,
                  face: Sequence[int]) -> Certificate:
    """返回 FarkasCertificate（可行）或 DualCertificate（不可行证书）"""
    face = _normalize_face(network, face)
    vectors = [network.reaction_vector(i, j) for i, j in orientation.edges]
    D = [[vec[k] for k in face] for vec in vectors]
    simplex = ExactSimplex()

    # α = β + 1，β ≥ 0：-D·β ≤ D·1
    beta = simplex.feasible_point(
        len(face),
        A_ub=[[-d for d in row] for row in D],
        b_ub=[sum(row) for row in D],
    )
    if beta is not None:
        alpha = [Fraction(0)] * network.s
        for k, b in zip(face, beta):
            alpha[k] = b + 1
        slacks = tuple(sum(Fraction(v) * a for v, a in zip(vec, alpha)) for vec in vectors)
        certificate = FarkasCertificate(face=face, alpha=tuple(alpha), slacks=slacks, orientation=orientation)
        if not verify_certificate(network, certificate):
            raise StructuralInconsistencyError("Farkas 证书复核失败")
        return certificate

    m = len(vectors)
    rows = [[D[e][t] for e in range(m)] for t in range(len(face))]
    total_row = [sum(D[e][t] for t in range(len(face))) for e in range(m)]
    multipliers = simplex.feasible_point(
        m,
        A_ub=rows + [total_row],
        b_ub=[0] * len(face) + [-1],
    )
    if multipliers is None:
        raise StructuralInconsistencyError("原问题与对偶问题同时不可行，违反 Farkas 二择一")
    combination = tuple(
        sum(lam * vec[k] for lam, vec in zip(multipliers, vectors)) for k in range(network.s)
    )
    certificate = DualCertificate(face=face, multipliers=tuple(multipliers),
                                  combination=combination, orientation=orientation)
    if not verify_certificate(network, certificate):
        raise StructuralInconsistencyError("对偶证书复核失败")
    return certificate


def verify_certificate(network: ReactionNetwork, certificate: Certificate) -> bool:
    """独立于求解器的精确复核"""
    vectors = [network.reaction_vector(i, j) for i, j in certificate.orientation.edges]
    face = set(certificate.face)

    if isinstance(certificate, FarkasCertificate):
        alpha = certificate.alpha
        if any(alpha[k] < 1 for k in face) or any(alpha[k] != 0 for k in range(network.s) if k not in face):
            return False
        slacks = [sum(Fraction(v) * a for v, a in zip(vec, alpha)) for vec in vectors]
        return tuple(slacks) == tuple(certificate.slacks) and all(x >= 0 for x in slacks)

    lam = certificate.multipliers
    if len(lam) != len(vectors) or any(x < 0 for x in lam):
        return False
    v = [sum(x * vec[k] for x, vec in zip(lam, vectors)) for k in range(network.s)]
    if tuple(v) != tuple(certificate.combination):
        return False
    return all(v[k] <= 0 for k in face) and any(v[k] < 0 for k in face)


def descent_check(network: ReactionNetwork, L: Sequence[float], trajectory: Trajectory,
                  face: Sequence[int], rates: Optional[RateAssignment] = None,
                  tie_tol: Optional[float] = None) -> DescentReport:
    """
    沿轨迹计算 ⟨α, dc/dt⟩ 的最小值

    每个采样点取其所在分层（平局时为闭包中的无环补全）的证书；
    每个 (分层, 面) 只求一次证书。没有可行证书的点跳过并标记。
    """
    face = _normalize_face(network, face)
    cache: Dict[Tuple, Certificate] = {}
    minimum: Optional[float] = None
    checked = skipped = 0
    flagged: List[Dict] = []

    for t, c in zip(trajectory.times, trajectory.states):
        chosen: Optional[FarkasCertificate] = None
        candidates = stratum_closure_orientations(network, L, c, tie_tol)
        for orientation in candidates:
            key = (orientation.edges, face)
            if key not in cache:
                cache[key] = farkas_vector(network, orientation, face)
            if isinstance(cache[key], FarkasCertificate):
                chosen = cache[key]
                break

        if chosen is None:
            skipped += 1
            flagged.append({
                't': float(t),
                'reason': 'no feasible certificate for stratum',
                'orientations': [o.to_dict()['edges'] for o in candidates],
            })
            continue

        alpha = np.array([float(a) for a in chosen.alpha])
        value = float(alpha @ detailed_rhs(network, L, c, rates=rates))
        minimum = value if minimum is None else min(minimum, value)
        checked += 1

    if flagged:
        logger.warning(f"⚠️ {len(flagged)} 个采样点所在分层没有可行证书，已跳过")
    logger.info(f"🧭 下降检查: 检查 {checked} 点, 跳过 {skipped} 点, 最小内积 {minimum}")
    return DescentReport(minimum=minimum, samples_checked=checked, samples_skipped=skipped,
                         certificates=list(cache.values()), flagged=flagged)
