"""
不变多面体 P = (c0 + S) ∩ R^s_{≥0}
"""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from ..common.data_structures import ReactionNetwork
from ..network_core.kinetics import orthonormal_stoichiometric_basis

_FREE_TOL = 1e-12


def boundary_distance(c: Sequence[float]) -> float:
    """坐标面上的距离下界：min_i c_i"""
    c = np.asarray(c, dtype=float)
    return float(np.min(c)) if c.size else float('inf')


@dataclass
class InvariantPolyhedron:
    """c0 + S 与非负卦限之交；free 为 S 上投影非零的坐标（只有它们能到达零）"""
    c0: np.ndarray
    basis: np.ndarray
    free: Tuple[int, ...]

    @classmethod
    def from_network(cls, network: ReactionNetwork, c0: Sequence[float]) -> 'InvariantPolyhedron':
        c0 = np.asarray(c0, dtype=float)
        Q = orthonormal_stoichiometric_basis(network)
        norms = np.linalg.norm(Q, axis=1) if Q.size else np.zeros(network.s)
        free = tuple(int(i) for i in np.flatnonzero(norms > _FREE_TOL))
        return cls(c0=c0, basis=Q, free=free)

    @property
    def dimension(self) -> int:
        return self.basis.shape[1]

    def project(self, vector: Sequence[float]) -> np.ndarray:
        """正交投影到 S"""
        vector = np.asarray(vector, dtype=float)
        return self.basis @ (self.basis.T @ vector)

    def conservation_drift(self, c: Sequence[float]) -> float:
        """(c - c0) 离开 S 的分量的范数"""
        diff = np.asarray(c, dtype=float) - self.c0
        return float(np.linalg.norm(diff - self.project(diff)))

    def _face_distances(self, c: np.ndarray) -> np.ndarray:
        norms = np.linalg.norm(self.basis[list(self.free), :], axis=1)
        return c[list(self.free)] / norms

    def boundary_distance(self, c: Sequence[float]) -> float:
        """c0 + S 内到最近坐标面 c_i = 0 的欧氏距离"""
        if not self.free:
            return float('inf')
        c = np.maximum(np.asarray(c, dtype=float), 0.0)
        return float(np.min(self._face_distances(c)))

    def faces_near(self, c: Sequence[float], eps: float) -> Tuple[int, ...]:
        """距离 ≤ eps 的坐标面下标集合 I"""
        if not self.free:
            return ()
        c = np.maximum(np.asarray(c, dtype=float), 0.0)
        distances = self._face_distances(c)
        return tuple(i for i, d in zip(self.free, distances) if d <= eps)

    def inward_normal(self, face: Sequence[int]) -> np.ndarray:
        """面 F_I 在 c0 + S 内的单位内法向：Σ_{i∈I} e_i 在 S 上的投影"""
        indicator = np.zeros(self.c0.size)
        indicator[list(face)] = 1.0
        normal = self.project(indicator)
        norm = np.linalg.norm(normal)
        return normal / norm if norm > 0 else normal

    def contains(self, c: Sequence[float], tol: float = 1e-9) -> bool:
        c = np.asarray(c, dtype=float)
        scale = max(1.0, float(np.linalg.norm(self.c0)))
        return bool(np.all(c >= -tol) and self.conservation_drift(c) <= tol * scale)
