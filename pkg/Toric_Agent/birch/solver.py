"""
Birch 点求解器

在 (c0 + S) ∩ R^s_{>0} 上最小化严格凸函数
    g(c) = Σ c_i log(c_i/ĉ_i) - c_i + ĉ_i
其唯一驻点满足 log(c/ĉ) ⊥ S，即为 Birch 点 c*。
用 S 的正交基 Q 做坐标 c = c0 + Q·t：梯度 Q^T log(c/ĉ)，Hessian Q^T diag(1/c) Q。
"""

import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from config.settings import get_config, get_max_workers
from ..common.data_structures import BirchPoint, RateAssignment, ReactionNetwork
from ..common.errors import MaxIterationsError
from ..balancing.steady_state import complex_balance_residual, particular_steady_state
from ..network_core.kinetics import complex_monomials, orthonormal_stoichiometric_basis

logger = logging.getLogger(__name__)

TOLERANCED_RESIDUALS = ('affine', 'orthogonality', 'steady_relative')


def transformed_entropy(c: Sequence[float], c_star: Sequence[float]) -> float:
    """E(c) = Σ (c_i log c_i - c_i log c*_i - c_i + c*_i)，c_i = 0 时 c_i log c_i 取 0"""
    c = np.asarray(c, dtype=float)
    c_star = np.asarray(c_star, dtype=float)
    if c.shape != c_star.shape:
        raise ValueError(f"维数不一致: {c.shape} 与 {c_star.shape}")
    if np.any(c < 0):
        raise ValueError("transformed_entropy 要求 c ≥ 0")
    if np.any(c_star <= 0):
        raise ValueError("c_star 必须严格为正")
    positive = c > 0
    xlogx = np.zeros_like(c)
    xlogx[positive] = c[positive] * np.log(c[positive] / c_star[positive])
    return float(np.sum(xlogx - c + c_star))


def _validate_initial(network: ReactionNetwork, c0: Sequence[float]) -> np.ndarray:
    c0 = np.asarray(c0, dtype=float)
    if c0.shape != (network.s,):
        raise ValueError(f"初始浓度长度 {c0.size} 与物种数 {network.s} 不一致")
    if not np.all(np.isfinite(c0)) or np.any(c0 <= 0):
        raise ValueError("初始浓度必须全部为有限正数")
    return c0


class BirchPointSolver:
    """阻尼牛顿法：正性步长减半 + Armijo 回溯"""

    def __init__(self, max_iterations: Optional[int] = None, gradient_tol: Optional[float] = None,
                 residual_tol: Optional[float] = None):
        config = get_config()
        birch_config = config['birch']
        self.logger = logging.getLogger(f"{__name__}.{self.__class__.__name__}")
        self.max_iterations = int(max_iterations if max_iterations is not None else birch_config['max_iterations'])
        self.gradient_tol = float(gradient_tol if gradient_tol is not None else birch_config['gradient_tol'])
        self.residual_tol = float(residual_tol if residual_tol is not None else birch_config['residual_tol'])
        self.armijo = float(birch_config['armijo'])
        self.min_step_fraction = float(birch_config['min_step_fraction'])
        self.uniqueness_starts = int(birch_config['uniqueness_starts'])
        self.objective_history: List[float] = []
        self.stats = {'solves': 0, 'iterations': 0, 'gradient_fallbacks': 0, 'failures': 0}

    @staticmethod
    def _objective(c: np.ndarray, c_hat: np.ndarray) -> float:
        return float(np.sum(c * np.log(c / c_hat) - c + c_hat))

    def residuals(self, network: ReactionNetwork, rates: RateAssignment, c: np.ndarray,
                  c0: np.ndarray, c_hat: np.ndarray, Q: np.ndarray) -> Dict[str, float]:
        """
        affine: (c-c0) 离开 S 的分量（相对 ‖c0‖）
        orthogonality: log(c/ĉ) 在 S 上的投影
        steady_relative: ‖Ψ(c)A_κ‖ / (‖Ψ(c)‖·max κ)，容差判据使用该值
        steady_absolute: ‖Ψ(c)A_κ‖，只报告
        """
        diff = c - c0
        off_subspace = diff - Q @ (Q.T @ diff)
        affine = float(np.linalg.norm(off_subspace) / max(1.0, np.linalg.norm(c0)))
        orthogonality = float(np.linalg.norm(Q.T @ np.log(c / c_hat)))
        psi = complex_monomials(network, c)
        flux = complex_balance_residual(network, rates, c)
        scale = max(np.linalg.norm(psi) * max(abs(float(v)) for v in rates.values.values()), 1e-300)
        steady_absolute = float(np.linalg.norm(flux))
        return {
            'affine': affine,
            'orthogonality': orthogonality,
            'steady_relative': steady_absolute / scale,
            'steady_absolute': steady_absolute,
        }

    def _within_tolerance(self, residuals: Dict[str, float]) -> bool:
        return all(residuals[key] <= self.residual_tol for key in TOLERANCED_RESIDUALS)

    def solve(self, network: ReactionNetwork, rates: RateAssignment, c0: Sequence[float],
              c_hat: Optional[np.ndarray] = None) -> BirchPoint:
        """从 c0 出发求 Birch 点；c_hat 缺省时由 particular_steady_state 求得"""
        self.stats['solves'] += 1
        c0 = _validate_initial(network, c0)
        if c_hat is None:
            c_hat = particular_steady_state(network, rates)
        Q = orthonormal_stoichiometric_basis(network)

        c = c0.copy()
        g = self._objective(c, c_hat)
        self.objective_history = [g]
        best_c, best_grad = c.copy(), np.inf

        for iteration in range(self.max_iterations + 1):
            grad = Q.T @ np.log(c / c_hat)
            grad_norm = float(np.linalg.norm(grad))
            if grad_norm < best_grad:
                best_c, best_grad = c.copy(), grad_norm

            if grad_norm <= self.gradient_tol:
                residuals = self.residuals(network, rates, c, c0, c_hat, Q)
                if self._within_tolerance(residuals):
                    self.stats['iterations'] += iteration
                    self.logger.info(f"✅ Birch 点收敛: {iteration} 次迭代, 梯度 {grad_norm:.2e}")
                    return BirchPoint(c_star=c, residuals=residuals, iterations=iteration, c_hat=c_hat)

            if iteration == self.max_iterations:
                break

            hessian = Q.T @ (Q / c[:, np.newaxis])
            direction = -np.linalg.solve(hessian, grad)
            accepted = self._line_search(c, c_hat, g, grad, direction, Q)
            if accepted is None:
                self.stats['gradient_fallbacks'] += 1
                self.logger.debug("牛顿方向线搜索停滞，改用梯度方向")
                accepted = self._line_search(c, c_hat, g, grad, -grad, Q)
            if accepted is None:
                # 已到机器精度，无法继续下降
                break
            c, g = accepted
            self.objective_history.append(g)

        residuals = self.residuals(network, rates, best_c, c0, c_hat, Q)
        if best_grad <= self.gradient_tol * 1e3 and self._within_tolerance(residuals):
            self.logger.info(f"✅ Birch 点在机器精度处停止: 梯度 {best_grad:.2e}")
            return BirchPoint(c_star=best_c, residuals=residuals, iterations=len(self.objective_history) - 1,
                              c_hat=c_hat)

        self.stats['failures'] += 1
        raise MaxIterationsError(
            f"Birch 点求解未收敛（最佳梯度 {best_grad:.3e}）",
            best_iterate=best_c, residuals=residuals, iterations=len(self.objective_history) - 1)

    def _line_search(self, c, c_hat, g, grad, direction, Q):
        step_c = Q @ direction
        slope = float(grad @ direction)
        if slope >= 0:
            return None
        full = c + step_c
        if -slope <= 1e-14 * max(1.0, abs(g)) and np.all(full > 0):
            # 牛顿减量低于舍入水平，Armijo 无法分辨；整步也不下降则视为已到机器精度
            g_full = self._objective(full, c_hat)
            return (full, g_full) if g_full < g else None
        step = 1.0
        while step >= self.min_step_fraction:
            candidate = c + step * step_c
            if np.all(candidate > 0):
                g_new = self._objective(candidate, c_hat)
                if g_new < g and g_new <= g + self.armijo * step * slope:
                    return candidate, g_new
            step *= 0.5
        return None

    def probe_uniqueness(self, network: ReactionNetwork, rates: RateAssignment, c0: Sequence[float],
                         starts: Optional[int] = None, seed: Optional[int] = None) -> Dict[str, Any]:
        """从 P 内随机正起点并行求解，报告各解相对参考解的最大相对偏差"""
        c0 = _validate_initial(network, c0)
        starts = int(starts if starts is not None else self.uniqueness_starts)
        rng = np.random.default_rng(seed)
        c_hat = particular_steady_state(network, rates)
        Q = orthonormal_stoichiometric_basis(network)
        points = [c0] + [random_point_in_polyhedron(c0, Q, rng) for _ in range(max(0, starts - 1))]

        results: List[Optional[np.ndarray]] = [None] * len(points)
        with ThreadPoolExecutor(max_workers=get_max_workers('sweeps')) as executor:
            future_to_index = {
                executor.submit(BirchPointSolver(self.max_iterations, self.gradient_tol, self.residual_tol).solve,
                                network, rates, point, c_hat): index
                for index, point in enumerate(points)
            }
            for future in as_completed(future_to_index):
                results[future_to_index[future]] = future.result().c_star

        reference = results[0]
        spread = max(float(np.linalg.norm(r - reference) / np.linalg.norm(reference)) for r in results)
        self.logger.info(f"🔁 唯一性探测: {len(points)} 个起点, 最大相对偏差 {spread:.2e}")
        return {'c_star': reference, 'spread': spread, 'starts': points, 'solutions': results}


def random_point_in_polyhedron(c0: np.ndarray, Q: np.ndarray, rng: np.random.Generator,
                               max_fraction: float = 0.9) -> np.ndarray:
    """沿 S 中随机方向走到可行长度的随机比例处，得到 P 的内点"""
    if Q.shape[1] == 0:
        return c0.copy()
    direction = Q @ rng.standard_normal(Q.shape[1])
    negative = direction < 0
    limit = np.min(-c0[negative] / direction[negative]) if np.any(negative) else 10.0 * float(np.max(c0))
    return c0 + rng.uniform(0.05, max_fraction) * limit * direction


def birch_point(network: ReactionNetwork, rates: RateAssignment, c0: Sequence[float],
                **solver_options) -> BirchPoint:
    """函数式入口"""
    return BirchPointSolver(**solver_options).solve(network, rates, c0)
