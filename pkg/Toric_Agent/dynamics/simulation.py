"""
轨迹模拟与监控

每个采样点记录：变换熵 E（相对 Birch 点）、守恒漂移、到边界的距离、到 Birch 点的距离。
负的数值下冲只在计算监控量时截断为 0。
"""

import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import List, Optional, Sequence

import numpy as np

from config.settings import get_config, get_max_workers
from ..birch.solver import birch_point, transformed_entropy
from ..common.data_structures import (
    IntegratorConfig, MonitorSample, RateAssignment, ReactionNetwork, Trajectory
)
from ..common.errors import MaxIterationsError, NotComplexBalancingError
from .integrators import RungeKuttaIntegrator
from .polyhedron import InvariantPolyhedron
from .rhs import MassActionSystem

logger = logging.getLogger(__name__)


def lyapunov_derivative(network: ReactionNetwork, rates: RateAssignment,
                        c: Sequence[float], c_star: Sequence[float]) -> float:
    """∇E(c)·f(c) = Σ log(c_i/c*_i)·f_i(c)，要求 c > 0"""
    c = np.asarray(c, dtype=float)
    c_star = np.asarray(c_star, dtype=float)
    if np.any(c <= 0):
        raise ValueError("lyapunov_derivative 要求 c 严格为正")
    return float(np.log(c / c_star) @ MassActionSystem(network, rates)(0.0, c))


def _resolve_birch(network: ReactionNetwork, rates: RateAssignment, c0: np.ndarray) -> Optional[np.ndarray]:
    try:
        return birch_point(network, rates, c0).c_star
    except (NotComplexBalancingError, MaxIterationsError) as e:
        logger.info(f"ℹ️ 无 Birch 点，E 与距离监控关闭: {e}")
        return None


def simulate(network: ReactionNetwork, rates: RateAssignment, c0: Sequence[float],
             config: Optional[IntegratorConfig] = None, c_star: Optional[Sequence[float]] = None,
             compute_birch: bool = True) -> Trajectory:
    """
    积分质量作用方程并记录监控序列

    终止于 t_end、收敛（‖c - c*‖ ≤ convergence_tol）、步长塌缩或最大步数。
    """
    c0 = np.asarray(c0, dtype=float)
    if c0.shape != (network.s,) or np.any(c0 <= 0) or not np.all(np.isfinite(c0)):
        raise ValueError("初始浓度必须是长度为 s 的有限正向量")
    settings = get_config()
    config = config or IntegratorConfig.from_config(settings['integrator'])
    negativity_tol = settings['numerics']['negativity_tol']

    if c_star is not None:
        c_star = np.asarray(c_star, dtype=float)
    elif compute_birch:
        c_star = _resolve_birch(network, rates, c0)

    polyhedron = InvariantPolyhedron.from_network(network, c0)
    system = MassActionSystem(network, rates)
    trajectory = Trajectory(c_star=c_star)

    def record(t: float, state: np.ndarray):
        clipped = np.maximum(state, 0.0)
        if c_star is not None:
            E_value = transformed_entropy(clipped, c_star)
            distance = float(np.linalg.norm(clipped - c_star))
        else:
            E_value, distance = None, None
        trajectory.times.append(float(t))
        trajectory.states.append(clipped)
        trajectory.monitors.append(MonitorSample(
            E_value=E_value,
            conservation_drift=polyhedron.conservation_drift(clipped),
            boundary_distance=polyhedron.boundary_distance(clipped),
            distance_to_birch=distance,
        ))

    record(0.0, c0)
    counter = {'steps': 0}

    def observer(t: float, state: np.ndarray) -> bool:
        counter['steps'] += 1
        converged = (
            c_star is not None and config.convergence_tol is not None
            and float(np.linalg.norm(np.maximum(state, 0.0) - c_star)) <= config.convergence_tol
        )
        if converged or counter['steps'] % config.monitor_every == 0:
            record(t, state)
        return converged

    integrator = RungeKuttaIntegrator(config, negativity_tol=negativity_tol)
    status, t_final, y_final = integrator.integrate(system, c0, observer)
    if trajectory.times[-1] != t_final:
        record(t_final, y_final)

    trajectory.status = status
    trajectory.steps = integrator.stats['accepted']
    trajectory.rejected_steps = integrator.stats['rejected']
    logger.info(f"📈 模拟结束: {status.value}, t = {t_final:.6g}, 接受 {trajectory.steps} 步, "
                f"拒绝 {trajectory.rejected_steps} 步")
    return trajectory


def attraction_sweep(network: ReactionNetwork, rates: RateAssignment, starts: Sequence[Sequence[float]],
                     config: Optional[IntegratorConfig] = None) -> List[float]:
    """并行模拟多个起点，返回各自终点到其 Birch 点的距离（按起点顺序）"""
    distances: List[Optional[float]] = [None] * len(starts)

    def run(start) -> float:
        start = np.asarray(start, dtype=float)
        c_star = birch_point(network, rates, start).c_star
        trajectory = simulate(network, rates, start, config=config, c_star=c_star)
        return float(np.linalg.norm(trajectory.final_state - c_star))

    with ThreadPoolExecutor(max_workers=get_max_workers('sweeps')) as executor:
        future_to_index = {executor.submit(run, start): index for index, start in enumerate(starts)}
        for future in as_completed(future_to_index):
            distances[future_to_index[future]] = future.result()

    logger.info(f"🧲 吸引性扫描: {len(starts)} 个起点, 最大终点距离 {max(distances, default=0.0):.2e}")
    return distances
