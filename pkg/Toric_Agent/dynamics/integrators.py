"""
显式 Runge-Kutta 积分器

- RK4：定步长，最后一步截断到 t_end
- RKF45：Fehlberg 4(5) 嵌入对，取五阶解推进，按混合误差范数调整步长

两者都拒绝产生 < -negativity_tol 分量的步并将步长减半；步长低于 min_step 视为塌缩。
"""

import logging
from typing import Callable, Optional, Tuple

import numpy as np

from ..common.data_structures import IntegratorConfig, IntegratorMethod, TrajectoryStatus
from ..common.errors import NonFiniteStateError

logger = logging.getLogger(__name__)

RHS = Callable[[float, np.ndarray], np.ndarray]
# observer(t, y) 返回 True 表示提前终止（收敛）
Observer = Callable[[float, np.ndarray], bool]

# Fehlberg 系数
_C = (0.0, 1 / 4, 3 / 8, 12 / 13, 1.0, 1 / 2)
_A = (
    (),
    (1 / 4,),
    (3 / 32, 9 / 32),
    (1932 / 2197, -7200 / 2197, 7296 / 2197),
    (439 / 216, -8.0, 3680 / 513, -845 / 4104),
    (-8 / 27, 2.0, -3544 / 2565, 1859 / 4104, -11 / 40),
)
_B4 = np.array([25 / 216, 0.0, 1408 / 2565, 2197 / 4104, -1 / 5, 0.0])
_B5 = np.array([16 / 135, 0.0, 6656 / 12825, 28561 / 56430, -9 / 50, 2 / 55])


def rk4_step(f: RHS, t: float, y: np.ndarray, h: float) -> np.ndarray:
    k1 = f(t, y)
    k2 = f(t + h / 2, y + h / 2 * k1)
    k3 = f(t + h / 2, y + h / 2 * k2)
    k4 = f(t + h, y + h * k3)
    return y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def rkf45_step(f: RHS, t: float, y: np.ndarray, h: float) -> Tuple[np.ndarray, np.ndarray]:
    """返回 (五阶解, 五阶解 - 四阶解)"""
    k = []
    for stage in range(6):
        increment = sum((a * k[m] for m, a in enumerate(_A[stage])), np.zeros_like(y))
        k.append(f(t + _C[stage] * h, y + h * increment))
    K = np.array(k)
    y5 = y + h * (_B5 @ K)
    y4 = y + h * (_B4 @ K)
    return y5, y5 - y4


class RungeKuttaIntegrator:
    """按 IntegratorConfig 推进；每个接受的步调用 observer"""

    def __init__(self, config: IntegratorConfig, negativity_tol: float = 1e-12):
        self.config = config
        self.negativity_tol = negativity_tol
        self.logger = logging.getLogger(f"{__name__}.{self.__class__.__name__}")
        self.stats = {'accepted': 0, 'rejected': 0, 'negativity_rejections': 0}

    def _check_finite(self, t: float, y: np.ndarray):
        if not np.all(np.isfinite(y)):
            raise NonFiniteStateError(f"t = {t:.6g} 处出现非有限状态", time=t)

    def _negative(self, y: np.ndarray) -> bool:
        return bool(np.any(y < -self.negativity_tol))

    def integrate(self, f: RHS, y0: np.ndarray, observer: Optional[Observer] = None,
                  t0: float = 0.0) -> Tuple[TrajectoryStatus, float, np.ndarray]:
        """返回 (终止状态, 终止时间, 终止状态向量)"""
        if self.config.method is IntegratorMethod.RK4:
            return self._integrate_fixed(f, np.asarray(y0, dtype=float), observer, t0)
        return self._integrate_adaptive(f, np.asarray(y0, dtype=float), observer, t0)

    def _integrate_fixed(self, f, y, observer, t):
        cfg = self.config
        while t < cfg.t_end:
            if self.stats['accepted'] >= cfg.max_steps:
                return TrajectoryStatus.MAX_STEPS, t, y
            h = min(cfg.step, cfg.t_end - t)
            while True:
                y_new = rk4_step(f, t, y, h)
                self._check_finite(t + h, y_new)
                if not self._negative(y_new):
                    break
                self.stats['negativity_rejections'] += 1
                self.stats['rejected'] += 1
                h /= 2
                if h < cfg.min_step:
                    self.logger.warning(f"⚠️ 步长塌缩于 t = {t:.6g}")
                    return TrajectoryStatus.STEP_COLLAPSE, t, y
            t = t + h if cfg.t_end - (t + h) > cfg.min_step else cfg.t_end
            y = y_new
            self.stats['accepted'] += 1
            if observer is not None and observer(t, y):
                return TrajectoryStatus.CONVERGED, t, y
        return TrajectoryStatus.COMPLETED, t, y

    def _integrate_adaptive(self, f, y, observer, t):
        cfg = self.config
        h = min(cfg.step, cfg.max_step)
        while t < cfg.t_end:
            if self.stats['accepted'] >= cfg.max_steps:
                return TrajectoryStatus.MAX_STEPS, t, y
            h = min(h, cfg.t_end - t, cfg.max_step)
            if h < cfg.min_step and cfg.t_end - t > cfg.min_step:
                self.logger.warning(f"⚠️ 步长塌缩于 t = {t:.6g}（h = {h:.3e}）")
                return TrajectoryStatus.STEP_COLLAPSE, t, y

            y_new, delta = rkf45_step(f, t, y, h)
            self._check_finite(t + h, y_new)
            scale = cfg.atol + cfg.rtol * np.maximum(np.abs(y), np.abs(y_new))
            error = float(np.max(np.abs(delta) / scale)) if y.size else 0.0

            if self._negative(y_new):
                self.stats['negativity_rejections'] += 1
                self.stats['rejected'] += 1
                h /= 2
                continue
            if error > 1.0:
                self.stats['rejected'] += 1
                h *= max(0.1, 0.9 * error ** -0.25)
                continue

            t = t + h if cfg.t_end - (t + h) > cfg.min_step else cfg.t_end
            y = y_new
            self.stats['accepted'] += 1
            factor = 5.0 if error == 0.0 else min(5.0, max(0.2, 0.9 * error ** -0.2))
            h *= factor
            if observer is not None and observer(t, y):
                return TrajectoryStatus.CONVERGED, t, y
        return TrajectoryStatus.COMPLETED, t, y
