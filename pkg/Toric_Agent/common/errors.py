"""
异常层次

NetworkInputError 一类属于输入/用法错误（CLI 退出码 2），
ToricDomainError 一类属于领域结论（CLI 退出码 1）。
"""

from typing import Any, Dict, Optional


class ToricAgentError(Exception):
    """所有异常的基类"""

    def to_dict(self) -> Dict[str, Any]:
        return {'error': self.__class__.__name__, 'message': str(self)}


# ---------------------------------------------------------------------------
# 输入错误
# ---------------------------------------------------------------------------

class NetworkInputError(ToricAgentError):
    """网络/速率输入不合法"""


class NetworkSyntaxError(NetworkInputError):
    """DSL 语法错误，带行列号（均从 1 开始）"""

    def __init__(self, message: str, line: int, column: int = 1):
        self.line = line
        self.column = column
        self.reason = message
        super().__init__(f"第 {line} 行第 {column} 列: {message}")

    def to_dict(self) -> Dict[str, Any]:
        payload = super().to_dict()
        payload.update({'line': self.line, 'column': self.column, 'reason': self.reason})
        return payload


class NetworkValidationError(NetworkInputError):
    """ReactionNetwork 不变量被破坏（自环、重复边、重复配合物等）"""


class RateAssignmentError(NetworkInputError):
    """速率常数非正、定义域与边集不一致等"""


class LatticeDimensionError(ToricAgentError, ValueError):
    """格向量长度与配合物数不一致"""


# ---------------------------------------------------------------------------
# 领域结论
# ---------------------------------------------------------------------------

class ToricDomainError(ToricAgentError):
    """领域层面的否定结论或数值失败"""


class NotComplexBalancingError(ToricDomainError):
    """速率不满足复平衡（不存在正的复平衡稳态）"""

    def __init__(self, message: str, residual: Optional[float] = None):
        self.residual = residual
        super().__init__(message)

    def to_dict(self) -> Dict[str, Any]:
        payload = super().to_dict()
        if self.residual is not None:
            payload['residual'] = self.residual
        return payload


class NotDetailedBalancingError(ToricDomainError):
    """速率不满足细致平衡"""


class NotReversibleError(ToricDomainError):
    """网络存在单向边，无法按可逆对处理"""


class MaxIterationsError(ToricDomainError):
    """牛顿迭代达到上限，附带最佳迭代点与残差"""

    def __init__(self, message: str, best_iterate=None, residuals: Optional[Dict[str, float]] = None,
                 iterations: int = 0):
        self.best_iterate = best_iterate
        self.residuals = residuals or {}
        self.iterations = iterations
        super().__init__(message)

    def to_dict(self) -> Dict[str, Any]:
        payload = super().to_dict()
        payload['iterations'] = self.iterations
        payload['residuals'] = dict(self.residuals)
        if self.best_iterate is not None:
            payload['best_iterate'] = [float(x) for x in self.best_iterate]
        return payload


class NonFiniteStateError(ToricDomainError):
    """积分过程中出现 NaN/Inf"""

    def __init__(self, message: str, time: float):
        self.time = time
        super().__init__(message)


class EnumerationGuardError(ToricDomainError):
    """组合枚举超过守卫阈值"""

    def __init__(self, message: str, size: int, limit: int):
        self.size = size
        self.limit = limit
        super().__init__(message)


class StructuralInconsistencyError(ToricDomainError):
    """结构交叉校验失败：亏量与 Cayley 核维数不符，或浮点 Laplacian 行和超出容差"""
