"""
环面动力系统分析 - 共同数据结构

定义了系统中使用的所有数据结构和枚举类型。
下标约定：内部一律从 0 开始；对外（DSL 速率文件、JSON 报告）从 1 开始。
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

import numpy as np

from .errors import NetworkValidationError, RateAssignmentError

Number = Union[Fraction, float]
Edge = Tuple[int, int]


class RateKind(Enum):
    """速率数值类型"""
    EXACT = "exact"    # 有理数（Fraction）
    FLOAT = "float"    # 浮点


class IntegratorMethod(Enum):
    """积分方法"""
    RK4 = "rk4"        # 定步长经典 RK4
    RK45 = "rk45"      # 自适应 Runge-Kutta-Fehlberg 4(5)


class TrajectoryStatus(Enum):
    """积分终止原因"""
    COMPLETED = "completed"          # 到达 t_end
    CONVERGED = "converged"          # ‖c - c*‖ ≤ convergence_tol
    STEP_COLLAPSE = "step_collapse"  # 步长塌缩，返回部分轨迹
    MAX_STEPS = "max_steps"          # 达到最大步数


def number_to_json(value: Any) -> Any:
    """Fraction 输出为 "p/q" 字符串，其余数值按 float 输出"""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    return value


# ==============================================================================
# 网络与速率
# ==============================================================================

@dataclass(frozen=True)
class ReactionNetwork:
    """化学反应网络：配合物有向图 + 化学计量矩阵 Y（第 i 行为 y_i）+ 物种名"""
    species: Tuple[str, ...]
    complexes: Tuple[Tuple[int, ...], ...]
    edges: Tuple[Edge, ...]
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'species', tuple(self.species))
        object.__setattr__(self, 'complexes', tuple(tuple(int(v) for v in y) for y in self.complexes))
        object.__setattr__(self, 'edges', tuple((int(i), int(j)) for i, j in self.edges))
        if not self.labels:
            object.__setattr__(self, 'labels', tuple(f"k{i + 1}_{j + 1}" for i, j in self.edges))
        else:
            object.__setattr__(self, 'labels', tuple(self.labels))
        self._validate()

    def _validate(self):
        s = len(self.species)
        if len(set(self.species)) != s:
            raise NetworkValidationError("物种名重复")
        for idx, y in enumerate(self.complexes):
            if len(y) != s:
                raise NetworkValidationError(f"配合物 {idx + 1} 的指数向量长度为 {len(y)}，应为 {s}")
            if any(v < 0 for v in y):
                raise NetworkValidationError(f"配合物 {idx + 1} 含负的化学计量系数")
        if len(set(self.complexes)) != len(self.complexes):
            raise NetworkValidationError("配合物作为向量必须两两不同")
        n = len(self.complexes)
        seen = set()
        for i, j in self.edges:
            if not (0 <= i < n and 0 <= j < n):
                raise NetworkValidationError(f"边 ({i + 1},{j + 1}) 引用了不存在的配合物")
            if i == j:
                raise NetworkValidationError(f"不允许自环: 配合物 {i + 1}")
            if (i, j) in seen:
                raise NetworkValidationError(f"重复的有向边 ({i + 1},{j + 1})")
            seen.add((i, j))
        if len(self.labels) != len(self.edges):
            raise NetworkValidationError("边标签数量与边数不一致")
        if len(set(self.labels)) != len(self.labels):
            raise NetworkValidationError("边标签必须互不相同")

    @property
    def n(self) -> int:
        return len(self.complexes)

    @property
    def s(self) -> int:
        return len(self.species)

    @cached_property
    def edge_index(self) -> Dict[Edge, int]:
        return {edge: k for k, edge in enumerate(self.edges)}

    @cached_property
    def stoichiometric_matrix(self) -> np.ndarray:
        """n×s 整数矩阵 Y"""
        return np.array(self.complexes, dtype=np.int64).reshape(self.n, self.s)

    def has_edge(self, i: int, j: int) -> bool:
        return (i, j) in self.edge_index

    def label_of(self, i: int, j: int) -> str:
        return self.labels[self.edge_index[(i, j)]]

    def reaction_vector(self, i: int, j: int) -> Tuple[int, ...]:
        return tuple(b - a for a, b in zip(self.complexes[i], self.complexes[j]))

    def reaction_vectors(self) -> List[Tuple[int, ...]]:
        return [self.reaction_vector(i, j) for i, j in self.edges]

    def complex_label(self, i: int) -> str:
        terms = []
        for name, coeff in zip(self.species, self.complexes[i]):
            if coeff == 1:
                terms.append(name)
            elif coeff > 1:
                terms.append(f"{coeff} {name}")
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class RateAssignment:
    """每条有向边一个正的速率常数；数值类型显式记录"""
    values: Mapping[Edge, Number]
    kind: RateKind

    def __post_init__(self):
        normalized = {}
        for (i, j), value in dict(self.values).items():
            if self.kind is RateKind.EXACT:
                if isinstance(value, float):
                    raise RateAssignmentError("精确模式下不接受浮点速率")
                value = Fraction(value)
            else:
                value = float(value)
                if not np.isfinite(value):
                    raise RateAssignmentError(f"边 ({i + 1},{j + 1}) 的速率不是有限数")
            if value <= 0:
                raise RateAssignmentError(f"边 ({i + 1},{j + 1}) 的速率必须为正，得到 {value}")
            normalized[(int(i), int(j))] = value
        object.__setattr__(self, 'values', normalized)

    @classmethod
    def from_mapping(cls, values: Mapping[Edge, Any]) -> 'RateAssignment':
        """整数/Fraction 全部精确时为 EXACT，否则为 FLOAT"""
        exact = all(isinstance(v, (int, Fraction)) and not isinstance(v, bool) for v in values.values())
        return cls(dict(values), RateKind.EXACT if exact else RateKind.FLOAT)

    @classmethod
    def uniform(cls, network: ReactionNetwork, value: Number = 1) -> 'RateAssignment':
        return cls.from_mapping({edge: value for edge in network.edges})

    @property
    def is_exact(self) -> bool:
        return self.kind is RateKind.EXACT

    def __getitem__(self, edge: Edge) -> Number:
        return self.values[edge]

    def check_domain(self, network: ReactionNetwork):
        """定义域必须恰好等于网络的边集"""
        domain = set(self.values)
        edges = set(network.edges)
        if domain != edges:
            missing = sorted(edges - domain)
            extra = sorted(domain - edges)
            parts = []
            if missing:
                parts.append("缺少 " + ", ".join(f"({i + 1},{j + 1})" for i, j in missing))
            if extra:
                parts.append("多余 " + ", ".join(f"({i + 1},{j + 1})" for i, j in extra))
            raise RateAssignmentError("速率定义域与边集不一致: " + "; ".join(parts))

    def as_float(self) -> 'RateAssignment':
        if self.kind is RateKind.FLOAT:
            return self
        return RateAssignment({e: float(v) for e, v in self.values.items()}, RateKind.FLOAT)

    def as_exact(self) -> 'RateAssignment':
        """浮点值按二进制精确转换为 Fraction"""
        if self.kind is RateKind.EXACT:
            return self
        return RateAssignment({e: Fraction(v) for e, v in self.values.items()}, RateKind.EXACT)

    def vector(self, network: ReactionNetwork) -> List[Number]:
        return [self.values[edge] for edge in network.edges]

    def to_dict(self, network: ReactionNetwork) -> Dict[str, Any]:
        return {
            'kind': self.kind.value,
            'rates': [
                {'edge': [i + 1, j + 1], 'label': network.label_of(i, j), 'value': number_to_json(self.values[(i, j)])}
                for i, j in network.edges
            ],
        }


@dataclass(frozen=True)
class ParsedNetwork:
    """解析结果：网络 + 行内速率（若全部给出）"""
    network: ReactionNetwork
    rates: Optional[RateAssignment] = None


# ==============================================================================
# 结构分析
# ==============================================================================

@dataclass(frozen=True)
class WeakReversibility:
    """弱可逆性：每个连通类是否强连通"""
    weakly_reversible: bool
    per_class: Tuple[bool, ...]

    def __bool__(self) -> bool:
        return self.weakly_reversible


@dataclass(frozen=True)
class StructuralReport:
    """结构报告：连通类、弱可逆性、σ、δ 与化学计量子空间基"""
    species: Tuple[str, ...]
    complexes: Tuple[Tuple[int, ...], ...]
    edges: Tuple[Edge, ...]
    linkage_classes: Tuple[Tuple[int, ...], ...]
    weakly_reversible: bool
    strongly_connected_classes: Tuple[bool, ...]
    sigma: int
    delta: int
    stoich_basis: Tuple[Tuple[int, ...], ...]
    complex_labels: Tuple[str, ...] = ()
    moduli_codimension: Optional[int] = None
    lawrence_type: Optional[bool] = None

    @property
    def l(self) -> int:  # noqa: E743
        return len(self.linkage_classes)

    @property
    def n(self) -> int:
        return len(self.complexes)

    def to_dict(self) -> Dict[str, Any]:
        payload = {
            'species': list(self.species),
            'complexes': [list(y) for y in self.complexes],
            'complex_labels': list(self.complex_labels),
            'edges': [[i + 1, j + 1] for i, j in self.edges],
            'linkage_classes': [[i + 1 for i in cls] for cls in self.linkage_classes],
            'l': self.l,
            'n': self.n,
            's': len(self.species),
            'sigma': self.sigma,
            'delta': self.delta,
            'weakly_reversible': self.weakly_reversible,
            'strongly_connected_classes': list(self.strongly_connected_classes),
            'stoich_basis': [list(v) for v in self.stoich_basis],
            'ordering': 'first-appearance',
        }
        if self.moduli_codimension is not None:
            payload['moduli_codimension'] = self.moduli_codimension
        if self.lawrence_type is not None:
            payload['lawrence_type'] = self.lawrence_type
        return payload


# ==============================================================================
# 树常数
# ==============================================================================

@dataclass(frozen=True)
class ITree:
    """以 sink 为唯一汇点的生成树（所有边指向 sink）"""
    sink: int
    edges: Tuple[Edge, ...]


@dataclass(frozen=True)
class TreeConstants:
    """K ∈ R^n：按连通类计算的 i-树多项式取值"""
    values: Tuple[Number, ...]
    linkage_class: Tuple[int, ...]               # 每个配合物所属连通类的序号
    strongly_connected: Tuple[bool, ...]         # 每个连通类是否强连通
    kind: RateKind
    monomial_counts: Optional[Tuple[int, ...]] = None

    def __getitem__(self, i: int) -> Number:
        return self.values[i]

    def __len__(self) -> int:
        return len(self.values)

    def to_records(self) -> List[Dict[str, Any]]:
        records = []
        for i, value in enumerate(self.values):
            cls = self.linkage_class[i]
            record = {
                'index': i + 1,
                'linkage_class': cls + 1,
                'value': number_to_json(value),
            }
            if not self.strongly_connected[cls]:
                record['flag'] = 'non-reversible class'
            if self.monomial_counts is not None:
                record['monomial_count'] = self.monomial_counts[i]
            records.append(record)
        return records


# ==============================================================================
# Cayley 格
# ==============================================================================

@dataclass(frozen=True)
class CayleyMatrix:
    """(s+l)×n 整数矩阵；列按连通类分组，column_order[k] 是第 k 列对应的配合物"""
    rows: Tuple[Tuple[int, ...], ...]
    column_order: Tuple[int, ...]
    linkage_classes: Tuple[Tuple[int, ...], ...]
    s: int

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), len(self.column_order)

    def in_complex_order(self) -> Tuple[Tuple[int, ...], ...]:
        """列还原为配合物原始次序，核向量因此与 K_1..K_n 对齐"""
        n = len(self.column_order)
        result = []
        for row in self.rows:
            reordered = [0] * n
            for k, complex_index in enumerate(self.column_order):
                reordered[complex_index] = row[k]
            result.append(tuple(reordered))
        return tuple(result)


@dataclass(frozen=True)
class LatticeBasis:
    """Z^n 中的整数向量组"""
    vectors: Tuple[Tuple[int, ...], ...]
    dimension: int

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)


@dataclass(frozen=True)
class BinomialWitness:
    """二项式 K^{u+} - K^{u-} 的取值"""
    u_plus: Tuple[int, ...]
    u_minus: Tuple[int, ...]
    lhs: Number
    rhs: Number

    def to_dict(self) -> Dict[str, Any]:
        return {
            'u_plus': list(self.u_plus),
            'u_minus': list(self.u_minus),
            'lhs': number_to_json(self.lhs),
            'rhs': number_to_json(self.rhs),
        }


@dataclass(frozen=True)
class ModuliMembership:
    """复平衡（模空间成员）判定结果"""
    balanced: bool
    kernel_dim: int
    basis: Optional[LatticeBasis] = None
    tree_constants: Optional[TreeConstants] = None
    violated: Optional[BinomialWitness] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.balanced

    def to_dict(self) -> Dict[str, Any]:
        payload = {'balanced': self.balanced, 'kernel_dim': self.kernel_dim}
        if self.violated is not None:
            payload['violated_binomial'] = self.violated.to_dict()
        if self.reason:
            payload['reason'] = self.reason
        return payload


# ==============================================================================
# 平衡
# ==============================================================================

@dataclass(frozen=True)
class ReversiblePairing:
    """可逆对 {i,j}（按 i<j 存储）以及剩余的单向边"""
    pairs: Tuple[Edge, ...]
    leftover: Tuple[Edge, ...]

    @property
    def fully_reversible(self) -> bool:
        return not self.leftover


@dataclass(frozen=True)
class CircuitWitness:
    """违反的回路：Π (κ_ij/κ_ji)^λ_e ≠ 1"""
    pairs: Tuple[Edge, ...]
    exponents: Tuple[int, ...]
    product: Number

    def to_dict(self) -> Dict[str, Any]:
        return {
            'pairs': [[i + 1, j + 1] for i, j in self.pairs],
            'exponents': list(self.exponents),
            'product': number_to_json(self.product),
        }


@dataclass(frozen=True)
class DetailedBalancing:
    """细致平衡判定结果"""
    balanced: bool
    pairing: ReversiblePairing
    circuits: Optional[LatticeBasis] = None
    violated: Optional[CircuitWitness] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.balanced

    def to_dict(self) -> Dict[str, Any]:
        payload = {
            'detailed_balancing': self.balanced,
            'circuit_count': len(self.circuits) if self.circuits is not None else 0,
        }
        if self.violated is not None:
            payload['violated_circuit'] = self.violated.to_dict()
        if self.reason:
            payload['reason'] = self.reason
        return payload


@dataclass(frozen=True)
class ScalingVector:
    """L = 1/c*（分量倒数）"""
    values: Tuple[float, ...]
    birch_point: Tuple[float, ...]

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)


# ==============================================================================
# Birch 点与动力学
# ==============================================================================

@dataclass
class BirchPoint:
    """不变多面体内唯一的正稳态"""
    c_star: np.ndarray
    residuals: Dict[str, float]
    iterations: int
    c_hat: Optional[np.ndarray] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'c_star': [float(x) for x in self.c_star],
            'residuals': {k: float(v) for k, v in self.residuals.items()},
            'iterations': self.iterations,
        }


@dataclass
class IntegratorConfig:
    """积分器配置"""
    method: IntegratorMethod = IntegratorMethod.RK45
    step: float = 1e-2
    rtol: float = 1e-8
    atol: float = 1e-10
    t_end: float = 50.0
    max_steps: int = 200000
    monitor_every: int = 1
    convergence_tol: Optional[float] = 1e-9
    min_step: float = 1e-14
    max_step: float = 1.0

    def __post_init__(self):
        if isinstance(self.method, str):
            self.method = IntegratorMethod(self.method.lower())
        for name in ('step', 'rtol', 'atol', 't_end', 'min_step', 'max_step'):
            if not getattr(self, name) > 0:
                raise ValueError(f"积分器参数 {name} 必须为正")
        if self.max_steps < 1 or self.monitor_every < 1:
            raise ValueError("max_steps 与 monitor_every 必须为正整数")

    @classmethod
    def from_config(cls, config: Mapping[str, Any], **overrides) -> 'IntegratorConfig':
        params = {key: config[key] for key in (
            'method', 'step', 'rtol', 'atol', 't_end', 'max_steps',
            'monitor_every', 'convergence_tol', 'min_step', 'max_step') if key in config}
        params.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**params)


@dataclass(frozen=True)
class MonitorSample:
    """单个采样点的监控量（无 Birch 点时 E 与距离为 None）"""
    E_value: Optional[float]
    conservation_drift: float
    boundary_distance: float
    distance_to_birch: Optional[float]


@dataclass
class Trajectory:
    """带时间戳的浓度序列及监控序列"""
    times: List[float] = field(default_factory=list)
    states: List[np.ndarray] = field(default_factory=list)
    monitors: List[MonitorSample] = field(default_factory=list)
    status: TrajectoryStatus = TrajectoryStatus.COMPLETED
    c_star: Optional[np.ndarray] = None
    steps: int = 0
    rejected_steps: int = 0

    def __len__(self) -> int:
        return len(self.times)

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def csv_header(self, s: int) -> List[str]:
        return ['t'] + [f"c_{k + 1}" for k in range(s)] + [
            'E', 'conservation_drift', 'boundary_distance', 'dist_to_birch']

    def csv_rows(self) -> List[List[Any]]:
        rows = []
        for t, state, monitor in zip(self.times, self.states, self.monitors):
            rows.append([t] + [float(x) for x in state] + [
                '' if monitor.E_value is None else monitor.E_value,
                monitor.conservation_drift,
                monitor.boundary_distance,
                '' if monitor.distance_to_birch is None else monitor.distance_to_birch,
            ])
        return rows


# ==============================================================================
# 分层与 Farkas
# ==============================================================================

@dataclass(frozen=True)
class AcyclicOrientation:
    """每个可逆对选定一个方向，且诱导有向图无环"""
    edges: Tuple[Edge, ...]
    topological_order: Tuple[int, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'edges': [[i + 1, j + 1] for i, j in self.edges],
            'topological_order': [i + 1 for i in self.topological_order],
        }


@dataclass(frozen=True)
class StratumLocation:
    """点所在的分层；存在平局时位于分层边界上"""
    orientation: Optional[AcyclicOrientation]
    strict_edges: Tuple[Edge, ...]
    tied_pairs: Tuple[Edge, ...]

    @property
    def on_stratum_boundary(self) -> bool:
        return bool(self.tied_pairs)


@dataclass(frozen=True)
class FarkasCertificate:
    """面 F_I 上的严格正向量 α（I 外为 0）及每条定向边的松弛量"""
    face: Tuple[int, ...]
    alpha: Tuple[Fraction, ...]
    slacks: Tuple[Fraction, ...]
    orientation: AcyclicOrientation

    def to_dict(self) -> Dict[str, Any]:
        return {
            'feasible': True,
            'face': [k + 1 for k in self.face],
            'alpha': [number_to_json(a) for a in self.alpha],
            'slacks': [number_to_json(x) for x in self.slacks],
        }


@dataclass(frozen=True)
class DualCertificate:
    """不可行证书：λ ≥ 0，v = Σ λ_e (y_j - y_i) 满足 supp(v+)∩I = ∅ 且 supp(v-)∩I ≠ ∅"""
    face: Tuple[int, ...]
    multipliers: Tuple[Fraction, ...]
    combination: Tuple[Fraction, ...]
    orientation: AcyclicOrientation

    def to_dict(self) -> Dict[str, Any]:
        return {
            'feasible': False,
            'face': [k + 1 for k in self.face],
            'multipliers': [number_to_json(x) for x in self.multipliers],
            'combination': [number_to_json(x) for x in self.combination],
        }


@dataclass
class DescentReport:
    """沿轨迹的 ⟨α, dc/dt⟩ 最小值"""
    minimum: Optional[float]
    samples_checked: int
    samples_skipped: int
    certificates: List[Any] = field(default_factory=list)
    flagged: List[Dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'descent_minimum': self.minimum,
            'samples_checked': self.samples_checked,
            'samples_skipped': self.samples_skipped,
            'flagged': self.flagged,
        }
