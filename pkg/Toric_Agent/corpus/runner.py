"""
示例语料运行器

逐个加载内置网络，计算结构不变量与复平衡判定，并与已知数值逐项比对。
每个网络一个任务，在线程池中并行执行；结果按内置顺序输出。
"""

import logging
import random
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from config.settings import get_max_workers
from ..cayley_lattice.cayley import binomial_in_moduli, moduli_membership_exact
from ..common.data_structures import ParsedNetwork, RateAssignment, RateKind, ReactionNetwork
from ..network_core.parser import parse_network
from ..network_core.structure import analyze

logger = logging.getLogger(__name__)

NETWORK_DIR = Path(__file__).resolve().parent / 'networks'

BUNDLED_NETWORKS = (
    'triangle', 'triangle-noncyclic', 'trap',
    'two-substrate', 'two-substrate-reversible', 'recombination',
)

# cb: 'always' 表示对任意采样速率都平衡；True/False 表示对文件内速率（以及采样速率）的判定
CORPUS_EXPECTATIONS: Dict[str, Dict[str, Any]] = {
    'triangle': {'n': 3, 'l': 1, 'sigma': 1, 'delta': 1, 'weakly_reversible': True, 'cb': True},
    'triangle-noncyclic': {'n': 3, 'l': 1, 'sigma': 1, 'delta': 1, 'weakly_reversible': False, 'cb': False},
    'trap': {'n': 8, 'l': 4, 'sigma': 4, 'delta': 0, 'weakly_reversible': True, 'cb': 'always'},
    'two-substrate': {'n': 12, 'l': 4, 'sigma': 6, 'delta': 2, 'weakly_reversible': False, 'cb': False},
    'two-substrate-reversible': {'n': 12, 'l': 4, 'sigma': 6, 'delta': 2, 'weakly_reversible': True},
    'recombination': {'n': 16, 'l': 7, 'sigma': 4, 'delta': 5, 'weakly_reversible': True, 'cb': True},
}

# 重组网络模空间的 18 个生成二项式（1-based 配合物下标）：12 个三次、6 个四次
RECOMBINATION_BINOMIALS: Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...] = (
    ((8, 11, 15), (7, 12, 16)),
    ((6, 9, 15), (5, 10, 16)),
    ((4, 11, 14), (3, 12, 16)),
    ((2, 9, 14), (1, 10, 16)),
    ((4, 7, 14), (3, 8, 15)),
    ((2, 5, 14), (1, 6, 15)),
    ((6, 12, 13), (5, 11, 14)),
    ((2, 12, 13), (1, 11, 15)),
    ((8, 10, 13), (7, 9, 14)),
    ((4, 10, 13), (3, 9, 15)),
    ((2, 8, 13), (1, 7, 16)),
    ((4, 6, 13), (3, 5, 16)),
    ((9, 11, 14, 15), (10, 12, 13, 16)),
    ((6, 8, 13, 15), (5, 7, 14, 16)),
    ((2, 4, 13, 14), (1, 3, 15, 16)),
    ((5, 8, 10, 11), (6, 7, 9, 12)),
    ((1, 4, 10, 11), (2, 3, 9, 12)),
    ((1, 4, 6, 7), (2, 3, 5, 8)),
)


def binomial_vector(n: int, plus: Tuple[int, ...], minus: Tuple[int, ...]) -> Tuple[int, ...]:
    """K^{plus} - K^{minus}（1-based 下标）编码为 u = u₊ - u₋"""
    u = [0] * n
    for i in plus:
        u[i - 1] += 1
    for i in minus:
        u[i - 1] -= 1
    return tuple(u)


def bundled_path(name: Union[str, Path]) -> Path:
    """把 'triangle'、'triangle.crn' 或 'examples/triangle.crn' 解析到内置网络文件"""
    stem = Path(name).name
    if stem.endswith('.crn'):
        stem = stem[:-len('.crn')]
    path = NETWORK_DIR / f"{stem}.crn"
    if not path.is_file():
        raise FileNotFoundError(f"没有名为 {stem} 的内置网络（可选: {', '.join(BUNDLED_NETWORKS)}）")
    return path


def load_bundled(name: str) -> ParsedNetwork:
    return parse_network(bundled_path(name).read_text(encoding='utf-8'))


def sample_rates(network: ReactionNetwork, rng: random.Random, max_numerator: int = 9,
                 max_denominator: int = 5) -> RateAssignment:
    """每条边取随机正有理数 p/q"""
    values = {
        edge: Fraction(rng.randint(1, max_numerator), rng.randint(1, max_denominator))
        for edge in network.edges
    }
    return RateAssignment(values, RateKind.EXACT)


@dataclass
class CorpusRow:
    """语料表中的一行"""
    name: str
    n: int
    l: int  # noqa: E741
    sigma: int
    delta: int
    weakly_reversible: bool
    cb: Optional[bool]
    rate_samples: int = 0
    extra: Dict[str, Any] = field(default_factory=dict)
    mismatches: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> Dict[str, Any]:
        payload = {
            'name': self.name,
            'n': self.n,
            'l': self.l,
            'sigma': self.sigma,
            'delta': self.delta,
            'weakly_reversible': self.weakly_reversible,
            'cb': self.cb,
            'rate_samples': self.rate_samples,
            'ok': self.ok,
            'mismatches': list(self.mismatches),
        }
        payload.update(self.extra)
        return payload


@dataclass
class CorpusReport:
    rows: List[CorpusRow]
    seed: int

    @property
    def ok(self) -> bool:
        return all(row.ok for row in self.rows)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'seed': self.seed,
            'ok': self.ok,
            'networks': [row.to_dict() for row in self.rows],
        }


def _compare(row: CorpusRow, expected: Dict[str, Any]):
    for key in ('n', 'l', 'sigma', 'delta', 'weakly_reversible'):
        if key in expected and getattr(row, key) != expected[key]:
            row.mismatches.append(f"{key}: 期望 {expected[key]}，得到 {getattr(row, key)}")


def run_network(name: str, seed: int = 0, rate_samples: int = 20) -> CorpusRow:
    """对单个内置网络计算不变量与复平衡判定并比对期望值"""
    parsed = load_bundled(name)
    network = parsed.network
    report = analyze(network)
    expected = CORPUS_EXPECTATIONS.get(name, {})
    row = CorpusRow(name=name, n=report.n, l=report.l, sigma=report.sigma, delta=report.delta,
                    weakly_reversible=report.weakly_reversible, cb=None)
    _compare(row, expected)

    expected_cb = expected.get('cb')
    if parsed.rates is not None:
        row.cb = moduli_membership_exact(network, parsed.rates).balanced
        if isinstance(expected_cb, bool) and row.cb != expected_cb:
            row.mismatches.append(f"cb: 期望 {expected_cb}，得到 {row.cb}")

    # 'always' 与 False 都是“对任意速率”的断言，用采样速率检验
    if expected_cb == 'always' or expected_cb is False:
        rng = random.Random(f"{seed}:{name}")
        decisions = [
            moduli_membership_exact(network, sample_rates(network, rng)).balanced
            for _ in range(rate_samples)
        ]
        row.rate_samples = rate_samples
        target = expected_cb == 'always'
        failures = sum(1 for d in decisions if d != target)
        if row.cb is None:
            row.cb = all(decisions) if target else any(decisions)
        if failures:
            row.mismatches.append(f"cb: {failures}/{rate_samples} 组采样速率与期望 {target} 不符")

    if name == 'recombination':
        passing = sum(
            1 for plus, minus in RECOMBINATION_BINOMIALS
            if binomial_in_moduli(network, binomial_vector(network.n, plus, minus))
        )
        row.extra['binomials_checked'] = len(RECOMBINATION_BINOMIALS)
        row.extra['binomials_in_moduli'] = passing
        row.extra['moduli_codimension'] = report.moduli_codimension
        if passing != len(RECOMBINATION_BINOMIALS):
            row.mismatches.append(f"二项式: 仅 {passing}/{len(RECOMBINATION_BINOMIALS)} 个位于模理想中")
        if report.moduli_codimension != 5:
            row.mismatches.append(f"moduli_codimension: 期望 5，得到 {report.moduli_codimension}")

    status = "✅" if row.ok else "❌"
    logger.info(f"{status} {name}: n={row.n} l={row.l} σ={row.sigma} δ={row.delta} cb={row.cb}")
    return row


def run_corpus(seed: int = 0, rate_samples: int = 20,
               names: Optional[List[str]] = None) -> CorpusReport:
    """并行运行全部内置网络；任何不符都记录在对应行的 mismatches 中"""
    names = list(names or BUNDLED_NETWORKS)
    rows: List[Optional[CorpusRow]] = [None] * len(names)

    with ThreadPoolExecutor(max_workers=get_max_workers('corpus_runner')) as executor:
        future_to_index = {
            executor.submit(run_network, name, seed, rate_samples): index
            for index, name in enumerate(names)
        }
        for future in as_completed(future_to_index):
            index = future_to_index[future]
            try:
                rows[index] = future.result()
            except Exception as e:
                logger.error(f"❌ 网络 {names[index]} 运行失败: {e}")
                rows[index] = CorpusRow(name=names[index], n=0, l=0, sigma=0, delta=0,
                                        weakly_reversible=False, cb=None,
                                        mismatches=[f"运行失败: {e}"])

    report = CorpusReport(rows=rows, seed=seed)
    failed = [row.name for row in rows if not row.ok]
    if failed:
        logger.warning(f"⚠️ 语料比对失败: {', '.join(failed)}")
    else:
        logger.info(f"🎉 语料 {len(rows)} 个网络全部与已知数值一致")
    return report
