#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Toric Agent - 质量作用反应网络的环面动力系统分析
命令行入口

子命令：
    analyze         结构不变量（连通类、弱可逆性、σ、δ）
    tree-constants  Matrix-Tree 树常数（可选 i-树枚举交叉验证）
    check cb|db     复平衡 / 细致平衡判定
    birch           Birch 点
    simulate        轨迹模拟与 Lyapunov 监控
    strata          无环定向、Farkas 证书与下降检查
    corpus          内置示例语料的端到端比对

退出码：0 成功；1 领域否定结论或领域错误；2 用法/解析错误。
报告写到 stdout（JSON 逐字节可复现），日志与计时写到 stderr。
"""

import argparse
import csv
import io
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

# 添加项目路径
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from config.settings import get_config, setup_logging
from Toric_Agent.balancing import detailed_balancing_exact, scaling_vector
from Toric_Agent.birch import BirchPointSolver
from Toric_Agent.cayley_lattice import moduli_membership_exact
from Toric_Agent.common.data_structures import IntegratorConfig, ParsedNetwork, RateAssignment, number_to_json
from Toric_Agent.common.errors import NetworkInputError, ToricAgentError, ToricDomainError
from Toric_Agent.common.performance_monitor import AnalysisPerformanceMonitor
from Toric_Agent.corpus import bundled_path, run_corpus
from Toric_Agent.dynamics import simulate
from Toric_Agent.network_core import analyze, merge_rates, parse_network, parse_rates_file
from Toric_Agent.strata import acyclic_orientations, descent_check
from Toric_Agent.tree_constants import tree_constants_enumerated, tree_constants_minor

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2


def resolve_network_path(path: str) -> Path:
    """磁盘上存在则直接使用，否则按内置网络名解析（如 examples/triangle.crn）"""
    candidate = Path(path)
    if candidate.is_file():
        return candidate
    return bundled_path(path)


def parse_vector(text: str) -> List[float]:
    """'1,2,3' 或 '1 2 3' -> [1.0, 2.0, 3.0]"""
    tokens = [t for t in text.replace(',', ' ').split() if t]
    if not tokens:
        raise ValueError("向量为空")
    return [float(t) for t in tokens]


def parse_face(text: str) -> List[int]:
    """'I=1,3' 或 '1,3'（物种下标从 1 开始）-> 0-based 下标"""
    body = text.split('=', 1)[1] if '=' in text else text
    indices = [int(t) for t in body.replace(',', ' ').split() if t]
    if not indices:
        raise ValueError("面下标集为空")
    if any(i < 1 for i in indices):
        raise ValueError("面下标从 1 开始")
    return [i - 1 for i in indices]


class RunConfig(BaseModel):
    """一次命令行运行的已校验配置"""
    subcommand: Literal['analyze', 'tree-constants', 'check', 'birch', 'simulate', 'strata', 'corpus']
    check_kind: Optional[Literal['cb', 'db']] = None
    network: Optional[Path] = None
    rates: Optional[Path] = None
    network_text: Optional[str] = None
    rates_text: Optional[str] = None
    initial: Optional[List[float]] = None
    face: Optional[List[int]] = None
    output_format: Literal['json', 'csv', 'text'] = 'json'
    out: Optional[Path] = None
    perf_report: Optional[Path] = None
    tol: Optional[float] = Field(default=None, gt=0, lt=1)
    seed: int = 0
    enumerate_trees: bool = False
    starts: Optional[int] = Field(default=None, ge=1, le=100)
    t_end: Optional[float] = Field(default=None, gt=0)
    method: Optional[Literal['rk4', 'rk45']] = None
    step: Optional[float] = Field(default=None, gt=0)
    rate_samples: int = Field(default=20, ge=1, le=1000)

    @field_validator('network')
    @classmethod
    def _network_exists(cls, value: Optional[Path]) -> Optional[Path]:
        if value is not None and not value.is_file():
            raise ValueError(f"网络文件不存在: {value}")
        return value

    @field_validator('rates')
    @classmethod
    def _rates_exists(cls, value: Optional[Path]) -> Optional[Path]:
        if value is not None and not value.is_file():
            raise ValueError(f"速率文件不存在: {value}")
        return value

    @field_validator('initial')
    @classmethod
    def _initial_positive(cls, value: Optional[List[float]]) -> Optional[List[float]]:
        if value is not None and any(not (x > 0 and x != float('inf')) for x in value):
            raise ValueError("初始浓度必须全部为有限正数")
        return value

    @model_validator(mode='after')
    def _required_inputs(self) -> 'RunConfig':
        if self.subcommand != 'corpus' and self.network is None and self.network_text is None:
            raise ValueError(f"{self.subcommand} 需要网络文件")
        if self.subcommand == 'check' and self.check_kind is None:
            raise ValueError("check 需要指定 cb 或 db")
        if self.subcommand in ('birch', 'simulate', 'strata') and self.initial is None:
            raise ValueError(f"{self.subcommand} 需要 --initial")
        if self.subcommand == 'strata' and self.face is None:
            raise ValueError("strata 需要 --face")
        return self


class AnalysisPipeline:
    """把一次 RunConfig 分派到各分析模块，返回 (报告, 退出码)"""

    def __init__(self, config: RunConfig):
        self.config = config
        self.settings = get_config()
        self.monitor = AnalysisPerformanceMonitor()
        self.logger = logging.getLogger(f"{__name__}.{self.__class__.__name__}")
        self.parsed: Optional[ParsedNetwork] = None

    # ---- 输入 ----

    def load_network(self) -> ParsedNetwork:
        if self.parsed is None:
            if self.config.network_text is not None:
                source, name = self.config.network_text, '<inline>'
            else:
                source, name = self.config.network.read_text(encoding='utf-8'), self.config.network.name
            with self.monitor.track('parse'):
                self.parsed = parse_network(source)
            network = self.parsed.network
            self.logger.info(f"📄 {name}: s={network.s}, n={network.n}, |E|={len(network.edges)}")
        return self.parsed

    def load_rates(self) -> RateAssignment:
        parsed = self.load_network()
        text = self.config.rates_text
        if text is None and self.config.rates is not None:
            text = self.config.rates.read_text(encoding='utf-8')
        override = parse_rates_file(text, parsed.network) if text is not None else None
        return merge_rates(parsed.network, parsed.rates, override)

    def load_initial(self) -> List[float]:
        network = self.load_network().network
        if len(self.config.initial) != network.s:
            raise ValueError(f"--initial 长度 {len(self.config.initial)} 与物种数 {network.s} 不一致")
        return list(self.config.initial)

    def _birch_solver(self) -> BirchPointSolver:
        return BirchPointSolver(residual_tol=self.config.tol)

    # ---- 子命令 ----

    def run(self) -> Tuple[Dict[str, Any], int]:
        handlers = {
            'analyze': self.run_analyze,
            'tree-constants': self.run_tree_constants,
            'check': self.run_check,
            'birch': self.run_birch,
            'simulate': self.run_simulate,
            'strata': self.run_strata,
            'corpus': self.run_corpus,
        }
        with self.monitor.track(self.config.subcommand):
            return handlers[self.config.subcommand]()

    def run_analyze(self) -> Tuple[Dict[str, Any], int]:
        network = self.load_network().network
        with self.monitor.track('structure'):
            report = analyze(network)
        return report.to_dict(), EXIT_OK

    def run_tree_constants(self) -> Tuple[Dict[str, Any], int]:
        network = self.load_network().network
        rates = self.load_rates()
        with self.monitor.track('matrix_tree'):
            constants = tree_constants_minor(network, rates)
        payload: Dict[str, Any] = {'tree_constants': constants.to_records()}
        if self.config.enumerate_trees:
            with self.monitor.track('enumeration'):
                enumerated = tree_constants_enumerated(network, rates)
            for record, count in zip(payload['tree_constants'], enumerated.monomial_counts):
                record['monomial_count'] = count
            if rates.is_exact:
                payload['oracle_agrees'] = tuple(enumerated.values) == tuple(constants.values)
        return payload, EXIT_OK

    def run_check(self) -> Tuple[Dict[str, Any], int]:
        network = self.load_network().network
        rates = self.load_rates()
        if self.config.check_kind == 'cb':
            with self.monitor.track('moduli_membership'):
                decision = moduli_membership_exact(network, rates)
            payload = decision.to_dict()
            if decision.tree_constants is not None:
                payload['tree_constants'] = [number_to_json(v) for v in decision.tree_constants.values]
        else:
            with self.monitor.track('detailed_balancing'):
                decision = detailed_balancing_exact(network, rates)
            payload = decision.to_dict()
        return payload, EXIT_OK if decision.balanced else EXIT_DOMAIN

    def run_birch(self) -> Tuple[Dict[str, Any], int]:
        network = self.load_network().network
        rates = self.load_rates()
        c0 = self.load_initial()
        solver = self._birch_solver()
        with self.monitor.track('birch'):
            result = solver.solve(network, rates, c0)
        payload = result.to_dict()
        if self.config.starts is not None and self.config.starts > 1:
            with self.monitor.track('uniqueness_probe'):
                probe = solver.probe_uniqueness(network, rates, c0, starts=self.config.starts,
                                                seed=self.config.seed)
            payload['uniqueness'] = {'starts': self.config.starts, 'max_relative_spread': probe['spread']}
        return payload, EXIT_OK

    def _integrator_config(self) -> IntegratorConfig:
        return IntegratorConfig.from_config(
            self.settings['integrator'],
            t_end=self.config.t_end,
            method=self.config.method,
            step=self.config.step,
        )

    def run_simulate(self) -> Tuple[Dict[str, Any], int]:
        network = self.load_network().network
        rates = self.load_rates()
        c0 = self.load_initial()
        with self.monitor.track('simulate'):
            trajectory = simulate(network, rates, c0, config=self._integrator_config())

        if self.config.out is not None:
            write_csv(self.config.out, trajectory.csv_header(network.s), trajectory.csv_rows())
            self.logger.info(f"💾 轨迹已写入 {self.config.out}")

        payload = {
            'status': trajectory.status.value,
            'samples': len(trajectory),
            'steps': trajectory.steps,
            'rejected_steps': trajectory.rejected_steps,
            't_final': trajectory.times[-1],
            'final_state': [float(x) for x in trajectory.final_state],
            'c_star': None if trajectory.c_star is None else [float(x) for x in trajectory.c_star],
            '_csv': (trajectory.csv_header(network.s), trajectory.csv_rows()),
        }
        return payload, EXIT_OK

    def run_strata(self) -> Tuple[Dict[str, Any], int]:
        network = self.load_network().network
        rates = self.load_rates()
        c0 = self.load_initial()
        with self.monitor.track('scaling_vector'):
            L = scaling_vector(network, rates, c0)
        with self.monitor.track('orientations'):
            orientations = acyclic_orientations(network)
        with self.monitor.track('simulate'):
            trajectory = simulate(network, rates, c0, config=self._integrator_config(),
                                  c_star=L.birch_point)
        with self.monitor.track('descent_check'):
            descent = descent_check(network, L.values, trajectory, self.config.face, rates=rates)

        certificates = []
        for certificate in descent.certificates:
            record = certificate.to_dict()
            record['orientation'] = certificate.orientation.to_dict()['edges']
            certificates.append(record)
        payload = {
            'scaling_vector': list(L.values),
            'orientations': [o.to_dict() for o in orientations],
            'certificates': certificates,
        }
        payload.update(descent.to_dict())
        return payload, EXIT_OK

    def run_corpus(self) -> Tuple[Dict[str, Any], int]:
        report = run_corpus(seed=self.config.seed, rate_samples=self.config.rate_samples)
        payload = report.to_dict()
        columns = ['name', 'n', 'l', 'sigma', 'delta', 'weakly_reversible', 'cb', 'ok']
        payload['_csv'] = (columns, [[row[c] for c in columns] for row in payload['networks']])
        return payload, EXIT_OK if report.ok else EXIT_DOMAIN


# ==============================================================================
# 输出
# ==============================================================================

def write_csv(path: Path, header: List[str], rows: List[List[Any]]):
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(header)
        writer.writerows(rows)


def render_json(payload: Dict[str, Any]) -> str:
    """键排序、无时间戳，相同输入得到逐字节相同的输出"""
    clean = {k: v for k, v in payload.items() if not k.startswith('_')}
    return json.dumps(clean, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def render_csv(payload: Dict[str, Any]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if '_csv' in payload:
        header, rows = payload['_csv']
        writer.writerow(header)
        writer.writerows(rows)
        return buffer.getvalue()
    writer.writerow(['key', 'value'])
    for key in sorted(k for k in payload if not k.startswith('_')):
        value = payload[key]
        writer.writerow([key, value if isinstance(value, (str, int, float, bool)) or value is None
                         else json.dumps(value, sort_keys=True, ensure_ascii=False)])
    return buffer.getvalue()


def render_text(payload: Dict[str, Any]) -> str:
    lines = []
    for key in sorted(k for k in payload if not k.startswith('_')):
        value = payload[key]
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True, ensure_ascii=False)
        lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


RENDERERS = {'json': render_json, 'csv': render_csv, 'text': render_text}


def report_error(error: Exception, stream=None):
    """结构化错误写到 stderr"""
    stream = stream or sys.stderr
    if isinstance(error, ToricAgentError):
        payload = error.to_dict()
    elif isinstance(error, ValidationError):
        payload = {
            'error': 'UsageError',
            'message': "; ".join(
                f"{'.'.join(str(p) for p in e['loc']) or 'config'}: {e['msg']}" for e in error.errors()),
        }
    else:
        payload = {'error': error.__class__.__name__, 'message': str(error)}
    stream.write(json.dumps(payload, sort_keys=True, ensure_ascii=False) + "\n")


def print_banner(stream=None):
    """打印程序横幅（stderr）"""
    banner = """
╔══════════════════════════════════════════════════════════════════════════════╗
║                  Toric Agent - 环面动力系统分析工具                           ║
║                                                                              ║
║  🧪 反应网络结构分析：连通类、弱可逆性、亏量                                 ║
║  🌲 树常数、Cayley 格与复平衡/细致平衡判定                                   ║
║  🎯 Birch 点、轨迹模拟与 Farkas 证书                                         ║
║                                                                              ║
╚══════════════════════════════════════════════════════════════════════════════╝
"""
    (stream or sys.stderr).write(banner)


class _ArgumentParser(argparse.ArgumentParser):
    """用法错误抛异常而不是直接退出，由 main 统一映射为退出码 2"""

    def error(self, message):
        raise argparse.ArgumentError(None, message)


def build_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument('--format', dest='output_format', choices=['json', 'csv', 'text'], default=argparse.SUPPRESS,
                        help='输出格式（默认 json）')
    common.add_argument('--tol', type=float, default=argparse.SUPPRESS, help='Birch 点残差容差')
    common.add_argument('--seed', type=int, default=argparse.SUPPRESS, help='采样类检查的随机种子')
    common.add_argument('--log-level', default=argparse.SUPPRESS, help='日志级别（DEBUG/INFO/WARNING/ERROR）')
    common.add_argument('--perf-report', dest='perf_report', default=argparse.SUPPRESS,
                        help='把各阶段耗时导出为 JSON 文件')

    parser = _ArgumentParser(
        prog='main.py',
        description='Toric Agent - 质量作用反应网络的环面动力系统分析',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        parents=[common],
        epilog="""
示例用法:
  python main.py analyze examples/triangle.crn
  python main.py tree-constants --enumerate triangle.crn
  python main.py check cb --rates bad.rates examples/triangle.crn
  python main.py birch --initial 1,2 triangle.crn
  python main.py simulate --initial 1,2 --t-end 20 --out traj.csv triangle.crn
  python main.py strata --initial 1,2 --face I=1 triangle.crn
  python main.py corpus
        """
    )
    subparsers = parser.add_subparsers(dest='subcommand')

    def network_command(name: str, help_text: str, rates: bool = True, initial: bool = False):
        sub = subparsers.add_parser(name, help=help_text, parents=[common])
        sub.add_argument('network', help='网络 DSL 文件（或内置网络名）')
        if rates:
            sub.add_argument('--rates', default=None, help='速率文件（覆盖行内速率）')
        if initial:
            sub.add_argument('--initial', required=True, help='初始浓度，如 1,2')
        return sub

    network_command('analyze', '结构不变量', rates=False)
    tree = network_command('tree-constants', 'Matrix-Tree 树常数')
    tree.add_argument('--enumerate', dest='enumerate_trees', action='store_true',
                      help='同时做 i-树枚举交叉验证并报告单项式个数')

    check = subparsers.add_parser('check', help='复平衡 / 细致平衡判定', parents=[common])
    check.add_argument('check_kind', choices=['cb', 'db'])
    check.add_argument('network', help='网络 DSL 文件（或内置网络名）')
    check.add_argument('--rates', default=None, help='速率文件（覆盖行内速率）')

    birch = network_command('birch', 'Birch 点', initial=True)
    birch.add_argument('--starts', type=int, default=None, help='唯一性探测的起点数')

    for name, help_text in (('simulate', '轨迹模拟'), ('strata', '分层与 Farkas 证书')):
        sub = network_command(name, help_text, initial=True)
        sub.add_argument('--t-end', dest='t_end', type=float, default=None)
        sub.add_argument('--method', choices=['rk4', 'rk45'], default=None)
        sub.add_argument('--step', type=float, default=None, help='RK4 固定步长 / RKF45 初始步长')
        if name == 'simulate':
            sub.add_argument('--out', default=None, help='轨迹 CSV 输出路径')
        else:
            sub.add_argument('--face', required=True, help='坐标面下标集，如 I=1,2')

    corpus = subparsers.add_parser('corpus', help='内置示例语料比对', parents=[common])
    corpus.add_argument('--rate-samples', dest='rate_samples', type=int, default=20)
    return parser


def build_run_config(args: argparse.Namespace) -> RunConfig:
    values: Dict[str, Any] = {'subcommand': args.subcommand}
    if getattr(args, 'network', None):
        values['network'] = resolve_network_path(args.network)
    if getattr(args, 'rates', None):
        values['rates'] = Path(args.rates)
    if getattr(args, 'initial', None):
        values['initial'] = parse_vector(args.initial)
    if getattr(args, 'face', None):
        values['face'] = parse_face(args.face)
    if getattr(args, 'out', None):
        values['out'] = Path(args.out)
    if getattr(args, 'perf_report', None):
        values['perf_report'] = Path(args.perf_report)
    for key in ('check_kind', 'output_format', 'tol', 'seed', 'enumerate_trees', 'starts',
                't_end', 'method', 'step', 'rate_samples'):
        value = getattr(args, key, None)
        if value is not None:
            values[key] = value
    return RunConfig(**values)


def main(argv: Optional[List[str]] = None) -> int:
    """主函数：返回退出码"""
    try:
        args = build_parser().parse_args(argv)
    except argparse.ArgumentError as e:
        report_error(ValueError(str(e)))
        return EXIT_USAGE

    if args.subcommand is None:
        build_parser().print_help(sys.stderr)
        return EXIT_USAGE

    log_level = getattr(args, 'log_level', None)
    setup_logging(log_level or os.getenv('TORIC_LOG_LEVEL') or logging.WARNING)
    if (log_level or '').upper() in ('DEBUG', 'INFO'):
        print_banner()

    try:
        config = build_run_config(args)
        pipeline = AnalysisPipeline(config)
        payload, code = pipeline.run()
    except np.linalg.LinAlgError as e:
        # 数值线性代数失败（如奇异 Hessian）属于领域错误；须先于 ValueError 捕获
        report_error(e)
        return EXIT_DOMAIN
    except (NetworkInputError, ValidationError, ValueError, FileNotFoundError) as e:
        report_error(e)
        return EXIT_USAGE
    except ToricDomainError as e:
        report_error(e)
        return EXIT_DOMAIN

    sys.stdout.write(RENDERERS[config.output_format](payload))
    sys.stdout.flush()
    if config.perf_report is not None:
        pipeline.monitor.export_performance_report(str(config.perf_report))
    if logging.getLogger().isEnabledFor(logging.INFO):
        pipeline.monitor.print_performance_dashboard()
    return code


if __name__ == "__main__":
    sys.exit(main())
