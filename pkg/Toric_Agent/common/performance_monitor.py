#!/usr/bin/env python3
"""
Toric_Agent 性能监控系统

按阶段（解析、结构分析、树常数、Birch 点、积分……）累计耗时与调用次数。
仪表盘只写到 stderr，报告文件单独输出，绝不混入 JSON 结果。
"""

import json
import logging
import sys
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Dict, List, Optional


@dataclass
class StageMetrics:
    """单个阶段的统计"""
    calls: int = 0
    failures: int = 0
    total_seconds: float = 0.0
    max_seconds: float = 0.0

    @property
    def avg_seconds(self) -> float:
        return self.total_seconds / self.calls if self.calls else 0.0


@dataclass
class SystemPerformanceReport:
    """系统性能报告"""
    timestamp: datetime = field(default_factory=datetime.now)
    stages: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    global_metrics: Dict[str, Any] = field(default_factory=dict)
    slow_stages: List[str] = field(default_factory=list)


class AnalysisPerformanceMonitor:
    """分析流水线性能监控器"""

    def __init__(self, slow_stage_threshold: float = 5.0):
        self.logger = logging.getLogger(f"{__name__}.{self.__class__.__name__}")
        self.monitoring_start_time = time.time()
        self.slow_stage_threshold = slow_stage_threshold
        self._stages: Dict[str, StageMetrics] = {}

    @contextmanager
    def track(self, stage: str):
        """计时上下文：with monitor.track('birch'): ..."""
        metrics = self._stages.setdefault(stage, StageMetrics())
        start = time.perf_counter()
        try:
            yield metrics
        except Exception:
            metrics.failures += 1
            raise
        finally:
            elapsed = time.perf_counter() - start
            metrics.calls += 1
            metrics.total_seconds += elapsed
            metrics.max_seconds = max(metrics.max_seconds, elapsed)
            self.logger.debug(f"⏱️ 阶段 {stage} 耗时 {elapsed:.4f}s")

    def stage(self, name: str) -> Optional[StageMetrics]:
        return self._stages.get(name)

    def generate_comprehensive_report(self) -> SystemPerformanceReport:
        """生成综合性能报告"""
        report = SystemPerformanceReport()
        for name, metrics in sorted(self._stages.items()):
            report.stages[name] = {
                'calls': metrics.calls,
                'failures': metrics.failures,
                'total_seconds': round(metrics.total_seconds, 6),
                'avg_seconds': round(metrics.avg_seconds, 6),
                'max_seconds': round(metrics.max_seconds, 6),
            }
            if metrics.max_seconds > self.slow_stage_threshold:
                report.slow_stages.append(name)

        report.global_metrics = {
            'uptime_seconds': round(time.time() - self.monitoring_start_time, 3),
            'total_calls': sum(m.calls for m in self._stages.values()),
            'total_failures': sum(m.failures for m in self._stages.values()),
        }
        return report

    def print_performance_dashboard(self, stream=None):
        """打印性能仪表盘（默认 stderr）"""
        stream = stream or sys.stderr
        report = self.generate_comprehensive_report()

        print("\n" + "=" * 60, file=stream)
        print("📊 Toric_Agent 性能仪表盘", file=stream)
        print("=" * 60, file=stream)
        print(f"📅 报告时间: {report.timestamp.strftime('%Y-%m-%d %H:%M:%S')}", file=stream)
        for name, stats in report.stages.items():
            print(f"   {name}: {stats['calls']} 次, 合计 {stats['total_seconds']:.3f}s, "
                  f"最长 {stats['max_seconds']:.3f}s, 失败 {stats['failures']}", file=stream)
        if report.slow_stages:
            print(f"⏰ 慢阶段: {', '.join(report.slow_stages)}", file=stream)
        print("=" * 60, file=stream)

    def export_performance_report(self, filepath: str) -> str:
        """导出性能报告到 JSON 文件"""
        report = self.generate_comprehensive_report()
        payload = {
            'timestamp': report.timestamp.isoformat(),
            'stages': report.stages,
            'global_metrics': report.global_metrics,
            'slow_stages': report.slow_stages,
        }
        with open(filepath, 'w', encoding='utf-8') as f:
            json.dump(payload, f, ensure_ascii=False, indent=2)
        self.logger.info(f"📄 性能报告已导出: {filepath}")
        return filepath
