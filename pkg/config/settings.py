"""
复平衡/环面动力系统分析工具 - 系统配置

所有数值容差、守卫阈值、积分器默认值和并发参数集中在 SYSTEM_CONFIG 中，
各模块通过 get_config() 读取副本，显式参数优先于配置。
"""

import copy
import logging
import os
import sys
from typing import Any, Dict, Optional

from dotenv import load_dotenv

# 加载 .env（如果存在）
load_dotenv()

# 系统配置
SYSTEM_CONFIG: Dict[str, Any] = {
    # 日志配置
    'logging': {
        'level': logging.INFO,
        'format': '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        'file_path': None  # None 表示只输出到控制台（stderr）
    },

    # 数值容差
    'numerics': {
        'steady_state_tol': 1e-9,     # 特解最小二乘的归一化残差上限
        'residual_tol': 1e-8,         # Birch 点残差三元组上限
        'tie_tol': 1e-12,             # 分层判定的相对平局容差
        'negativity_tol': 1e-12,      # 积分步产生负分量的拒绝阈值
        'laplacian_float_tol': 1e-12  # 浮点模式下行和检查（相对最大元素）
    },

    # 树常数
    'tree_constants': {
        'enumeration_max_class_size': 8,  # i-树枚举的组合守卫
    },

    # Birch 点求解器
    'birch': {
        'max_iterations': 200,
        'gradient_tol': 1e-10,
        'residual_tol': 1e-8,
        'uniqueness_starts': 5,
        'armijo': 1e-4,
        'min_step_fraction': 1e-16,
    },

    # 积分器
    'integrator': {
        'method': 'rk45',
        'step': 1e-2,
        'rtol': 1e-8,
        'atol': 1e-10,
        't_end': 50.0,
        'max_steps': 200000,
        'monitor_every': 1,
        'convergence_tol': 1e-9,
        'min_step': 1e-14,
        'max_step': 1.0,
    },

    # 分层 / Farkas
    'strata': {
        'max_pairs': 20,
        'max_tie_completions': 64,
    },

    # 并发配置
    'concurrency': {
        'corpus_runner': {
            'max_workers': 4,
            'description': '语料运行器 - 按网络并行'
        },
        'sweeps': {
            'max_workers': 4,
            'description': '参数扫描 - 唯一性探测与吸引性扫描并行'
        }
    },

    # HTTP 服务
    'api': {
        'host': '0.0.0.0',
        'port': 8000,
    },
}

# 环境变量覆盖：TORIC_<NAME> -> (分组, 键, 类型)
_ENV_OVERRIDES = {
    'TORIC_LOG_LEVEL': ('logging', 'level', str),
    'TORIC_LOG_FILE': ('logging', 'file_path', str),
    'TORIC_ENUMERATION_GUARD': ('tree_constants', 'enumeration_max_class_size', int),
    'TORIC_STEADY_STATE_TOL': ('numerics', 'steady_state_tol', float),
    'TORIC_RESIDUAL_TOL': ('numerics', 'residual_tol', float),
    'TORIC_BIRCH_MAX_ITER': ('birch', 'max_iterations', int),
    'TORIC_API_PORT': ('api', 'port', int),
}


def _apply_env_overrides(config: Dict[str, Any]) -> Dict[str, Any]:
    for env_name, (group, key, cast) in _ENV_OVERRIDES.items():
        raw = os.getenv(env_name)
        if raw is None or raw == '':
            continue
        config[group][key] = cast(raw)

    workers = os.getenv('TORIC_MAX_WORKERS')
    if workers:
        for pool in config['concurrency'].values():
            pool['max_workers'] = int(workers)
    return config


def get_config() -> Dict[str, Any]:
    """获取系统配置（深拷贝，调用方可自由修改）"""
    return _apply_env_overrides(copy.deepcopy(SYSTEM_CONFIG))


def get_max_workers(pool_name: str) -> int:
    """获取指定任务池的最大线程数"""
    pool = get_config()['concurrency'].get(pool_name, {})
    return max(1, int(pool.get('max_workers', 1)))


def setup_logging(level: Optional[Any] = None):
    """设置日志系统 - 控制台输出到 stderr，保证 stdout 上的报告可逐字节复现"""
    config = get_config()['logging']

    level = level if level is not None else config['level']
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.INFO

    formatter = logging.Formatter(config['format'])
    handlers = []

    if config['file_path']:
        file_handler = logging.FileHandler(
            config['file_path'],
            mode='a',
            encoding='utf-8'
        )
        file_handler.setFormatter(formatter)
        handlers.append(file_handler)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    handlers.append(console_handler)

    logging.basicConfig(
        level=level,
        handlers=handlers,
        force=True
    )

    # 第三方库日志级别
    logging.getLogger('uvicorn.access').setLevel(logging.WARNING)
    logging.getLogger('httpx').setLevel(logging.WARNING)
