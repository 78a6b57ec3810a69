"""
配置包初始化
"""

from .settings import get_config, get_max_workers, setup_logging, SYSTEM_CONFIG

__all__ = ['get_config', 'get_max_workers', 'setup_logging', 'SYSTEM_CONFIG']
