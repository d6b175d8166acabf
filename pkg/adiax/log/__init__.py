"""
日志模块

进程级 ``adiax`` 日志器、运行方式预设，以及数值流水线各阶段使用的上下文日志器。
"""

from .config import LOG_CONFIG_ENV, LOG_PROFILE_ENV, LogConfig, LogProfile, resolve_log_config
from .manager import SingletonLogger, JsonFormatter
from .context import ContextLogger, TimedContextLogger, StructuredLogger
from .setup import (
    setup_logging,
    setup_run_logging,
    get_logger,
    create_logger_with_context,
    create_timed_logger,
    create_structured_logger,
    reset_logging,
    log_execution_time,
)

__all__ = [
    'LOG_CONFIG_ENV',
    'LOG_PROFILE_ENV',
    'LogConfig',
    'LogProfile',
    'resolve_log_config',
    'SingletonLogger',
    'JsonFormatter',
    'ContextLogger',
    'TimedContextLogger',
    'StructuredLogger',
    'setup_logging',
    'setup_run_logging',
    'get_logger',
    'create_logger_with_context',
    'create_timed_logger',
    'create_structured_logger',
    'reset_logging',
    'log_execution_time',
]
