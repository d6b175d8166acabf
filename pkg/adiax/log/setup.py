"""
日志初始化与便捷函数

setup_logging 建立进程级日志器；setup_run_logging 供命令行启动时按文件、预设与环境变量选配置。
各模块通过 create_*_logger 取得带上下文的日志器。
"""

import functools
import logging
import time
from typing import Any, Dict, Mapping, Optional

from .config import LogConfig, resolve_log_config
from .context import ContextLogger, StructuredLogger, TimedContextLogger
from .manager import SingletonLogger


def setup_logging(
    log_level: str = "INFO",
    log_file: Optional[str] = None,
    config: Optional[LogConfig] = None
) -> logging.Logger:
    """设置日志记录

    Args:
        log_level: 日志级别，给出 config 时忽略
        log_file: 日志文件路径，给定时启用文件日志
        config: 日志配置对象

    Returns:
        ``adiax`` 日志器
    """
    if config is None:
        config = LogConfig(log_level=log_level)
    config.validate()
    return SingletonLogger().setup(config, log_file)


def setup_run_logging(
    log_level: Optional[str] = None,
    log_file: Optional[str] = None,
    config_file: Optional[str] = None,
    profile: Optional[str] = None,
    environ: Optional[Mapping[str, str]] = None
) -> logging.Logger:
    """命令行运行的日志初始化

    配置来源见 resolve_log_config；log_level 给出时覆盖所选配置中的级别。

    Raises:
        FileNotFoundError: 日志配置文件不存在
        ValueError: 配置内容、级别或预设名无效
    """
    config = resolve_log_config(config_file, profile, environ)
    if log_level:
        config.log_level = log_level
    return setup_logging(config=config, log_file=log_file)


def get_logger() -> logging.Logger:
    """获取日志器实例；尚未初始化时使用默认配置"""
    logger = SingletonLogger().get_logger()
    if logger is None:
        return setup_logging()
    return logger


def create_logger_with_context(context: Dict[str, Any]) -> ContextLogger:
    return ContextLogger(get_logger(), context)


def create_timed_logger(context: Dict[str, Any]) -> TimedContextLogger:
    return TimedContextLogger(get_logger(), context)


def create_structured_logger(context: Dict[str, Any]) -> StructuredLogger:
    return StructuredLogger(get_logger(), context)


def reset_logging():
    """关闭处理器并清空单例，下次 setup_logging 重新初始化"""
    SingletonLogger().reset()


def log_execution_time(level: int = logging.INFO):
    """执行时间日志装饰器"""
    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            logger = get_logger()
            start_time = time.perf_counter()
            logger.log(level, f"⏱️ 开始执行: {func.__qualname__}")
            try:
                result = func(*args, **kwargs)
            except Exception as e:
                duration = time.perf_counter() - start_time
                logger.error(f"❌ 执行失败: {func.__qualname__}, 耗时: {duration:.2f}秒, 错误: {e}")
                raise
            duration = time.perf_counter() - start_time
            logger.log(level, f"✅ 执行完成: {func.__qualname__}, 耗时: {duration:.2f}秒")
            return result

        return wrapper
    return decorator
