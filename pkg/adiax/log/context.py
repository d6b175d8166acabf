"""
上下文日志器

为数值流水线的各阶段提供带上下文（组件、支数ν、区间等）的日志功能。
"""

import json
import logging
import time
from datetime import datetime
from typing import Any, Dict, Optional


class ContextLogger:
    """上下文日志器，在消息末尾附加 ``[k=v, ...]``"""

    def __init__(self, logger: logging.Logger, context: Dict[str, Any]):
        self.logger = logger
        self.context = dict(context)

    def debug(self, message: str, extra: Optional[Dict[str, Any]] = None):
        self._log(logging.DEBUG, message, extra)

    def info(self, message: str, extra: Optional[Dict[str, Any]] = None):
        self._log(logging.INFO, message, extra)

    def warning(self, message: str, extra: Optional[Dict[str, Any]] = None):
        self._log(logging.WARNING, message, extra)

    def error(self, message: str, extra: Optional[Dict[str, Any]] = None):
        self._log(logging.ERROR, message, extra)

    def _format(self, message: str) -> str:
        context_str = ", ".join(f"{k}={v}" for k, v in self.context.items())
        return f"{message} [{context_str}]" if context_str else message

    def _log(self, level: int, message: str, extra: Optional[Dict[str, Any]] = None):
        if self.logger.isEnabledFor(level):
            self.logger.log(level, self._format(message), extra=extra or {})


class TimedContextLogger(ContextLogger):
    """带时间统计的上下文日志器"""

    def __init__(self, logger: logging.Logger, context: Dict[str, Any]):
        super().__init__(logger, context)
        self.timers: Dict[str, float] = {}
        self.elapsed: Dict[str, float] = {}

    def start_timer(self, timer_name: str):
        """开始计时"""
        self.timers[timer_name] = time.perf_counter()
        self.debug(f"⏱️ 开始计时: {timer_name}")

    def end_timer(self, timer_name: str) -> Optional[float]:
        """结束计时，返回耗时（秒）"""
        if timer_name not in self.timers:
            self.warning(f"计时器 {timer_name} 不存在")
            return None
        elapsed = time.perf_counter() - self.timers.pop(timer_name)
        self.elapsed[timer_name] = elapsed
        self.info(f"⏱️ 计时结束: {timer_name}, 耗时: {elapsed:.3f}秒")
        return elapsed

    def time_context(self, timer_name: str) -> 'TimerContext':
        """时间上下文管理器"""
        return TimerContext(self, timer_name)


class TimerContext:
    """计时器上下文管理器"""

    def __init__(self, timed_logger: TimedContextLogger, timer_name: str):
        self.timed_logger = timed_logger
        self.timer_name = timer_name

    def __enter__(self):
        self.timed_logger.start_timer(self.timer_name)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.timed_logger.end_timer(self.timer_name)
        return False


class StructuredLogger(ContextLogger):
    """结构化日志器：事件 + JSON数据"""

    def log_event(self, event_name: str, event_data: Dict[str, Any], level: int = logging.INFO):
        """记录结构化事件"""
        structured = {
            'event': event_name,
            'timestamp': datetime.now().isoformat(),
            'data': event_data
        }
        data_str = json.dumps(event_data, ensure_ascii=False, separators=(',', ':'), default=str)
        self._log(level, f"事件: {event_name} -> {data_str}", extra={'structured': structured})
