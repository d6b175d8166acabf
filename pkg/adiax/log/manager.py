"""
日志管理器

提供进程级单例日志器（名称 ``adiax``）与JSON格式化器。
"""

import json
import logging
import logging.handlers
import os
import sys
import threading
from datetime import datetime
from typing import Optional

from .config import LogConfig

LOGGER_NAME = 'adiax'


class SingletonLogger:
    """单例日志管理器，确保全局只有一个日志实例"""

    _instance = None
    _lock = threading.Lock()

    def __new__(cls):
        if cls._instance is None:
            with cls._lock:
                if cls._instance is None:
                    instance = super().__new__(cls)
                    instance.logger = None
                    instance.config = None
                    instance.log_file_path = None
                    cls._instance = instance
        return cls._instance

    def setup(self, config: LogConfig, log_file: Optional[str] = None) -> logging.Logger:
        """设置日志系统；已初始化时只同步日志级别"""
        level = getattr(logging, config.log_level.upper())
        if self.logger is not None:
            if self.config.log_level != config.log_level:
                self._set_level(level)
                self.config.log_level = config.log_level
            return self.logger

        self.config = config
        self.logger = logging.getLogger(LOGGER_NAME)
        self.logger.setLevel(level)
        self.logger.propagate = False
        self.logger.handlers.clear()

        if config.enable_console:
            console_handler = logging.StreamHandler(sys.stdout)
            console_handler.setLevel(level)
            console_handler.setFormatter(logging.Formatter(config.console_format))
            self.logger.addHandler(console_handler)

        if config.enable_file or log_file is not None:
            if log_file is None:
                timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
                log_file = os.path.join(config.log_dir, f"adiax_{timestamp}.log")
            self.log_file_path = log_file
            directory = os.path.dirname(log_file)
            if directory:
                os.makedirs(directory, exist_ok=True)
            self.logger.addHandler(self._file_handler(log_file, logging.DEBUG))
            if config.separate_error_log:
                root, ext = os.path.splitext(log_file)
                self.logger.addHandler(self._file_handler(f"{root}_error{ext or '.log'}", logging.ERROR))
            self.logger.info(f"🔧 日志系统初始化完成, 日志文件: {os.path.abspath(log_file)}")

        return self.logger

    def _set_level(self, level: int):
        """文件处理器保持各自级别，其余随日志器同步"""
        self.logger.setLevel(level)
        for handler in self.logger.handlers:
            if not isinstance(handler, logging.handlers.RotatingFileHandler):
                handler.setLevel(level)

    def _file_handler(self, path: str, level: int) -> logging.Handler:
        handler = logging.handlers.RotatingFileHandler(
            path,
            maxBytes=self.config.max_file_size,
            backupCount=self.config.backup_count,
            encoding='utf-8'
        )
        handler.setLevel(level)
        if self.config.enable_json:
            handler.setFormatter(JsonFormatter(self.config.json_fields))
        else:
            handler.setFormatter(logging.Formatter(self.config.file_format))
        return handler

    def get_logger(self) -> Optional[logging.Logger]:
        """获取日志器实例"""
        return self.logger

    def reset(self):
        """重置日志管理器（主要用于测试）"""
        if self.logger:
            for handler in list(self.logger.handlers):
                handler.close()
            self.logger.handlers.clear()
        self.logger = None
        self.config = None
        self.log_file_path = None


class JsonFormatter(logging.Formatter):
    """每条记录输出一行JSON"""

    def __init__(self, fields):
        super().__init__()
        self.fields = tuple(fields)

    def format(self, record):
        record.asctime = self.formatTime(record)
        entry = {field: getattr(record, field, None) for field in self.fields}
        entry['message'] = record.getMessage()
        if record.exc_info:
            entry['exception'] = self.formatException(record.exc_info)
        return json.dumps(entry, ensure_ascii=False, default=str)
