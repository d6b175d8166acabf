"""
日志系统测试
"""

import json
import logging

import pytest

from adiax.log import (
    LOG_CONFIG_ENV,
    LOG_PROFILE_ENV,
    LogConfig,
    LogProfile,
    create_logger_with_context,
    create_structured_logger,
    create_timed_logger,
    get_logger,
    log_execution_time,
    reset_logging,
    resolve_log_config,
    setup_logging,
    setup_run_logging,
)


@pytest.fixture
def log_file(tmp_path):
    """DEBUG 级别、写入临时文件的日志系统"""
    path = tmp_path / "logs" / "run.log"
    reset_logging()
    setup_logging(log_level="DEBUG", log_file=str(path))
    yield path
    reset_logging()


def read_log(path):
    for handler in get_logger().handlers:
        handler.flush()
    return path.read_text(encoding="utf-8")


def test_singleton_updates_level():
    first = setup_logging(log_level="INFO")
    second = setup_logging(log_level="ERROR")

    assert first is second
    assert second.level == logging.ERROR
    assert second.name == "adiax"


def test_context_appended(log_file):
    create_logger_with_context({'component': 'transverse', 'nu': 2}).info("能级支追踪完成")
    create_logger_with_context({}).warning("间隙过小")

    text = read_log(log_file)
    assert "能级支追踪完成 [component=transverse, nu=2]" in text
    assert text.rstrip().endswith("间隙过小")


def test_error_log_written_separately(log_file):
    create_logger_with_context({}).error("求解失败")

    error_file = log_file.with_name("run_error.log")
    assert "求解失败" in read_log(error_file)


def test_timed_logger(log_file):
    logger = create_timed_logger({'component': 'reference2d'})
    with logger.time_context("crank_nicolson"):
        pass

    assert "crank_nicolson" in logger.elapsed
    assert logger.end_timer("missing") is None
    assert "计时结束: crank_nicolson" in read_log(log_file)


def test_structured_event(log_file):
    create_structured_logger({'component': 'cli'}).log_event('run_summary', {'error': 'ok', 'wall_time': 0.5})

    assert '事件: run_summary -> {"error":"ok","wall_time":0.5}' in read_log(log_file)


def test_execution_time_decorator(log_file):
    @log_execution_time()
    def solve(x):
        return 2 * x

    @log_execution_time()
    def diverge():
        raise RuntimeError("不收敛")

    assert solve(3) == 6
    with pytest.raises(RuntimeError):
        diverge()
    text = read_log(log_file)
    assert "执行完成" in text and "solve" in text
    assert "执行失败" in text and "不收敛" in text


def test_json_file_format(tmp_path):
    config = LogConfig.from_dict({'log_level': 'INFO', 'enable_json': True, 'separate_error_log': False})
    path = tmp_path / "run.jsonl"
    reset_logging()
    setup_logging(config=config, log_file=str(path))
    create_logger_with_context({'component': 'bloch'}).info("能带计算完成")

    entries = [json.loads(line) for line in read_log(path).splitlines()]
    assert entries[-1]['message'] == "能带计算完成 [component=bloch]"
    assert entries[-1]['levelname'] == "INFO"


def test_config_validation(tmp_path):
    with pytest.raises(ValueError):
        LogConfig.from_dict({'log_level': 'VERBOSE'})
    with pytest.raises(ValueError):
        LogProfile("staging").get_config()

    path = tmp_path / "logging.json"
    path.write_text(json.dumps({'logging': {'log_level': 'WARNING', 'backup_count': 2}}), encoding="utf-8")
    loaded = LogConfig.from_json_file(str(path))
    assert loaded.log_level == "WARNING"
    assert loaded.backup_count == 2

    path.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(ValueError):
        LogConfig.from_json_file(str(path))


@pytest.mark.parametrize("name, level, to_file", [
    ("interactive", "INFO", False),
    ("debug", "DEBUG", False),
    ("quiet", "WARNING", False),
    ("batch", "INFO", True),
])
def test_profiles(name, level, to_file):
    config = LogProfile(name).get_config()

    assert config.log_level == level
    assert config.enable_file is to_file
    assert config.enable_json is to_file


def test_resolve_order(tmp_path):
    """配置文件优先于预设，显式参数优先于环境变量"""
    path = tmp_path / "logging.json"
    path.write_text(json.dumps({'log_level': 'ERROR'}), encoding="utf-8")

    assert resolve_log_config(environ={}).log_level == "INFO"
    assert resolve_log_config(environ={LOG_PROFILE_ENV: "debug"}).log_level == "DEBUG"
    assert resolve_log_config(profile="quiet", environ={LOG_PROFILE_ENV: "debug"}).log_level == "WARNING"
    env = {LOG_CONFIG_ENV: str(path), LOG_PROFILE_ENV: "debug"}
    assert resolve_log_config(environ=env).log_level == "ERROR"
    with pytest.raises(FileNotFoundError):
        resolve_log_config(config_file=str(tmp_path / "missing.json"), environ={})


def test_run_logging_level_override(tmp_path):
    path = tmp_path / "logs" / "run.log"
    reset_logging()
    logger = setup_run_logging(log_level="DEBUG", log_file=str(path), profile="quiet", environ={})
    create_logger_with_context({'component': 'reduction'}).debug("有效势已采样")

    assert logger.level == logging.DEBUG
    assert "有效势已采样 [component=reduction]" in read_log(path)
