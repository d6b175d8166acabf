"""
命令行接口测试
"""

import csv
import json
import logging
import os
from pathlib import Path

import pytest

from adiax.cli import EXIT_INVALID, EXIT_NUMERICAL, EXIT_OK, main
from adiax.log import LOG_CONFIG_ENV, LOG_PROFILE_ENV, get_logger, reset_logging

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


def run_dir(outdir, command):
    """<outdir>/<command>/ 下唯一的运行目录"""
    root = os.path.join(outdir, command)
    (name,) = os.listdir(root)
    return os.path.join(root, name)


def read_summary(directory):
    with open(os.path.join(directory, "summary.json"), encoding="utf-8") as f:
        return json.load(f)


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


def write_config(tmp_path, config):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config), encoding="utf-8")
    return str(path)


def test_regimes_table(outdir, capsys):
    code = main(["regimes", "--config", str(CONFIG_DIR / "regimes.json"), "--outdir", outdir])

    assert code == EXIT_OK
    assert "[OK]" in capsys.readouterr().out
    directory = run_dir(outdir, "regimes")
    assert len(os.path.basename(directory)) == 16
    rows = read_rows(os.path.join(directory, "regimes.csv"))
    assert [row["regime"] for row in rows] == ["ShortWave", "MediumWave", "LongWave", "UltraShortWave"]
    summary = read_summary(directory)
    assert summary["error"] == "ok"
    assert summary["command"] == "regimes"


def test_same_config_same_directory(outdir):
    config = str(CONFIG_DIR / "regimes.json")
    main(["regimes", "--config", config, "--outdir", outdir])
    first = run_dir(outdir, "regimes")
    main(["regimes", "--config", config, "--outdir", outdir])

    assert run_dir(outdir, "regimes") == first


def test_harmonic_bound_states(outdir):
    code = main(["bound-states", "--config", str(CONFIG_DIR / "harmonic_well.json"), "--outdir", outdir])

    assert code == EXIT_OK
    directory = run_dir(outdir, "bound-states")
    levels = read_rows(os.path.join(directory, "bohr_sommerfeld.csv"))
    assert [int(row["n"]) for row in levels] == [0, 1, 2, 3]
    for row in levels:
        assert float(row["E"]) == pytest.approx(0.1 * (int(row["n"]) + 0.5), rel=1e-8)
    direct = read_rows(os.path.join(directory, "direct.csv"))
    for row in direct:
        assert float(row["E"]) == pytest.approx(0.1 * (int(row["n"]) + 0.5), rel=1e-3)


def test_invalid_config_exit_code(tmp_path, outdir, capsys):
    path = write_config(tmp_path, {"problem": "effective", "mu": 2.0, "regimes": {"h_values": [0.1]}})

    assert main(["regimes", "--config", path, "--outdir", outdir]) == EXIT_INVALID
    assert "[ERROR]" in capsys.readouterr().out
    assert not os.path.exists(os.path.join(outdir, "regimes"))


def test_missing_config_file(tmp_path, outdir):
    assert main(["regimes", "--config", str(tmp_path / "absent.json"), "--outdir", outdir]) == EXIT_INVALID


def test_caustic_exit_code(outdir, capsys):
    code = main(["propagate", "--config", str(CONFIG_DIR / "focusing_packet.json"), "--outdir", outdir])

    assert code == EXIT_NUMERICAL
    assert "CausticEncountered" in capsys.readouterr().out
    directory = run_dir(outdir, "propagate")
    assert os.listdir(directory) == ["summary.json"]
    summary = read_summary(directory)
    assert summary["error"] == "CausticEncountered"
    assert summary["message"]


def test_create_config(tmp_path, outdir, capsys):
    path = str(tmp_path / "regimes.json")

    assert main(["create-config", "--preset", "regimes", "-o", path]) == EXIT_OK
    assert "[TIP]" in capsys.readouterr().out
    assert main(["regimes", "--config", path, "--outdir", outdir]) == EXIT_OK


def test_no_command_prints_help(capsys):
    assert main([]) == 1
    assert "adiax" in capsys.readouterr().out


def test_log_config_from_environment(outdir, tmp_path, monkeypatch):
    """ADIAX_LOG_CONFIG 指向的JSON配置在启动时生效，运行摘要写入日志文件"""
    log_dir = tmp_path / "logs"
    log_config = tmp_path / "logging.json"
    log_config.write_text(json.dumps({"logging": {"log_level": "INFO", "enable_file": True,
                                                  "log_dir": str(log_dir)}}), encoding="utf-8")
    monkeypatch.setenv(LOG_CONFIG_ENV, str(log_config))
    reset_logging()

    code = main(["regimes", "--config", str(CONFIG_DIR / "regimes.json"), "--outdir", outdir])

    assert code == EXIT_OK
    for handler in get_logger().handlers:
        handler.flush()
    (log_path,) = [p for p in log_dir.iterdir() if not p.name.endswith("_error.log")]
    assert "run_summary" in log_path.read_text(encoding="utf-8")


def test_log_profile_option(outdir, monkeypatch):
    monkeypatch.delenv(LOG_CONFIG_ENV, raising=False)
    reset_logging()

    code = main(["regimes", "--config", str(CONFIG_DIR / "regimes.json"), "--outdir", outdir,
                 "--log-profile", "quiet"])

    assert code == EXIT_OK
    assert get_logger().level == logging.WARNING


@pytest.mark.parametrize("variable, value", [
    (LOG_CONFIG_ENV, "no_such_logging.json"),
    (LOG_PROFILE_ENV, "staging"),
])
def test_invalid_logging_setup(outdir, monkeypatch, capsys, variable, value):
    monkeypatch.delenv(LOG_CONFIG_ENV, raising=False)
    monkeypatch.setenv(variable, value)

    code = main(["regimes", "--config", str(CONFIG_DIR / "regimes.json"), "--outdir", outdir])

    assert code == EXIT_INVALID
    assert "日志配置无效" in capsys.readouterr().out
    assert not os.path.exists(outdir)
