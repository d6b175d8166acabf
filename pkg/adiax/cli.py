#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
adiax 命令行工具

adiax <command> --config <file.json> [--outdir DIR] [--threads N]

退出码：0 成功；2 配置无效或验收未通过；3 数值错误；1 其他错误。
日志：--log-config / ADIAX_LOG_CONFIG 指定JSON配置，否则 --log-profile / ADIAX_LOG_PROFILE 选预设。
"""

import argparse
import sys
from typing import List, Optional

from .exceptions import ConfigValidationError, NumericalError
from .factory import ProcessorFactory, TemplateFactory
from .log import LogProfile, create_structured_logger, setup_run_logging
from .templates import list_presets
from .validators import COMMANDS

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2
EXIT_NUMERICAL = 3

COMMAND_HELP = {
    "bands": "横向能级支或Bloch能带 → bands.csv",
    "reduce": "有效哈密顿量、L1(x,0)、几何势 → reduce.csv",
    "bound-states": "Bohr–Sommerfeld 谱级数与直接本征值",
    "scatter": "能量扫描的散射渐近 → scatter.csv",
    "propagate": "WKB 与/或 Crank–Nicolson 的 |ψ|² 快照",
    "validate": "运行验收检查 → acceptance.json",
    "regimes": "μ–h 区间分类表 → regimes.csv",
}

# validate 未给配置时使用的最小配置
DEFAULT_VALIDATE_CONFIG = {"problem": "effective"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="adiax", description="算子分离变量法：绝热约化与半经典求解")
    subparsers = parser.add_subparsers(dest='command', help='Commands')

    for command in COMMANDS:
        sub = subparsers.add_parser(command, help=COMMAND_HELP[command])
        sub.add_argument('-c', '--config', required=command != 'validate', help='JSON run config')
        sub.add_argument('--outdir', help='Output root directory (overrides output_dir)')
        sub.add_argument('--threads', type=int, default=1, help='Library worker threads')
        sub.add_argument('--log-level', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                         help='Override the level of the selected logging setup')
        sub.add_argument('--log-file', help='Also write logs to this file')
        sub.add_argument('--log-config', help='JSON logging config (default: $ADIAX_LOG_CONFIG)')
        sub.add_argument('--log-profile', choices=sorted(LogProfile.PRESETS),
                         help='Logging preset (default: $ADIAX_LOG_PROFILE or interactive)')

    config_parser = subparsers.add_parser('create-config', help='Render a preset as a run config')
    config_parser.add_argument('--preset', default='harmonic_well', choices=list_presets(), help='Preset name')
    config_parser.add_argument('-o', '--output', default='config.json', help='Output config file path')
    return parser


def create_config(preset: str, output_path: str) -> int:
    """创建示例配置文件"""
    try:
        path = TemplateFactory.create_config(preset, output_path)
    except ConfigValidationError as e:
        print(f"[ERROR] {e}")
        return EXIT_INVALID
    print(f"[OK] 配置文件已创建: {path}")
    print(f"[TIP] 运行: adiax <command> --config {path}")
    return EXIT_OK


def run_command(args) -> int:
    """运行一个计算命令"""
    try:
        if args.config is None:
            processor = ProcessorFactory.create_from_config(args.command, dict(DEFAULT_VALIDATE_CONFIG),
                                                            outdir=args.outdir, threads=args.threads)
        else:
            processor = ProcessorFactory.create_processor(args.command, args.config, outdir=args.outdir,
                                                          threads=args.threads)
    except ConfigValidationError as e:
        print(f"[ERROR] 配置无效: {e}")
        for error in e.errors:
            print(f"  - {error}")
        return EXIT_INVALID

    events = create_structured_logger({'component': 'cli', 'command': args.command})
    try:
        result = processor.run()
    except ConfigValidationError as e:
        print(f"[ERROR] 配置无效: {e}")
        return EXIT_INVALID
    except NumericalError as e:
        print(f"[ERROR] {type(e).__name__}: {e}")
        print(f"[TIP] 摘要: {processor.run_dir}")
        return EXIT_NUMERICAL
    except Exception as e:
        print(f"[ERROR] {type(e).__name__}: {e}")
        return EXIT_FAILURE

    events.log_event('run_summary', result.summary)
    if not result.passed:
        print(f"[ERROR] {result.summary.get('message', '验收未通过')}")
        print(f"[TIP] 报告: {result.run_dir}")
        return EXIT_INVALID
    print(f"[OK] {args.command} 完成: {result.run_dir}")
    for path in result.files:
        print(f"  {path}")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """主函数"""
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command is None:
        parser.print_help()
        return EXIT_FAILURE
    if args.command == 'create-config':
        return create_config(args.preset, args.output)

    try:
        setup_run_logging(log_level=args.log_level, log_file=args.log_file, config_file=args.log_config,
                          profile=args.log_profile)
    except (OSError, ValueError) as e:
        print(f"[ERROR] 日志配置无效: {e}")
        return EXIT_INVALID
    return run_command(args)


if __name__ == '__main__':
    sys.exit(main())
