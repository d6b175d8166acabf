"""
命令处理器
每个 CLI 命令一个处理器，输出写入 <outdir>/<command>/<配置哈希>/。
"""

from .base import SUMMARY_FILE, BaseProcessor, RunResult, WaveguideSetup, potential_field
from .spectral import BandsProcessor, BoundStatesProcessor, ReduceProcessor, RegimesProcessor
from .dynamics import PropagateProcessor, ScatterProcessor, energy_values, packet_data
from .suite import REPORT_FILE, ValidateProcessor

PROCESSORS = {
    processor.command: processor
    for processor in (
        BandsProcessor,
        ReduceProcessor,
        BoundStatesProcessor,
        ScatterProcessor,
        PropagateProcessor,
        ValidateProcessor,
        RegimesProcessor,
    )
}

__all__ = [
    'SUMMARY_FILE', 'BaseProcessor', 'RunResult', 'WaveguideSetup', 'potential_field',
    'BandsProcessor', 'BoundStatesProcessor', 'ReduceProcessor', 'RegimesProcessor',
    'PropagateProcessor', 'ScatterProcessor', 'energy_values', 'packet_data',
    'REPORT_FILE', 'ValidateProcessor',
    'PROCESSORS',
]
