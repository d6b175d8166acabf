"""
命令处理器基类

每个命令对应一个处理器：在 <outdir>/<command>/<配置哈希>/ 下写出CSV与 summary.json。
失败时删除已写出的CSV，只保留带错误名的摘要。
"""

import os
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..factory import ModelFactory
from ..log import create_logger_with_context, log_execution_time
from ..semiclassics import HamiltonianField
from ..transverse import ConfinementModel, TermBranch, track_branches
from ..utils import Timer, UniformGrid, config_hash, ensure_dir, save_json, write_csv

SUMMARY_FILE = "summary.json"


def potential_field(potential) -> HamiltonianField:
    """H = p²/2 + v(x)，v 为可调用对象或 (x 节点, 采样)"""
    if callable(potential):
        return HamiltonianField.from_potential(potential)
    return HamiltonianField.from_samples(*potential)


@dataclass
class RunResult:
    """一次运行的结果"""

    command: str
    run_dir: str
    files: List[str] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.summary.get('passed', True))


@dataclass(frozen=True, eq=False)
class WaveguideSetup:
    model: ConfinementModel
    x_grid: UniformGrid
    y_grid: UniformGrid
    branches: List[TermBranch]


class BaseProcessor(ABC):
    """命令处理器基类"""

    command = ""

    def __init__(self, config: Dict[str, Any], output_root: str = "results", threads: int = 1):
        """初始化处理器

        Args:
            config: 已验证的运行配置
            output_root: 输出根目录
            threads: 库内并行线程数
        """
        self.config = config
        self.threads = max(1, int(threads))
        self.config_hash = config_hash(config)
        self.run_dir = os.path.join(output_root, self.command, self.config_hash)
        self.files: List[str] = []
        self._waveguide: Optional[WaveguideSetup] = None

        self.logger = create_logger_with_context({
            'component': self.__class__.__name__,
            'command': self.command,
            'config': self.config_hash,
        })

        # 统计信息
        self.stats = {
            'tables_written': 0,
            'rows_written': 0,
        }

    @abstractmethod
    def execute(self) -> Dict[str, Any]:
        """执行命令，返回写入摘要的附加字段"""

    @log_execution_time()
    def run(self) -> RunResult:
        """执行并写出摘要；异常在清理输出后原样抛出"""
        ensure_dir(self.run_dir)
        self.logger.info(f"🔄 开始运行 {self.command}，输出目录 {self.run_dir}")
        summary = {'command': self.command, 'config_hash': self.config_hash}
        timer = Timer()
        timer.start()
        try:
            summary.update(self.execute())
        except Exception as e:
            timer.stop()
            self._remove_outputs()
            summary.update({'wall_time': timer.elapsed(), 'error': type(e).__name__, 'message': str(e)})
            save_json(summary, os.path.join(self.run_dir, SUMMARY_FILE))
            self.logger.error(f"❌ {self.command} 失败: {type(e).__name__}: {e}")
            raise
        timer.stop()
        summary.setdefault('error', 'ok')
        summary['wall_time'] = timer.elapsed()
        summary['stats'] = dict(self.stats)
        save_json(summary, os.path.join(self.run_dir, SUMMARY_FILE))
        self.logger.info(f"✅ {self.command} 完成: {len(self.files)} 个文件, 用时 {timer.elapsed():.2f}s")
        return RunResult(command=self.command, run_dir=self.run_dir, files=list(self.files), summary=summary)

    def write_table(self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
        rows = list(rows)
        path = write_csv(os.path.join(self.run_dir, name), header, rows)
        self.files.append(path)
        self.stats['tables_written'] += 1
        self.stats['rows_written'] += len(rows)
        self.logger.debug(f"📊 写出 {name}: {len(rows)} 行")
        return path

    def _remove_outputs(self):
        for path in self.files:
            if os.path.exists(path):
                os.remove(path)
        self.files = []

    # ---- 共用的模型组装 ----

    def waveguide(self, K: int) -> WaveguideSetup:
        """横向支追踪（同一处理器内缓存，K 取历次请求的最大值）"""
        if self._waveguide is not None and len(self._waveguide.branches) >= K:
            return self._waveguide
        section = self.config['waveguide']
        model = ModelFactory.confinement(section['confinement'])
        x_grid = ModelFactory.x_grid(self.config)
        y_grid = ModelFactory.y_grid(self.config, model, x_grid, K)
        branches = track_branches(model, x_grid, y_grid, K, gap_tol=section.get('gap_tol', 1e-6),
                                  max_workers=self.threads)
        self._waveguide = WaveguideSetup(model, x_grid, y_grid, branches)
        return self._waveguide

    def effective_potential(self, nu: int) -> Tuple[Any, UniformGrid, float]:
        """一维有效势及其半经典参数

        waveguide: (x 节点, v_ext + ε^ν) 采样，参数为 μ；effective: 配置中的势函数，参数为 h。
        """
        if self.config['problem'] == 'effective':
            return ModelFactory.effective_potential(self.config), ModelFactory.x_grid(self.config), \
                float(self.config['h'])
        setup = self.waveguide(nu + 1)
        xs = setup.x_grid.points
        v_ext = np.asarray(ModelFactory.external_potential(self.config)(xs), dtype=float)
        return (xs, v_ext + setup.branches[nu - 1].eps), setup.x_grid, float(self.config['mu'])
