"""工具函数

提供文件读写、计时、一维均匀网格与求积等通用辅助功能。
"""

import csv
import hashlib
import json
import os
from dataclasses import dataclass
from datetime import datetime
from functools import cached_property, lru_cache
from typing import Any, Dict, Iterable, List, Sequence, Tuple

import numpy as np

from .exceptions import AdiaxError

# CSV中浮点数按17位有效数字输出，保证往返无损
FLOAT_FORMAT = "%.17g"


def ensure_dir(directory: str) -> str:
    """确保目录存在

    Args:
        directory: 目录路径

    Returns:
        目录路径
    """
    if directory and not os.path.exists(directory):
        os.makedirs(directory, exist_ok=True)
    return directory


def save_json(data: Any, file_path: str, ensure_ascii: bool = False, indent: int = 2):
    """保存JSON数据到文件"""
    ensure_dir(os.path.dirname(file_path))
    with open(file_path, 'w', encoding='utf-8') as f:
        json.dump(data, f, ensure_ascii=ensure_ascii, indent=indent, default=_json_default)


def load_json(file_path: str) -> Any:
    """从文件加载JSON数据"""
    with open(file_path, 'r', encoding='utf-8') as f:
        return json.load(f)


def _json_default(value):
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, complex):
        return [value.real, value.imag]
    raise TypeError(f"无法序列化类型: {type(value).__name__}")


def format_cell(value: Any) -> str:
    """将单元格格式化为CSV文本（浮点数17位有效数字）"""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return FLOAT_FORMAT % float(value)
    if value is None:
        return ""
    return str(value)


def write_csv(file_path: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """写出单表头CSV文件

    Args:
        file_path: 输出路径
        header: 列名
        rows: 行数据

    Returns:
        文件路径
    """
    ensure_dir(os.path.dirname(file_path))
    with open(file_path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(list(header))
        for row in rows:
            if len(row) != len(header):
                raise AdiaxError(f"CSV行宽 {len(row)} 与表头 {len(header)} 不一致", "CSV_SHAPE_ERROR")
            writer.writerow([format_cell(value) for value in row])
    return file_path


def config_hash(config: Dict[str, Any], length: int = 16) -> str:
    """配置的规范化SHA-256摘要（键排序、紧凑分隔符）"""
    canonical = json.dumps(config, sort_keys=True, separators=(',', ':'), ensure_ascii=True)
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()[:length]


class Timer:
    """简单的计时器类"""

    def __init__(self):
        self.start_time = None
        self.end_time = None

    def start(self):
        self.start_time = datetime.now()
        self.end_time = None

    def stop(self):
        self.end_time = datetime.now()

    def elapsed(self) -> float:
        """获取经过的时间（秒）"""
        if self.start_time is None:
            return 0.0
        end = self.end_time or datetime.now()
        return (end - self.start_time).total_seconds()

    def __enter__(self):
        self.start()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.stop()


@dataclass(frozen=True)
class UniformGrid:
    """闭区间 [start, stop] 上的 n 节点均匀网格"""

    start: float
    stop: float
    n: int

    def __post_init__(self):
        if self.n < 2 or not self.stop > self.start:
            raise AdiaxError(f"无效网格: [{self.start}, {self.stop}], n={self.n}", "GRID_ERROR")

    @cached_property
    def points(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.n)

    @property
    def step(self) -> float:
        return (self.stop - self.start) / (self.n - 1)

    def __len__(self) -> int:
        return self.n

    def matches(self, other: 'UniformGrid', rtol: float = 1e-12) -> bool:
        return (self.n == other.n
                and np.isclose(self.start, other.start, rtol=rtol, atol=rtol)
                and np.isclose(self.stop, other.stop, rtol=rtol, atol=rtol))

    def refined(self, factor: int = 2) -> 'UniformGrid':
        """步长缩小为 1/factor 的嵌套网格"""
        return UniformGrid(self.start, self.stop, (self.n - 1) * factor + 1)

    def index_of(self, x: float) -> int:
        """返回与 x 重合的节点下标；x 不在节点上时报错"""
        i = int(round((x - self.start) / self.step))
        if i < 0 or i >= self.n or abs(self.points[i] - x) > 1e-9 * max(1.0, abs(x)):
            raise AdiaxError(f"x = {x} 不是网格节点", "GRID_ERROR")
        return i

    @classmethod
    def from_points(cls, points: Sequence[float]) -> 'UniformGrid':
        pts = np.asarray(points, dtype=float)
        grid = cls(float(pts[0]), float(pts[-1]), len(pts))
        if not np.allclose(pts, grid.points, rtol=0, atol=1e-10 * max(1.0, np.abs(pts).max())):
            raise AdiaxError("节点不是均匀分布的", "GRID_ERROR")
        return grid


def trapezoid_weights(n: int, step: float, periodic: bool = False) -> np.ndarray:
    """梯形求积权重；周期网格（不含右端点）上为等权"""
    weights = np.full(n, step)
    if not periodic:
        weights[0] = weights[-1] = 0.5 * step
    return weights


@lru_cache(maxsize=None)
def stencil_weights(offsets: Tuple[int, ...], k: int) -> np.ndarray:
    """任意节点偏移上的k阶导数差分权重（Fornberg递推，单位步长）"""
    n = len(offsets)
    c = np.zeros((n, k + 1))
    c[0, 0] = 1.0
    c1 = 1.0
    c4 = float(offsets[0])
    for i in range(1, n):
        mn = min(i, k)
        c2 = 1.0
        c5 = c4
        c4 = float(offsets[i])
        for j in range(i):
            c3 = float(offsets[i] - offsets[j])
            c2 *= c3
            if j == i - 1:
                for m in range(mn, 0, -1):
                    c[i, m] = c1 * (m * c[i - 1, m - 1] - c5 * c[i - 1, m]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for m in range(mn, 0, -1):
                c[j, m] = (c4 * c[j, m] - m * c[j, m - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    weights = c[:, k].copy()
    weights.flags.writeable = False
    return weights


def finite_difference(values: np.ndarray, step: float, k: int = 1, order: int = 8,
                      axis: int = 0) -> np.ndarray:
    """高阶k阶导数

    内部用宽度为 order+k（取奇数）的中心模板，两端把同宽模板移入网格内作为单侧闭合，
    k阶导数直接由对应权重得到而不是重复一阶差分。

    Args:
        values: 均匀网格上的采样值
        step: 网格步长
        k: 导数阶数
        order: 中心模板的精度阶
        axis: 求导所沿的轴

    Returns:
        与 values 同形状的导数数组
    """
    values = np.moveaxis(np.asarray(values), axis, 0)
    n = values.shape[0]
    if k == 0:
        return np.moveaxis(values.copy(), 0, axis)
    if n <= k:
        raise AdiaxError(f"{k}阶差分至少需要 {k + 1} 个节点，实际 {n} 个", "GRID_ERROR")
    width = min(order + k + (order + k + 1) % 2, n)
    half = width // 2
    out = np.empty(values.shape, dtype=np.result_type(values, float))

    centre = stencil_weights(tuple(range(-half, width - half)), k)
    count = n - width + 1
    out[half:half + count] = sum(w * values[j:j + count] for j, w in enumerate(centre))
    for i in range(half):
        out[i] = np.tensordot(stencil_weights(tuple(range(-i, width - i)), k), values[:width], axes=(0, 0))
    for i in range(half + count, n):
        start = n - width
        shift = i - start
        out[i] = np.tensordot(stencil_weights(tuple(range(-shift, width - shift)), k), values[start:],
                              axes=(0, 0))
    return np.moveaxis(out / step ** k, 0, axis)


def ensure_finite(values: np.ndarray, what: str, error_cls=AdiaxError) -> np.ndarray:
    """检查数组全部为有限值"""
    values = np.asarray(values)
    if not np.all(np.isfinite(values)):
        raise error_cls(f"{what} 含有非有限值")
    return values


def as_list(values: Any) -> List[float]:
    return [float(v) for v in np.atleast_1d(values)]
