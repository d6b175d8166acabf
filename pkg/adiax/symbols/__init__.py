"""
符号演算模块

μ展开的算子值符号、截断复合与约化恒等式的逐阶残差。
"""

from .calculus import (
    FIELD,
    OPERATOR,
    P_SAMPLES,
    SCALAR,
    MuSymbol,
    PSymbol,
    add,
    apply_tridiagonal,
    compose,
    multiply,
    scale,
)
from .residual import ResidualReport, fit_slope, reduction_residual

__all__ = [
    'FIELD', 'OPERATOR', 'SCALAR', 'P_SAMPLES',
    'MuSymbol', 'PSymbol', 'ResidualReport',
    'add', 'apply_tridiagonal', 'compose', 'multiply', 'scale',
    'fit_slope', 'reduction_residual',
]
