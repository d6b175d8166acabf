"""自定义异常类

定义了adiax包中使用的自定义异常类。

数值类异常的类名即为运行摘要(JSON)中记录的错误名称。
"""

from typing import Any, Dict, Optional


class AdiaxError(Exception):
    """adiax处理过程中的错误基类"""

    def __init__(self, message: str, error_code: str = None, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.error_code = error_code
        self.details = details or {}
        self.message = message

    def __str__(self):
        if self.error_code:
            return f"[{self.error_code}] {self.message}"
        return self.message


class ConfigValidationError(AdiaxError):
    """运行配置验证失败"""

    def __init__(self, message: str, errors: Optional[list] = None):
        super().__init__(message, "CONFIG_VALIDATION_ERROR", {"errors": errors or []})
        self.errors = errors or []


class NumericalError(AdiaxError):
    """数值计算错误（CLI退出码3）"""


# ---- symbols ----

class SymbolError(NumericalError):
    """符号演算错误：网格不一致、阶数超出可表示范围、系数类型不兼容"""

    def __init__(self, message: str, error_code: str = "SYMBOL_ERROR", **details):
        super().__init__(message, error_code, details)


# ---- transverse ----

class TransverseError(NumericalError):
    """横向本征问题错误"""

    def __init__(self, message: str, error_code: str = "TRANSVERSE_ERROR", **details):
        super().__init__(message, error_code, details)


class DegenerateTerm(NumericalError):
    """横向能级间隙低于阈值，一致分离假设不成立"""

    def __init__(self, message: str, x: float = None, level: int = None, gap: float = None):
        super().__init__(message, "DEGENERATE_TERM", {"x": x, "level": level, "gap": gap})
        self.x = x
        self.level = level
        self.gap = gap


class OverlapAmbiguity(NumericalError):
    """相邻x节点间本征向量匹配不唯一"""

    def __init__(self, message: str, x: float = None, overlaps: Any = None):
        super().__init__(message, "OVERLAP_AMBIGUITY", {"x": x, "overlaps": overlaps})


# ---- reduction ----

class ReductionError(NumericalError):
    """约化过程错误：网格不一致、缺少导数数据、结果非有限"""

    def __init__(self, message: str, error_code: str = "REDUCTION_ERROR", **details):
        super().__init__(message, error_code, details)


class SolvabilityError(ReductionError):
    """χ₁方程右端不满足可解性条件，或受约束系统奇异"""

    def __init__(self, message: str, residual: float = None):
        super().__init__(message, "SOLVABILITY_ERROR", residual=residual)
        self.residual = residual


class RegimeError(ReductionError):
    """(μ, h) 落在有效窗口之外，或与所选区间不匹配"""

    def __init__(self, message: str, mu: float = None, h: float = None):
        super().__init__(message, "REGIME_ERROR", mu=mu, h=h)


class EssentialAssemblyError(ReductionError):
    """本质哈密顿量组装失败"""

    def __init__(self, message: str, **details):
        super().__init__(message, "ESSENTIAL_ASSEMBLY_ERROR", **details)


class NonHermitianOperator(ReductionError):
    """组装得到的约化算子非厄米"""

    def __init__(self, message: str, defect: float = None):
        super().__init__(message, "NON_HERMITIAN_OPERATOR", defect=defect)


# ---- bloch ----

class BlochError(NumericalError):
    """Bloch约化错误"""

    def __init__(self, message: str, error_code: str = "BLOCH_ERROR", **details):
        super().__init__(message, error_code, details)


class TruncationError(BlochError):
    """平面波截断过小（末带灵敏度检查失败）"""

    def __init__(self, message: str, shift: float = None):
        super().__init__(message, "TRUNCATION_ERROR", shift=shift)


class StickingBands(BlochError):
    """能带粘连（间隙低于阈值）"""

    def __init__(self, message: str, gap: float = None, nu: int = None):
        super().__init__(message, "STICKING_BANDS", gap=gap, nu=nu)
        self.gap = gap


# ---- semiclassics ----

class TrajectoryError(NumericalError):
    """轨道积分失败（步长下溢等）"""

    def __init__(self, message: str, error_code: str = "TRAJECTORY_ERROR", **details):
        super().__init__(message, error_code, details)


class CausticEncountered(NumericalError):
    """轨道族Jacobian低于阈值，WKB表示失效"""

    def __init__(self, message: str, t: float = None, min_jacobian: float = None):
        super().__init__(message, "CAUSTIC_ENCOUNTERED", {"t": t, "min_jacobian": min_jacobian})
        self.min_jacobian = min_jacobian


class NoSolution(NumericalError):
    """势阱过浅，无法满足所要求的量子化条件"""

    def __init__(self, message: str, n: int = None):
        super().__init__(message, "NO_SOLUTION", {"n": n})


class MultiWell(NumericalError):
    """检测到多势阱（E − v_eff 的符号变化多于2次）"""

    def __init__(self, message: str, sign_changes: int = None):
        super().__init__(message, "MULTI_WELL", {"sign_changes": sign_changes})


class ScatteringError(NumericalError):
    """散射问题无传播通道或能量恰在势垒顶"""

    def __init__(self, message: str, energy: float = None):
        super().__init__(message, "SCATTERING_ERROR", {"energy": energy})


class NonUnimodularMonodromy(NumericalError):
    """输运单值矩阵特征值偏离单位圆"""

    def __init__(self, message: str, deviation: float = None):
        super().__init__(message, "NON_UNIMODULAR_MONODROMY", {"deviation": deviation})


class DimensionMismatch(NumericalError):
    """输运振幅与生成元维数不匹配"""

    def __init__(self, message: str, expected: int = None, actual: int = None):
        super().__init__(message, "DIMENSION_MISMATCH", {"expected": expected, "actual": actual})


# ---- reference2d ----

class ReferenceSolverError(NumericalError):
    """二维参考求解器错误：势非有限、特征求解未收敛、线性求解失败"""

    def __init__(self, message: str, error_code: str = "REFERENCE_SOLVER_ERROR", **details):
        super().__init__(message, error_code, details)
