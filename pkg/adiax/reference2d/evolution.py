"""
Crank–Nicolson时间演化

iμΨ_t = ĤΨ 离散为 (I + iΔt/(2μ)Ĥ)Ψ^{n+1} = (I − iΔt/(2μ)Ĥ)Ψ^n。
"""

from dataclasses import dataclass
from typing import List, Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import bicgstab, splu

from ..exceptions import ReferenceSolverError
from ..log import create_timed_logger
from .grid import Wavefunction2D
from .operator import Operator2D

SOLVERS = ('lu', 'bicgstab')
ITERATIVE_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class Evolution2D:
    """演化快照

    Attributes:
        times: 快照时刻
        snapshots: 各时刻的波函数
        norm_drift: 所有步中 |‖Ψ‖ − ‖Ψ₀‖| 的最大值
    """

    times: np.ndarray
    snapshots: List[Wavefunction2D]
    norm_drift: float

    @property
    def final(self) -> Wavefunction2D:
        return self.snapshots[-1]


class _CrankNicolson:
    def __init__(self, op: Operator2D, mu: float, dt: float, solver: str):
        if solver not in SOLVERS:
            raise ReferenceSolverError(f"未知的线性求解器: {solver}，可选 {SOLVERS}", "UNKNOWN_SOLVER")
        if not mu > 0 or dt == 0:
            raise ReferenceSolverError(f"无效的 μ = {mu} 或 Δt = {dt}", "INVALID_STEP")
        factor = 0.5j * dt / mu
        identity = sp.identity(op.dim, dtype=complex, format='csc')
        self.implicit = (identity + factor * op.matrix).tocsc()
        self.explicit = (identity - factor * op.matrix).tocsr()
        self.solver = solver
        self.lu = splu(self.implicit) if solver == 'lu' else None

    def step(self, vector: np.ndarray) -> np.ndarray:
        rhs = self.explicit @ vector
        if self.lu is not None:
            return self.lu.solve(rhs)
        result, info = bicgstab(self.implicit, rhs, x0=vector, rtol=ITERATIVE_RTOL, atol=0.0)
        if info != 0:
            raise ReferenceSolverError(f"BiCGSTAB 未收敛 (info = {info})", "LINEAR_SOLVE_FAILED", info=info)
        return result


def evolve_cn(psi0: Wavefunction2D, op: Operator2D, mu: float, dt: float, steps: int,
              save_every: Optional[int] = None, solver: str = 'lu') -> Evolution2D:
    """Crank–Nicolson演化

    Args:
        psi0: 初始波函数（边界值忽略）
        op: 二维算子
        mu: 绝热参数
        dt: 时间步长（可为负，用于时间反演）
        steps: 步数
        save_every: 每隔多少步保存一次快照；缺省只保存初末两帧
        solver: 'lu'（稀疏LU）或 'bicgstab'（相对残差 1e-10）

    Returns:
        Evolution2D
    """
    if steps < 0:
        raise ReferenceSolverError(f"步数必须非负，实际为 {steps}", "INVALID_STEP")
    logger = create_timed_logger({'component': 'reference2d', 'operation': 'evolve_cn'})
    grid = op.grid
    stepper = _CrankNicolson(op, mu, dt, solver)
    cell = grid.x_grid.step * grid.y_grid.step

    vector = grid.to_interior(psi0.values).astype(complex)
    norm0 = np.sqrt(cell * np.vdot(vector, vector).real)
    times, snapshots, drift = [0.0], [Wavefunction2D(grid, grid.from_interior(vector))], 0.0

    with logger.time_context(f"Crank–Nicolson {steps} 步 (Δt = {dt}, {solver})"):
        for n in range(1, steps + 1):
            vector = stepper.step(vector)
            drift = max(drift, abs(np.sqrt(cell * np.vdot(vector, vector).real) - norm0))
            if (save_every and n % save_every == 0) or n == steps:
                times.append(n * dt)
                snapshots.append(Wavefunction2D(grid, grid.from_interior(vector)))

    if drift > 1e-9 * max(norm0, 1.0):
        logger.warning(f"⚠️ 范数漂移 {drift:.3e}")
    return Evolution2D(times=np.array(times), snapshots=snapshots, norm_drift=float(drift))


def time_reversal_defect(psi: Wavefunction2D, op: Operator2D, mu: float, dt: float, steps: int,
                         solver: str = 'lu') -> float:
    """先以 +Δt 演化 steps 步再以 −Δt 演化回来，返回 ‖Ψ_back − Ψ‖ / ‖Ψ‖"""
    forward = evolve_cn(psi, op, mu, dt, steps, solver=solver).final
    back = evolve_cn(forward, op, mu, -dt, steps, solver=solver).final
    reference = Wavefunction2D(psi.grid, psi.grid.from_interior(psi.grid.to_interior(psi.values)))
    diff = Wavefunction2D(psi.grid, back.values - reference.values)
    return diff.norm() / reference.norm()
