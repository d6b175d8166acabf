"""
直波导的μ展开符号

为约化恒等式残差检验构造 H、χ、L 三个符号：
H = p²/2 − ½∂²_y + v(x, y) + v_ext(x)，χ = w^ν + μχ₁，L = H_eff + μL₁。
"""

from typing import Optional

import numpy as np

from ..symbols import FIELD, OPERATOR, SCALAR, MuSymbol, PSymbol
from ..transverse import ConfinementModel, TermBranch, transverse_operator
from ..utils import UniformGrid
from .corrections import Chi1Samples
from .effective import EffectiveHamiltonian, PotentialLike, sample_on_grid


def hamiltonian_symbol(model: ConfinementModel, x_grid: UniformGrid, y_grid: UniformGrid,
                       v_ext: PotentialLike = 0.0) -> MuSymbol:
    """算子值哈密顿符号（单阶，p 的二次多项式）"""
    shift = sample_on_grid(v_ext, x_grid)
    coeffs = np.zeros((3, x_grid.n, 3, y_grid.n))
    for i, x in enumerate(x_grid.points):
        op = transverse_operator(model, x, y_grid)
        bands = op.bands()
        bands[1, op.mask] += shift[i]
        coeffs[0, i] = bands
        coeffs[2, i, 1, op.mask] = 0.5
    return MuSymbol((PSymbol(coeffs, OPERATOR),), x_grid)


def chi_symbol(branch: TermBranch, chi1: Optional[Chi1Samples] = None, degree: int = 2) -> MuSymbol:
    """缠绕符号 χ₀ (+ μχ₁)；χ₁ 由 p 采样值拟合为多项式"""
    orders = [PSymbol(branch.w[None].astype(complex), FIELD)]
    if chi1 is not None:
        degree = min(degree, len(chi1.p_samples) - 1)
        orders.append(PSymbol.fit_from_samples(chi1.p_samples, chi1.values, degree, FIELD))
    return MuSymbol(tuple(orders), branch.x_grid)


def l_symbol(heff: EffectiveHamiltonian, L1=None, p_scale: float = 1.0) -> MuSymbol:
    """约化符号 H_eff (+ μL₁)"""
    n = heff.x_grid.n
    leading = np.zeros((3, n), dtype=complex)
    leading[0] = heff.potential
    leading[2] = 0.5
    orders = [PSymbol(leading, SCALAR)]
    if L1 is not None:
        orders.append(PSymbol(L1.polynomial(p_scale).coeffs, SCALAR))
    return MuSymbol(tuple(orders), heff.x_grid)
