"""
符号演算测试
"""

import numpy as np
import pytest

from adiax.exceptions import AdiaxError, SymbolError
from adiax.reduction import chi_symbol, effective_hamiltonian, hamiltonian_symbol, l_symbol
from adiax.symbols import FIELD, P_SAMPLES, MuSymbol, PSymbol, add, compose, fit_slope, reduction_residual
from adiax.transverse import Harmonic, PowerWell, track_branches
from adiax.utils import UniformGrid, finite_difference, stencil_weights


def scalar(coeffs, grid):
    """由 p 的升幂系数列表构造单阶标量符号"""
    rows = [np.broadcast_to(np.asarray(c, dtype=complex), (grid.n,)) for c in coeffs]
    return MuSymbol((PSymbol(np.stack(rows)),), grid)


@pytest.fixture
def grid():
    return UniformGrid(0.0, 2.0 * np.pi, 256)


def test_momentum_after_position(grid):
    xs = grid.points
    result = compose(scalar([0.0, 1.0], grid), scalar([xs], grid), N=1)

    np.testing.assert_allclose(result.orders[0].coeffs[1], xs, atol=1e-12)
    np.testing.assert_allclose(result.orders[0].coeffs[0], 0.0, atol=1e-12)
    np.testing.assert_allclose(result.orders[1].evaluate(0.7), -1j, atol=1e-10)


def test_position_after_momentum_has_no_correction(grid):
    xs = grid.points
    result = compose(scalar([xs], grid), scalar([0.0, 1.0], grid), N=0)

    assert result.max_mu_order == 0
    np.testing.assert_allclose(result.orders[0].evaluate(2.0), 2.0 * xs, atol=1e-12)


def test_p_squared_after_function(grid):
    xs = grid.points
    f = np.sin(xs)
    result = compose(scalar([0.0, 0.0, 1.0], grid), scalar([f], grid), N=2)

    p = 0.8
    np.testing.assert_allclose(result.orders[0].evaluate(p), p * p * f, atol=1e-12)
    np.testing.assert_allclose(result.orders[1].evaluate(p), -2j * p * np.cos(xs), atol=1e-8)
    np.testing.assert_allclose(result.orders[2].evaluate(p), np.sin(xs), atol=1e-8)


def test_compose_with_identity(grid):
    """单位符号在两侧复合都不改变另一个因子"""
    xs = grid.points
    A = scalar([np.cos(xs), xs, 0.5], grid)
    B = MuSymbol((PSymbol(np.stack([np.sin(xs), np.exp(-xs)])), PSymbol(np.stack([np.cos(xs)]))), grid)
    identity = MuSymbol.identity(grid)

    right = compose(A, identity, N=1)
    left = compose(identity, B, N=1)

    for p in P_SAMPLES:
        np.testing.assert_allclose(right.orders[0].evaluate(p), A.orders[0].evaluate(p), atol=1e-14)
        np.testing.assert_allclose(right.orders[1].evaluate(p), 0.0, atol=1e-10)
        for j in range(2):
            np.testing.assert_allclose(left.orders[j].evaluate(p), B.orders[j].evaluate(p), atol=1e-14)


def test_compose_is_associative(grid):
    """(p∘sin)∘cos 与 p∘(sin∘cos) 在截断阶内一致"""
    xs = grid.points
    A = scalar([0.0, 1.0], grid)
    B = scalar([np.sin(xs)], grid)
    C = scalar([np.cos(xs)], grid)

    left = compose(compose(A, B, N=1), C, N=1)
    right = compose(A, compose(B, C, N=0), N=1)

    for p in P_SAMPLES:
        for j in range(2):
            np.testing.assert_allclose(left.orders[j].evaluate(p), right.orders[j].evaluate(p), atol=1e-8)
    np.testing.assert_allclose(right.orders[1].evaluate(0.0), -1j * np.cos(2.0 * xs), atol=1e-8)


def test_compose_is_linear_in_left_factor(grid):
    xs = grid.points
    A1 = scalar([np.cos(xs), 1.0], grid)
    A2 = scalar([0.0, xs, 0.5], grid)
    B = scalar([np.exp(-xs), xs], grid)
    A12 = MuSymbol((add(A1.orders[0], A2.orders[0]),), grid)

    left = compose(A12, B, N=1)
    right = [add(a, b) for a, b in zip(compose(A1, B, N=1).orders, compose(A2, B, N=1).orders)]
    for j in range(2):
        np.testing.assert_allclose(left.orders[j].evaluate(0.3), right[j].evaluate(0.3), atol=1e-10)


def test_truncation_order_out_of_range(grid):
    with pytest.raises(SymbolError):
        compose(scalar([1.0], grid), scalar([1.0], grid), N=1)


def test_grid_mismatch_rejected(grid):
    other = UniformGrid(0.0, 1.0, 256)
    with pytest.raises(SymbolError):
        compose(scalar([1.0], grid), scalar([1.0], other), N=0)


def test_mixed_kinds_rejected(grid):
    field = PSymbol(np.zeros((1, grid.n, 4)), FIELD)
    with pytest.raises(SymbolError):
        MuSymbol((PSymbol(np.zeros((1, grid.n))), field), grid)


def test_separable_residual_vanishes():
    model = Harmonic(omega=np.sqrt(2.0))
    x_grid = UniformGrid(0.0, 2.0 * np.pi, 41)
    y_grid = UniformGrid(-6.0, 6.0, 61)
    branch = track_branches(model, x_grid, y_grid, K=2)[0]
    heff = effective_hamiltonian(branch, np.cos)

    report = reduction_residual(hamiltonian_symbol(model, x_grid, y_grid, np.cos), chi_symbol(branch),
                                l_symbol(heff), None, N=2)

    assert report.max_order == 2
    assert report.norms.max() <= 1e-9


def test_leading_residual_is_first_order():
    model = PowerWell(dilation=lambda x: 1.0 + 0.3 * np.exp(-np.asarray(x, dtype=float) ** 2), m=1.0)
    x_grid = UniformGrid(-2.0, 2.0, 201)
    y_grid = UniformGrid(-6.0, 6.0, 61)
    branch = track_branches(model, x_grid, y_grid, K=2)[0]
    heff = effective_hamiltonian(branch)

    report = reduction_residual(hamiltonian_symbol(model, x_grid, y_grid), chi_symbol(branch), l_symbol(heff),
                                None, N=1)

    assert report.norms[0] <= 1e-9
    assert report.norms[1] > 1e-4


def test_fit_slope_recovers_power_law():
    mus = [1e-1, 3e-2, 1e-2]
    assert fit_slope(mus, [5.0 * mu ** 2 for mu in mus]) == pytest.approx(2.0, abs=1e-12)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_finite_difference_exact_on_polynomials(k):
    """高阶模板对低次多项式（含两端单侧闭合）给出精确导数"""
    grid = UniformGrid(-1.0, 1.0, 64)
    xs = grid.points
    exact = {1: 5.0 * xs ** 4, 2: 20.0 * xs ** 3, 3: 60.0 * xs ** 2}[k]

    np.testing.assert_allclose(finite_difference(xs ** 5, grid.step, k), exact, atol=1e-6)


def test_finite_difference_along_axis():
    grid = UniformGrid(0.0, 1.0, 40)
    values = np.stack([grid.points ** 2, np.sin(grid.points)], axis=1)

    derivative = finite_difference(values, grid.step, 1, axis=0)

    np.testing.assert_allclose(derivative[:, 0], 2.0 * grid.points, atol=1e-10)
    np.testing.assert_allclose(derivative[:, 1], np.cos(grid.points), atol=1e-10)


def test_finite_difference_needs_enough_nodes():
    with pytest.raises(AdiaxError):
        finite_difference(np.ones(2), 0.1, k=2)


def test_central_stencil_weights():
    """九点中心模板的经典八阶权重"""
    first = stencil_weights(tuple(range(-4, 5)), 1)
    second = stencil_weights(tuple(range(-4, 5)), 2)

    np.testing.assert_allclose(first[5:], [4 / 5, -1 / 5, 4 / 105, -1 / 280], atol=1e-14)
    np.testing.assert_allclose(first[:4], [1 / 280, -4 / 105, 1 / 5, -4 / 5], atol=1e-14)
    np.testing.assert_allclose(second[4:], [-205 / 72, 8 / 5, -1 / 5, 8 / 315, -1 / 560], atol=1e-13)
