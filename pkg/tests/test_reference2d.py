"""
二维参考求解器测试
"""

import numpy as np
import pytest

from adiax.exceptions import ReferenceSolverError
from adiax.reference2d import (
    Rect2DGrid,
    Wavefunction2D,
    assemble_2d,
    eigs_2d,
    evolve_cn,
    mode_leakage,
    mode_norms,
    project_modes,
    reconstruct,
    time_reversal_defect,
)
from adiax.transverse import track_branches
from adiax.utils import UniformGrid


def discrete_levels(length, n, scale=1.0):
    """n 节点Dirichlet网格上 −(scale/2)∂² 的本征值"""
    h = length / (n - 1)
    j = np.arange(1, n - 1)
    return scale / h ** 2 * (1.0 - np.cos(j * np.pi * h / length))


@pytest.fixture
def channel_grid():
    return Rect2DGrid.from_bounds((-3.0, 3.0), 41, (-4.0, 4.0), 41)


@pytest.fixture
def packet(channel_grid):
    return Wavefunction2D.from_function(
        channel_grid, lambda X, Y: np.exp(-(X + 0.5) ** 2 + 0.8j * X) * np.exp(-Y ** 2)).normalized()


def channel_potential(X, Y):
    return 2.0 * Y ** 2


def test_grid_requires_enough_nodes():
    with pytest.raises(ReferenceSolverError):
        Rect2DGrid(UniformGrid(0.0, 1.0, 10), UniformGrid(0.0, 1.0, 20))


def test_box_eigenvalues():
    grid = Rect2DGrid.from_bounds((0.0, 2.0), 21, (0.0, 1.0), 19)
    mu = 0.5
    op = assemble_2d(mu, lambda X, Y: np.zeros_like(X), grid)

    result = eigs_2d(op, k=4)
    lx = discrete_levels(2.0, 21, mu * mu)
    ly = discrete_levels(1.0, 19)
    expected = np.sort((lx[:, None] + ly[None, :]).ravel())[:4]
    np.testing.assert_allclose(result.energies, expected, rtol=1e-10)
    assert result.residuals.max() <= 1e-8
    for state in result.states:
        assert state.norm() == pytest.approx(1.0, abs=1e-12)
        assert np.all(state.values[0] == 0.0) and np.all(state.values[:, -1] == 0.0)


def test_operator_is_symmetric(channel_grid):
    op = assemble_2d(0.3, channel_potential, channel_grid)

    assert op.symmetry_defect() <= 1e-12
    assert op.dim == 39 * 39


def test_invalid_operator_inputs(channel_grid):
    with pytest.raises(ReferenceSolverError):
        assemble_2d(0.0, channel_potential, channel_grid)
    with pytest.raises(ReferenceSolverError):
        assemble_2d(0.3, np.zeros((5, 5)), channel_grid)
    op = assemble_2d(0.3, channel_potential, channel_grid)
    with pytest.raises(ReferenceSolverError):
        eigs_2d(op, k=0)


def test_crank_nicolson_preserves_norm(channel_grid, packet):
    op = assemble_2d(0.3, channel_potential, channel_grid)

    evolution = evolve_cn(packet, op, mu=0.3, dt=0.02, steps=25, save_every=5)
    assert evolution.norm_drift <= 1e-9
    np.testing.assert_allclose(evolution.times, [0.0, 0.1, 0.2, 0.3, 0.4, 0.5])
    assert evolution.final.norm() == pytest.approx(1.0, abs=1e-9)


def test_time_reversal(channel_grid, packet):
    op = assemble_2d(0.3, channel_potential, channel_grid)

    assert time_reversal_defect(packet, op, mu=0.3, dt=0.02, steps=20) <= 1e-9


def test_iterative_solver_matches_lu(channel_grid, packet):
    op = assemble_2d(0.3, channel_potential, channel_grid)

    lu = evolve_cn(packet, op, mu=0.3, dt=0.02, steps=5).final
    iterative = evolve_cn(packet, op, mu=0.3, dt=0.02, steps=5, solver='bicgstab').final
    np.testing.assert_allclose(iterative.values, lu.values, atol=1e-7)

    with pytest.raises(ReferenceSolverError):
        evolve_cn(packet, op, mu=0.3, dt=0.02, steps=5, solver='jacobi')


def test_eigenstate_only_gains_phase(channel_grid):
    op = assemble_2d(0.3, channel_potential, channel_grid)
    ground = eigs_2d(op, k=1).states[0]

    final = evolve_cn(ground, op, mu=0.3, dt=0.05, steps=10).final
    assert abs(ground.inner(final)) == pytest.approx(1.0, abs=1e-9)


def test_mode_projection_of_product_state(harmonic_channel, channel_grid):
    branches = track_branches(harmonic_channel, channel_grid.x_grid, channel_grid.y_grid, K=2)
    xs = channel_grid.x_grid.points
    envelope = np.sin(np.pi * (xs + 3.0) / 6.0)
    psi = Wavefunction2D(channel_grid, np.outer(envelope, branches[0].w[0]))

    coefficients = project_modes(psi, branches)
    np.testing.assert_allclose(coefficients[0], envelope, atol=1e-12)
    np.testing.assert_allclose(coefficients[1], 0.0, atol=1e-12)
    assert mode_leakage(psi, branches, nu=1) <= 1e-20
    np.testing.assert_allclose(reconstruct(coefficients, branches), psi.values, atol=1e-12)


def test_mode_norms_obey_bessel_inequality(harmonic_channel, channel_grid, packet):
    """前 K 个模式的 Σ‖ψ_k‖² 不超过 ‖Ψ‖²"""
    branches = track_branches(harmonic_channel, channel_grid.x_grid, channel_grid.y_grid, K=4)
    rng = np.random.default_rng(0)
    noise = rng.standard_normal(channel_grid.shape) + 1j * rng.standard_normal(channel_grid.shape)
    noise[[0, -1], :] = 0.0
    noise[:, [0, -1]] = 0.0

    for psi in (packet, Wavefunction2D(channel_grid, noise)):
        norms = mode_norms(project_modes(psi, branches), psi)
        assert np.all(norms >= 0.0)
        assert norms.sum() <= psi.norm() ** 2 * (1.0 + 1e-12)
    assert mode_norms(project_modes(packet, branches), packet)[0] >= 0.9


def test_mode_projection_checks_grids(harmonic_channel, channel_grid, packet):
    branches = track_branches(harmonic_channel, UniformGrid(-3.0, 3.0, 21), channel_grid.y_grid, K=1)

    with pytest.raises(ReferenceSolverError):
        project_modes(packet, branches)
