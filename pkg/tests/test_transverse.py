"""
横向谱与能级支追踪测试
"""

import numpy as np
import pytest

from adiax.exceptions import DegenerateTerm, TransverseError
from adiax.transverse import (
    Harmonic,
    PowerWell,
    RigidWall,
    branch_orthonormality,
    branch_x_derivatives,
    sample_potential,
    solve_transverse_at_x,
    suggest_y_window,
    track_branches,
)
from adiax.utils import UniformGrid, trapezoid_weights

SOFT_Y = UniformGrid(-8.0, 8.0, 321)


def test_rigid_wall_levels(rigid_strip):
    sol = solve_transverse_at_x(rigid_strip, 0.0, UniformGrid(0.0, 1.0, 33), K=3)
    expected = np.array([1.0, 4.0, 9.0]) * np.pi ** 2 / 2

    np.testing.assert_allclose(sol.eps, expected, rtol=1e-2)
    assert np.all(np.diff(sol.eps) > 0)


def test_eigenvectors_normalized_and_signed(rigid_strip):
    y_grid = UniformGrid(0.0, 1.0, 65)
    sol = solve_transverse_at_x(rigid_strip, 0.0, y_grid, K=2)
    weights = trapezoid_weights(y_grid.n, y_grid.step)

    np.testing.assert_allclose(np.sum(weights * sol.w * sol.w, axis=1), 1.0, atol=1e-12)
    assert sol.w[0, 0] == 0.0 and sol.w[0, -1] == 0.0
    for row in sol.w:
        assert row[np.flatnonzero(np.abs(row) > 1e-8)[0]] > 0


def test_harmonic_levels(harmonic_channel):
    sol = solve_transverse_at_x(harmonic_channel, 0.3, UniformGrid(-5.0, 5.0, 201), K=2)

    np.testing.assert_allclose(sol.eps, [1.0, 3.0], rtol=1e-2)


def test_power_well_ground_level():
    sol = solve_transverse_at_x(PowerWell(dilation=1.0, m=1.0), 0.0, SOFT_Y, K=1)

    assert sol.eps[0] == pytest.approx(np.sqrt(2.0) / 2, rel=1e-3)


def test_x_independent_model_gives_constant_branches(strip_x_grid, harmonic_channel):
    branches = track_branches(harmonic_channel, strip_x_grid, UniformGrid(-5.0, 5.0, 101), K=2)

    for branch in branches:
        assert np.ptp(branch.eps) <= 1e-12
        assert np.abs(branch.w - branch.w[0]).max() <= 1e-12


def test_breathing_well_follows_dilation(breathing_well):
    x_grid = UniformGrid(0.0, 2.0 * np.pi, 25)
    branches = track_branches(breathing_well, x_grid, SOFT_Y, K=2)
    dilation = 1.0 + 0.3 * np.sin(x_grid.points)

    for branch in branches:
        scaled = branch.eps * dilation
        expected = np.sqrt(2.0) * (branch.nu - 0.5)
        np.testing.assert_allclose(scaled, expected, rtol=2e-3)


def test_branch_derivatives_orthogonal(breathing_well):
    x_grid = UniformGrid(0.0, 2.0 * np.pi, 61)
    branches = track_branches(breathing_well, x_grid, SOFT_Y, K=2)

    for branch in branches:
        deriv = branch_x_derivatives(branch)
        assert np.abs(deriv.overlap).max() <= 1e-12
        assert np.abs(deriv.raw_overlap).max() <= 1e-2
    assert branch_orthonormality(branches) <= 1e-10


def test_linear_frequency_slope():
    model = Harmonic(omega=lambda x: 1.0 + 0.1 * np.asarray(x, dtype=float))
    x_grid = UniformGrid(0.0, 1.0, 11)
    branch = track_branches(model, x_grid, SOFT_Y, K=1)[0]

    np.testing.assert_allclose(branch_x_derivatives(branch).d_eps, 0.05, atol=1e-3)


def test_gap_diagnostics(harmonic_channel, strip_x_grid):
    first, second = track_branches(harmonic_channel, strip_x_grid, UniformGrid(-5.0, 5.0, 201), K=2)

    assert first.gap_below == np.inf
    assert first.gap_above == pytest.approx(2.0, rel=1e-2)
    assert second.gap_below == pytest.approx(first.gap_above)


def test_degenerate_levels_rejected(harmonic_channel, strip_x_grid):
    with pytest.raises(DegenerateTerm) as excinfo:
        track_branches(harmonic_channel, strip_x_grid, UniformGrid(-5.0, 5.0, 101), K=1, gap_tol=10.0)
    assert excinfo.value.details['level'] == 1


def test_too_many_levels(rigid_strip):
    with pytest.raises(TransverseError):
        solve_transverse_at_x(rigid_strip, 0.0, UniformGrid(0.0, 1.0, 6), K=5)


def test_invalid_wall_profile(strip_x_grid):
    with pytest.raises(TransverseError):
        track_branches(RigidWall(lower=0.0, upper=lambda x: 0.5 * np.asarray(x)), strip_x_grid,
                       UniformGrid(-1.0, 1.0, 21), K=1)


def test_suggested_window_contains_turning_points(harmonic_channel, rigid_strip, strip_x_grid):
    lo, hi = suggest_y_window(harmonic_channel, strip_x_grid, K=2)
    turning = np.sqrt(2.0 * 3.0) / 2.0

    assert lo < -turning and hi > turning
    assert suggest_y_window(rigid_strip, strip_x_grid, K=3) == (0.0, 1.0)


def test_sample_potential_shape(breathing_well, strip_x_grid):
    values = sample_potential(breathing_well, strip_x_grid, SOFT_Y)

    assert values.shape == (strip_x_grid.n, SOFT_Y.n)
    assert 0.0 <= values.min() <= 1e-20
