"""
约化模块测试：有效哈密顿量、L₁/χ₁、区间分类与约化定态求解
"""

import numpy as np
import pytest

from adiax.exceptions import EssentialAssemblyError, ReductionError, RegimeError
from adiax.reduction import (
    EffectiveHamiltonian,
    EssentialHamiltonian,
    PolynomialL1,
    Regime,
    accuracy_bound,
    assemble_essential,
    build_effective_model,
    classify_regime,
    correction_chi1,
    correction_L1,
    effective_hamiltonian,
    geometric_potential,
    h_for_regime,
    required_expansion_order,
    solve_reduced_stationary,
    waveguide_family,
)
from adiax.transverse import track_branches
from adiax.utils import UniformGrid

HARMONIC_Y = UniformGrid(-5.0, 5.0, 101)


def flat_heff(x_grid, level=np.pi ** 2 / 2):
    """常数横向能级的有效哈密顿量"""
    return EffectiveHamiltonian(x_grid=x_grid, v_ext=np.zeros(x_grid.n), eps=np.full(x_grid.n, level),
                                d_potential=np.zeros(x_grid.n))


def test_rigid_strip_effective_hamiltonian(rigid_strip, strip_x_grid):
    branch = track_branches(rigid_strip, strip_x_grid, UniformGrid(0.0, 1.0, 65), K=1)[0]
    heff = effective_hamiltonian(branch)

    for i in (0, 20, 40):
        assert heff.at_node(0.0, i) == pytest.approx(np.pi ** 2 / 2, rel=1e-3)
    assert heff.at_node(2.0, 10) == pytest.approx(2.0 + np.pi ** 2 / 2, rel=1e-3)
    assert heff.dp(1.5, 3) == 1.5
    assert abs(heff.dx(0.0, 7)) <= 1e-10


def test_external_potential_adds(harmonic_channel, strip_x_grid):
    branch = track_branches(harmonic_channel, strip_x_grid, HARMONIC_Y, K=1)[0]
    heff = effective_hamiltonian(branch, np.cos)

    np.testing.assert_allclose(heff.potential, branch.eps + np.cos(strip_x_grid.points), atol=1e-14)
    assert heff(0.0, 0.05) == pytest.approx(np.interp(0.05, strip_x_grid.points, heff.potential))


def test_external_potential_shape_checked(harmonic_channel, strip_x_grid):
    branch = track_branches(harmonic_channel, strip_x_grid, HARMONIC_Y, K=1)[0]
    with pytest.raises(ReductionError):
        effective_hamiltonian(branch, np.zeros(strip_x_grid.n + 1))


def test_geometric_potential():
    np.testing.assert_allclose(geometric_potential([0.0, 2.0, -1.0]), [0.0, -0.5, -0.125])
    with pytest.raises(ReductionError):
        geometric_potential([np.nan])


@pytest.mark.parametrize("h, expected", [
    (0.01, Regime.SHORT_WAVE),
    (0.1, Regime.MEDIUM_WAVE),
    (1.0, Regime.LONG_WAVE),
    (0.01 ** 1.25, Regime.ULTRA_SHORT_WAVE),
    (0.01 ** 0.75, Regime.SHORT_WAVE),
])
def test_classify_regime(h, expected):
    assert classify_regime(0.01, h) == expected


@pytest.mark.parametrize("mu, h", [(1.5, 0.5), (0.0, 0.5), (0.01, 0.0005), (0.01, 2.0), (0.01, -1.0)])
def test_classify_regime_rejects_window(mu, h):
    with pytest.raises(RegimeError):
        classify_regime(mu, h)


def test_regime_helpers():
    assert h_for_regime(0.04, Regime.MEDIUM_WAVE) == pytest.approx(0.2)
    assert h_for_regime(0.04, "LongWave") == 1.0
    assert required_expansion_order(Regime.LONG_WAVE) == 2
    assert required_expansion_order(Regime.SHORT_WAVE) == 1
    assert required_expansion_order("MediumWave") == 1
    assert accuracy_bound(0.01, 0.1, 2.0, 0.5) == pytest.approx(1.0)


def test_straight_waveguide_has_no_first_order_correction(harmonic_channel):
    x_grid = UniformGrid(-1.0, 1.0, 21)
    branch = track_branches(harmonic_channel, x_grid, HARMONIC_Y, K=1)[0]
    heff = effective_hamiltonian(branch)
    family = waveguide_family(harmonic_channel, HARMONIC_Y)

    L1 = correction_L1(branch, family, heff)
    for p in (-1.0, 0.0, 0.7):
        assert np.abs(L1.values(p)).max() <= 1e-12

    chi1 = correction_chi1(branch, family, heff, L1)
    assert chi1.solvability.max() <= 1e-8
    assert chi1.residual <= 1e-8
    assert np.abs(chi1.values).max() <= 1e-10


def test_waveguide_family_is_symmetric(breathing_well):
    family = waveguide_family(breathing_well, UniformGrid(-6.0, 6.0, 81), v_ext=np.cos)

    assert family.symmetry_defect(0.5, 0.3) <= 1e-12


def test_build_model_rejects_inconsistent_regime():
    heff = flat_heff(UniformGrid(-1.0, 1.0, 11))
    with pytest.raises(RegimeError):
        build_effective_model(heff, mu=0.01, h=1.0, regime=Regime.SHORT_WAVE)
    with pytest.raises(RegimeError):
        build_effective_model(heff, mu=0.01)

    model = build_effective_model(heff, mu=0.01, regime="MediumWave")
    assert model.h == pytest.approx(0.1)
    assert model.regime == Regime.MEDIUM_WAVE
    np.testing.assert_array_equal(model.G, 0.0)


def test_harmonic_essential_levels():
    x_grid = UniformGrid(-6.0, 6.0, 1201)
    h = 0.1
    ess = EssentialHamiltonian(x_grid=x_grid, kinetic=0.5, potential=0.5 * x_grid.points ** 2,
                               c1=np.zeros(x_grid.n), zero_order=0.0, h=h, energy_scale=1.0,
                               regime=Regime.SHORT_WAVE)

    spectrum = solve_reduced_stationary(ess, count=4)
    np.testing.assert_allclose(spectrum.eigenvalues, h * (np.arange(4) + 0.5), rtol=1e-3)
    np.testing.assert_allclose(spectrum.physical, spectrum.eigenvalues)
    assert spectrum.vectors.shape == (4, x_grid.n)

    windowed = solve_reduced_stationary(ess, window=(0.0, 0.2))
    np.testing.assert_allclose(windowed.eigenvalues, spectrum.eigenvalues[:2])


def test_count_and_window_are_exclusive():
    x_grid = UniformGrid(-1.0, 1.0, 21)
    ess = EssentialHamiltonian(x_grid=x_grid, kinetic=0.5, potential=np.zeros(x_grid.n), c1=np.zeros(x_grid.n),
                               zero_order=0.0, h=0.1, energy_scale=1.0, regime=Regime.SHORT_WAVE)
    with pytest.raises(ReductionError):
        solve_reduced_stationary(ess)
    with pytest.raises(ReductionError):
        solve_reduced_stationary(ess, count=1, window=(0.0, 1.0))


def test_curvature_binds_state_in_long_wave_regime():
    x_grid = UniformGrid(-40.0, 40.0, 1601)
    mu = 0.1
    curvature = 1.0 / np.cosh(x_grid.points)
    model = build_effective_model(flat_heff(x_grid), mu=mu, regime=Regime.LONG_WAVE,
                                  G=geometric_potential(curvature))
    ess = assemble_essential(model)

    spectrum = solve_reduced_stationary(ess, count=1)
    # −½ψ″ − sech²(x)/8 ψ 的唯一束缚态
    lam = (np.sqrt(2.0) - 1.0) / 2.0
    assert spectrum.eigenvalues[0] < 0
    assert spectrum.eigenvalues[0] == pytest.approx(-lam ** 2 / 2, rel=2e-2)
    assert spectrum.physical[0] == pytest.approx(np.pi ** 2 / 2 + mu ** 2 * spectrum.eigenvalues[0])


def test_short_wave_absorbs_quadratic_correction():
    x_grid = UniformGrid(-1.0, 1.0, 11)
    coeffs = np.zeros((3, x_grid.n), dtype=complex)
    coeffs[0] = 0.2
    coeffs[1] = 0.4
    coeffs[2] = 0.25
    model = build_effective_model(flat_heff(x_grid), mu=0.01, h=0.01, L1=PolynomialL1(x_grid, coeffs))
    ess = assemble_essential(model)

    assert ess.kinetic == pytest.approx(0.5 + 0.01 * 0.25)
    np.testing.assert_allclose(ess.c1, 0.01 * 0.4)
    np.testing.assert_allclose(ess.potential, 0.01 * 0.2, atol=1e-15)
    assert ess.energy_scale == pytest.approx(1.0)


def test_long_wave_requires_vanishing_correction_at_zero_momentum():
    x_grid = UniformGrid(-1.0, 1.0, 11)
    coeffs = np.zeros((3, x_grid.n), dtype=complex)
    coeffs[0] = 0.1
    model = build_effective_model(flat_heff(x_grid), mu=0.1, regime=Regime.LONG_WAVE,
                                  L1=PolynomialL1(x_grid, coeffs))
    with pytest.raises(EssentialAssemblyError):
        assemble_essential(model)


def test_x_dependent_kinetic_correction_rejected():
    x_grid = UniformGrid(-1.0, 1.0, 11)
    coeffs = np.zeros((3, x_grid.n), dtype=complex)
    coeffs[2] = x_grid.points
    model = build_effective_model(flat_heff(x_grid), mu=0.01, h=0.01, L1=PolynomialL1(x_grid, coeffs))
    with pytest.raises(EssentialAssemblyError):
        assemble_essential(model)


def oscillator_essential(n, h=0.1):
    x_grid = UniformGrid(-6.0, 6.0, n)
    return EssentialHamiltonian(x_grid=x_grid, kinetic=0.5, potential=0.5 * x_grid.points ** 2,
                                c1=np.zeros(x_grid.n), zero_order=0.0, h=h, energy_scale=1.0,
                                regime=Regime.SHORT_WAVE)


def test_stationary_eigenvalues_converge_at_second_order():
    """Δx 减半时谐振子能级误差缩小约 4 倍"""
    exact = 0.1 * (np.arange(3) + 0.5)
    coarse = np.abs(solve_reduced_stationary(oscillator_essential(301), count=3).eigenvalues - exact)
    fine = np.abs(solve_reduced_stationary(oscillator_essential(601), count=3).eigenvalues - exact)

    ratios = coarse / fine
    assert np.all((ratios >= 3.5) & (ratios <= 4.5)), ratios


def test_stationary_spectrum_shifts_with_constant_potential():
    ess = oscillator_essential(401)
    base = solve_reduced_stationary(ess, count=5)
    shifted = solve_reduced_stationary(ess.shifted(0.37), count=5)

    np.testing.assert_allclose(shifted.eigenvalues, base.eigenvalues + 0.37, atol=1e-10)
    np.testing.assert_allclose(np.abs(shifted.vectors), np.abs(base.vectors), atol=1e-8)
