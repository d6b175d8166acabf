"""
Bloch能带与有效哈密顿量测试
"""

import numpy as np
import pytest

from adiax.bloch import (
    BlochEffectiveHamiltonian,
    BlochTerm,
    PeriodicPotential,
    band_gap_check,
    bloch_bands_fourier,
    bloch_discriminant_oracle,
    bloch_family,
    chi0_bloch,
    compute_bloch_bands,
    discriminant_band_edges,
    effective_hamiltonian_bloch,
    effective_mass,
    fourier_band_edges,
    quasimomentum,
)
from adiax.exceptions import BlochError, StickingBands, TruncationError
from adiax.reduction import correction_L1
from adiax.utils import UniformGrid, trapezoid_weights


@pytest.fixture
def x_grid():
    return UniformGrid(0.0, 1.0, 5)


def test_quasimomentum():
    assert quasimomentum(0.6, 0.0, 2.0) == pytest.approx(0.3)
    assert quasimomentum(1.0, 0.5, lambda x: 1.0 + x) == pytest.approx(1.0 / 1.5)
    np.testing.assert_allclose(quasimomentum(np.array([0.2, 0.4]), 0.0, 2.0), [0.1, 0.2])
    with pytest.raises(BlochError):
        quasimomentum(1.0, 0.0, 0.0)


def test_nonpositive_phase_derivative_rejected(x_grid):
    with pytest.raises(BlochError):
        PeriodicPotential.constant(0.0, x_grid, U=0.0)


def test_free_bands(x_grid):
    free = PeriodicPotential.constant(0.0, x_grid)

    np.testing.assert_allclose(bloch_bands_fourier(free, 0.5, 0.3, K=2), [0.09, 0.49], atol=1e-12)


def test_constant_potential_shifts_bands(x_grid):
    shifted = PeriodicPotential.constant(2.0, x_grid)

    np.testing.assert_allclose(bloch_bands_fourier(shifted, 0.0, 0.3, K=2), [2.09, 2.49], atol=1e-12)


def test_plane_wave_truncation_too_small(x_grid):
    with pytest.raises(TruncationError):
        bloch_bands_fourier(PeriodicPotential.mathieu(0.5, x_grid), 0.0, 0.0, K=2, n_pw=1)


def test_fourier_edges_match_discriminant(x_grid):
    mathieu = PeriodicPotential.mathieu(0.5, x_grid)

    fourier = fourier_band_edges(mathieu, 0.0, 3)
    discriminant = discriminant_band_edges(mathieu, 0.0, 3)

    assert fourier.shape == discriminant.shape == (3, 2)
    np.testing.assert_allclose(fourier, discriminant, atol=1e-6)
    assert np.all(fourier[1:, 0] > fourier[:-1, 1])


def test_discriminant_inside_bands(x_grid):
    mathieu = PeriodicPotential.mathieu(0.5, x_grid)
    lower, upper = fourier_band_edges(mathieu, 0.0, 1)[0]

    assert abs(bloch_discriminant_oracle(mathieu, 0.0, 0.5 * (lower + upper))) < 2.0
    assert bloch_discriminant_oracle(mathieu, 0.0, lower - 0.5) > 2.0


def test_free_bands_stick(x_grid):
    bands = compute_bloch_bands(PeriodicPotential.constant(0.0, x_grid), K=2, n_P=9)

    with pytest.raises(StickingBands):
        band_gap_check(bands, 1)


def test_mathieu_bands_are_separated(x_grid):
    bands = compute_bloch_bands(PeriodicPotential.mathieu(0.5, x_grid), K=2, n_P=17)

    assert band_gap_check(bands, 1) > 0.1
    assert bands[0].gap_below == np.inf
    np.testing.assert_allclose(bands[0].upper, fourier_band_edges(PeriodicPotential.mathieu(0.5, x_grid), 0.0, 1)[0, 1])


@pytest.mark.parametrize("U", [1.0, 2.0])
def test_free_effective_hamiltonian(x_grid, U):
    free = PeriodicPotential.constant(0.0, x_grid, U=U)
    band = compute_bloch_bands(free, K=1)[0]

    for p in (0.0, 0.1 * U, 0.2 * U):
        assert effective_hamiltonian_bloch(band, p, 0.5, U) == pytest.approx(p * p, abs=1e-8)
    heff = BlochEffectiveHamiltonian(free, nu=1)
    assert heff.at_node(0.2 * U, 2) == pytest.approx((0.2 * U) ** 2, abs=1e-12)
    assert heff.dp(0.2 * U, 2) == pytest.approx(0.4 * U, rel=1e-6)


def test_free_effective_mass(x_grid):
    band = compute_bloch_bands(PeriodicPotential.constant(0.0, x_grid), K=1)[0]

    assert effective_mass(band, 0.0) == pytest.approx(1.0, rel=1e-6)


def test_chi0_normalized(x_grid):
    chi = chi0_bloch(PeriodicPotential.mathieu(0.5, x_grid), nu=1, p=0.2, x=0.0, ny=64)
    weights = trapezoid_weights(64, 2.0 * np.pi / 64, periodic=True)

    assert np.sum(weights * np.abs(chi) ** 2) == pytest.approx(1.0, abs=1e-12)


def test_family_h0_has_chi0_as_eigenfunction():
    """谱方法的 H₀ 作用在 χ₀ 上等于 H_eff·χ₀"""
    x_grid = UniformGrid(0.0, 1.0, 9)
    pot = PeriodicPotential.mathieu(0.5, x_grid, U=lambda x: 1.0 + 0.2 * x)
    family = bloch_family(pot, ny=64)
    heff = BlochEffectiveHamiltonian(pot, nu=1)

    for i in (0, 4, 8):
        x = float(x_grid.points[i])
        chi = chi0_bloch(pot, nu=1, p=0.3, x=x, ny=64)
        residual = family.apply_H0(0.3, x, chi) - heff.at_node(0.3, i) * chi
        assert np.abs(residual).max() < 1e-10


@pytest.mark.parametrize("P", [0.1, 0.3, 0.45])
def test_dispersion_even_and_periodic(P):
    pot = PeriodicPotential.mathieu(0.5, UniformGrid(0.0, 1.0, 5), U=1.5)

    energies = bloch_bands_fourier(pot, 0.5, P, 3)
    np.testing.assert_allclose(bloch_bands_fourier(pot, 0.5, -P, 3), energies, atol=1e-10)
    np.testing.assert_allclose(bloch_bands_fourier(pot, 0.5, P + 1.0, 3), energies, atol=1e-10)


def test_bloch_L1_independent_of_fast_resolution():
    """L₁ 在 ny = 128 与 ny = 256 下一致且不为零"""
    x_grid = UniformGrid(0.0, 1.0, 9)
    pot = PeriodicPotential.mathieu(0.5, x_grid, U=lambda x: 1.0 + 0.2 * x)
    heff = BlochEffectiveHamiltonian(pot, nu=1)

    coarse = correction_L1(BlochTerm(pot, nu=1, ny=128), bloch_family(pot, ny=128), heff).values(0.3)
    fine = correction_L1(BlochTerm(pot, nu=1, ny=256), bloch_family(pot, ny=256), heff).values(0.3)

    assert np.all(np.isfinite(coarse))
    assert np.abs(coarse).max() > 1e-6
    np.testing.assert_allclose(coarse, fine, atol=1e-9)
