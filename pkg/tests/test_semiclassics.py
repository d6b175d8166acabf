"""
半经典模块测试：轨道、输运、Floquet指数、Bohr–Sommerfeld、散射与WKB波列
"""

import numpy as np
import pytest

from adiax.exceptions import CausticEncountered, DimensionMismatch, MultiWell, NoSolution, ScatteringError
from adiax.semiclassics import (
    HamiltonianField,
    bohr_sommerfeld,
    bohr_sommerfeld_action,
    closed_orbit_period,
    floquet_exponents,
    integrate_trajectory,
    launch_fan,
    scatter_1d,
    spectral_series,
    transport_solve,
    wkb_evaluate,
)


def harmonic_potential(x):
    return 0.5 * np.asarray(x) ** 2


def gaussian_barrier(x):
    return 0.5 * np.exp(-np.asarray(x) ** 2)


def test_free_trajectory():
    traj = integrate_trajectory(HamiltonianField.free(), p0=1.0, x0=0.0, T=2.0)

    assert traj.x[-1] == pytest.approx(2.0, abs=1e-10)
    assert traj.p[-1] == pytest.approx(1.0, abs=1e-12)
    assert traj.S[-1] == pytest.approx(1.0, abs=1e-10)
    np.testing.assert_allclose(traj.J, 1.0, atol=1e-10)


def test_focusing_jacobian():
    traj = integrate_trajectory(HamiltonianField.free(), p0=0.0, x0=1.0, T=2.0, d2S0=-1.0, times=[0.0, 1.0, 2.0])

    np.testing.assert_allclose(traj.J, [1.0, 0.0, -1.0], atol=1e-10)


@pytest.mark.parametrize("d2S0", [0.0, 2.0, -1.0])
def test_harmonic_jacobian_is_trigonometric(d2S0):
    """谐振子上 J(t) = cos ωt + (S₀''/ω)·sin ωt"""
    omega = 2.0
    times = np.linspace(0.0, 0.7, 8)
    traj = integrate_trajectory(HamiltonianField.harmonic(omega=omega), p0=0.5, x0=0.3, T=0.7, d2S0=d2S0,
                                times=times)

    expected = np.cos(omega * times) + d2S0 / omega * np.sin(omega * times)
    np.testing.assert_allclose(traj.J, expected, atol=1e-9)
    np.testing.assert_allclose(traj.dp_var, omega * (d2S0 / omega * np.cos(omega * times) - np.sin(omega * times)),
                               atol=1e-9)


def test_harmonic_orbit_returns():
    field = HamiltonianField.harmonic(omega=2.0)
    p0, period = closed_orbit_period(field, E=1.0, x0=0.0)

    assert p0 == pytest.approx(np.sqrt(2.0), abs=1e-12)
    assert period == pytest.approx(np.pi, rel=1e-8)
    traj = integrate_trajectory(field, p0, 0.0, period)
    assert traj.x[-1] == pytest.approx(0.0, abs=1e-8)
    assert traj.p[-1] == pytest.approx(p0, abs=1e-8)
    assert traj.energy_drift(field) <= 1e-10


def test_sampled_field_matches_analytic():
    xs = np.linspace(-3.0, 3.0, 121)
    sampled = HamiltonianField.from_samples(xs, harmonic_potential(xs))
    analytic = HamiltonianField.harmonic()

    for x in (-1.3, 0.2, 2.1):
        assert sampled.value(0.4, x) == pytest.approx(analytic.value(0.4, x), abs=1e-9)
        assert sampled.dx(0.4, x) == pytest.approx(analytic.dx(0.4, x), abs=1e-6)


def test_scalar_transport_phase():
    c = 0.7
    field = HamiltonianField.free(generator=lambda p, x: c)
    traj = integrate_trajectory(field, p0=1.0, x0=0.0, T=2.0)

    result = transport_solve(field, traj, [1.0])
    np.testing.assert_allclose(result.phi[:, 0], np.exp(-1j * c * traj.t), atol=1e-10)
    assert result.closed_form_deviation <= 1e-10
    assert result.norm_drift <= 1e-10


def test_transport_dimension_checked():
    field = HamiltonianField.free(generator=lambda p, x: np.diag([0.1, 0.2]))
    traj = integrate_trajectory(field, p0=1.0, x0=0.0, T=1.0)

    with pytest.raises(DimensionMismatch):
        transport_solve(field, traj, [1.0])


def test_floquet_exponent_of_constant_generator():
    field = HamiltonianField.harmonic(omega=1.0, generator=lambda p, x: 0.3)

    betas = floquet_exponents(field, E=1.0, x0=0.0)
    np.testing.assert_allclose(betas, [-0.3], atol=1e-6)


def test_matrix_generator_exponents():
    field = HamiltonianField.harmonic(omega=1.0, generator=lambda p, x: np.diag([0.1, -0.2]))

    betas = floquet_exponents(field, E=0.5, x0=0.0, period=2.0 * np.pi)
    np.testing.assert_allclose(betas, [-0.1, 0.2], atol=1e-6)


def test_harmonic_bohr_sommerfeld():
    levels = bohr_sommerfeld(harmonic_potential, (-3.0, 3.0), h=0.1, n=3)

    assert levels.energies[0] == pytest.approx(0.35, rel=1e-9)
    np.testing.assert_allclose(levels.turning_points[0], [-np.sqrt(0.7), np.sqrt(0.7)], rtol=1e-9)


def test_bohr_sommerfeld_window_and_samples():
    xs = np.linspace(-3.0, 3.0, 241)
    levels = bohr_sommerfeld((xs, harmonic_potential(xs)), (-3.0, 3.0), h=0.1, window=(0.0, 0.4))

    assert list(levels.n) == [0, 1, 2, 3]
    np.testing.assert_allclose(levels.energies, 0.1 * (np.arange(4) + 0.5), rtol=1e-6)
    assert bohr_sommerfeld_action(harmonic_potential, (-3.0, 3.0), 0.35) == pytest.approx(0.35, rel=1e-9)


def test_bohr_sommerfeld_errors():
    with pytest.raises(NoSolution):
        bohr_sommerfeld(harmonic_potential, (-1.0, 1.0), h=0.1, n=10)
    with pytest.raises(MultiWell):
        bohr_sommerfeld(lambda x: (np.asarray(x) ** 2 - 1.0) ** 2, (-2.0, 2.0), h=0.05, n=0)
    with pytest.raises(ValueError):
        bohr_sommerfeld(harmonic_potential, (-3.0, 3.0), h=0.1, n=1, window=(0.0, 1.0))


def test_spectral_series_shifts_levels():
    c = 0.2
    field = HamiltonianField.harmonic(omega=1.0, generator=lambda p, x: c)
    levels = bohr_sommerfeld(harmonic_potential, (-4.0, 4.0), h=0.1, n=[0, 1, 2])

    series = spectral_series(field, levels)
    assert series.is_increasing()
    rows = list(series.rows())
    assert [row['n'] for row in rows] == [0, 1, 2]
    for row in rows:
        assert row['beta'] == pytest.approx(-c, abs=1e-6)
        assert row['E_shifted'] == pytest.approx(row['E'] - 0.1 * c, abs=1e-7)


def test_scattering_below_barrier_reflects():
    result = scatter_1d(gaussian_barrier, (-6.0, 6.0), E=0.3, h=0.05)

    assert not result.transmitted
    assert result.outcome.value == "Reflected"
    assert result.x_f == pytest.approx(-np.sqrt(np.log(0.5 / 0.3)), abs=1e-10)
    assert result.reflection_phase == pytest.approx(-1j)
    assert np.isnan(result.as_row()['p_plus'])


def test_scattering_above_barrier_transmits():
    result = scatter_1d(gaussian_barrier, (-6.0, 6.0), E=0.9, h=0.05)

    assert result.transmitted
    assert result.v_max == pytest.approx(0.5, abs=1e-10)
    assert result.p_minus == pytest.approx(np.sqrt(1.8), abs=1e-10)
    assert result.p_plus == pytest.approx(np.sqrt(1.8), abs=1e-10)
    row = result.as_row()
    assert row['outcome'] == "Transmitted"
    assert np.isnan(row['x_f'])


def test_scattering_channel_offsets():
    result = scatter_1d(gaussian_barrier, (-6.0, 6.0), E=0.9, h=0.05, offsets=(0.0, 0.4))

    assert result.p_plus == pytest.approx(np.sqrt(1.0), abs=1e-10)


def test_scattering_without_incoming_channel():
    with pytest.raises(ScatteringError):
        scatter_1d(gaussian_barrier, (-6.0, 6.0), E=-0.1, h=0.05)


def test_scattering_closed_outgoing_channel():
    """越过势垒但低于出射通道阈值时不给出 NaN 动量"""
    with pytest.raises(ScatteringError):
        scatter_1d(gaussian_barrier, (-6.0, 6.0), E=0.6, h=0.05, offsets=(0.0, 0.7))

    result = scatter_1d(gaussian_barrier, (-6.0, 6.0), E=0.8, h=0.05, offsets=(0.0, 0.7))
    assert result.p_plus == pytest.approx(np.sqrt(0.2), abs=1e-10)


def test_scattering_dichotomy_over_energy_sweep():
    """E > max v 时越垒，否则在 v(x_f) = E 的最左转向点反射"""
    for E in np.linspace(0.05, 1.0, 12):
        result = scatter_1d(gaussian_barrier, (-6.0, 6.0), E=E, h=0.05)
        if E > 0.5:
            assert result.transmitted
            assert result.x_f is None
            assert result.p_minus == pytest.approx(np.sqrt(2.0 * E), abs=1e-10)
        else:
            assert not result.transmitted
            assert result.p_plus is None
            assert result.x_f < 0.0
            assert gaussian_barrier(result.x_f) == pytest.approx(E, abs=1e-10)


def test_wkb_at_initial_time_reproduces_data():
    x0 = np.linspace(-3.0, 3.0, 61)
    h = 0.1
    fan = launch_fan(HamiltonianField.free(), x0, S0=lambda x: 0.5 * x, phi0=lambda x: np.exp(-x ** 2),
                     times=[0.0, 0.5], dS0=lambda x: np.full_like(x, 0.5), d2S0=lambda x: np.zeros_like(x))

    at_nodes = wkb_evaluate(fan, 0.0, x0[5:-5], h)
    np.testing.assert_allclose(at_nodes, np.exp(0.5j * x0[5:-5] / h) * np.exp(-x0[5:-5] ** 2), atol=1e-12)

    between = np.linspace(-2.0, 2.0, 17) + 0.05
    np.testing.assert_allclose(wkb_evaluate(fan, 0.0, between, h),
                               np.exp(0.5j * between / h) * np.exp(-between ** 2), atol=1e-4)


def test_free_packet_translates():
    x0 = np.linspace(-3.0, 3.0, 61)
    fan = launch_fan(HamiltonianField.free(), x0, S0=lambda x: 0.5 * x, phi0=lambda x: np.exp(-x ** 2),
                     times=[0.0, 2.0], dS0=lambda x: np.full_like(x, 0.5), d2S0=lambda x: np.zeros_like(x))

    psi = wkb_evaluate(fan, 2.0, [1.0, 10.0], 0.1)
    assert abs(psi[0]) == pytest.approx(1.0, abs=1e-8)
    assert psi[1] == 0.0


def test_focusing_packet_hits_caustic():
    x0 = np.linspace(-2.0, 2.0, 41)
    fan = launch_fan(HamiltonianField.free(), x0, S0=lambda x: -0.5 * x ** 2, phi0=lambda x: np.exp(-x ** 2),
                     times=[0.0, 0.5, 1.5], dS0=lambda x: -x, d2S0=lambda x: -np.ones_like(x))

    assert np.all(np.isfinite(wkb_evaluate(fan, 0.5, [0.0, 0.3], 0.1)))
    with pytest.raises(CausticEncountered):
        wkb_evaluate(fan, 1.5, [0.0], 0.1)


def test_wkb_constant_phase_gauge():
    """初始相位加常数 c 只让波列整体乘以 e^{ic/h}"""
    x0 = np.linspace(-3.0, 3.0, 61)
    h, c = 0.1, 0.3
    field = HamiltonianField.harmonic(omega=1.0)
    common = dict(phi0=lambda x: np.exp(-x ** 2), times=[0.0, 0.5], dS0=lambda x: np.full_like(x, 0.5),
                  d2S0=lambda x: np.zeros_like(x))
    plain = launch_fan(field, x0, S0=lambda x: 0.5 * x, **common)
    shifted = launch_fan(field, x0, S0=lambda x: 0.5 * x + c, **common)

    xq = np.linspace(-1.5, 1.5, 13)
    np.testing.assert_allclose(wkb_evaluate(shifted, 0.5, xq, h), np.exp(1j * c / h) * wkb_evaluate(plain, 0.5, xq, h),
                               atol=1e-12)


def test_bohr_sommerfeld_action_monotone_in_n():
    """第 n 个能级处的作用量为 h(n+½)，随 n 严格递增"""
    def anharmonic(x):
        x = np.asarray(x)
        return 0.5 * x ** 2 + 0.25 * x ** 4

    h = 0.1
    levels = bohr_sommerfeld(anharmonic, (-3.0, 3.0), h=h, n=list(range(6)))
    actions = np.array([bohr_sommerfeld_action(anharmonic, (-3.0, 3.0), E) for E in levels.energies])

    assert np.all(np.diff(levels.energies) > 0)
    assert np.all(np.diff(actions) > 0)
    np.testing.assert_allclose(actions, h * (np.arange(6) + 0.5), rtol=1e-8)
