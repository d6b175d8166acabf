"""
谱类命令：bands、reduce、bound-states、regimes
"""

from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..bloch import (
    DEFAULT_N_PW,
    DEFAULT_P_NODES,
    BlochEffectiveHamiltonian,
    BlochTerm,
    band_gap_check,
    bloch_family,
    compute_bloch_bands,
    effective_mass,
)
from ..bloch.effective import DEFAULT_NY as DEFAULT_BLOCH_NY
from ..factory import ModelFactory
from ..reduction import (
    EssentialHamiltonian,
    Regime,
    assemble_essential,
    build_effective_model,
    classify_regime,
    correction_chi1,
    correction_L1,
    effective_hamiltonian,
    geometric_potential,
    required_expansion_order,
    solve_reduced_stationary,
    waveguide_family,
)
from ..semiclassics import as_potential, bohr_sommerfeld, spectral_series
from .base import BaseProcessor, potential_field


class BandsProcessor(BaseProcessor):
    """横向能级支或Bloch能带"""

    command = "bands"

    def execute(self) -> Dict[str, Any]:
        K = self.config.get('bands', {}).get('K', 3)
        if self.config['problem'] == 'bloch':
            return self._bloch(K)

        setup = self.waveguide(K)
        branches = setup.branches[:K]
        header = ['x'] + [f'eps_{b.nu}' for b in branches]
        self.write_table('bands.csv', header,
                         ([x] + [b.eps[i] for b in branches] for i, x in enumerate(setup.x_grid.points)))
        return {
            'K': K,
            'y_window': [setup.y_grid.start, setup.y_grid.stop, setup.y_grid.n],
            'gaps': {str(b.nu): b.gap_above for b in branches},
        }

    def _bloch(self, K: int) -> Dict[str, Any]:
        grid = self.config['grid']
        x_grid = ModelFactory.x_grid(self.config)
        pot = ModelFactory.periodic_potential(self.config, x_grid)
        bands = compute_bloch_bands(pot, K, n_P=grid.get('P_nodes', DEFAULT_P_NODES),
                                    n_pw=grid.get('n_pw', DEFAULT_N_PW), max_workers=self.threads)

        header = ['x', 'P'] + [f'E_{band.nu}' for band in bands]
        rows = ([x, P] + [band.energies[k, i] for band in bands]
                for i, x in enumerate(x_grid.points) for k, P in enumerate(bands[0].P_grid))
        self.write_table('bands.csv', header, rows)
        self.write_table('edges.csv', ['x', 'nu', 'lower', 'upper'],
                         ([x, band.nu, band.lower[i], band.upper[i]]
                          for band in bands for i, x in enumerate(x_grid.points)))

        x_mid = float(x_grid.points[x_grid.n // 2])
        return {
            'K': K,
            'gaps': {str(band.nu): band.gap_above for band in bands},
            'effective_mass_1': effective_mass(bands[0], x_mid, pot.U_at(x_mid)),
        }


class ReduceProcessor(BaseProcessor):
    """有效哈密顿量、L₁(x, 0) 与几何势"""

    command = "reduce"

    def execute(self) -> Dict[str, Any]:
        section = self.config.get('reduce', {})
        nu = section.get('nu', 1)
        K = max(section.get('K', nu + 1), nu)
        corrections = section.get('corrections', True)
        if self.config['problem'] == 'bloch':
            return self._bloch(nu, K, corrections)
        return self._waveguide(nu, K, corrections)

    def _waveguide(self, nu: int, K: int, corrections: bool) -> Dict[str, Any]:
        setup = self.waveguide(K)
        branch = setup.branches[nu - 1]
        v_ext = ModelFactory.external_potential(self.config)
        heff = effective_hamiltonian(branch, v_ext)
        family = waveguide_family(setup.model, setup.y_grid, v_ext)

        summary: Dict[str, Any] = {'nu': nu}
        L1 = None
        if corrections:
            L1 = correction_L1(branch, family, heff)
            chi1 = correction_chi1(branch, family, heff, L1)
            summary['chi1_solvability'] = float(chi1.solvability.max())
            summary['chi1_residual'] = chi1.residual

        curvature = ModelFactory.curvature(self.config, setup.x_grid)
        G = geometric_potential(curvature) if curvature is not None else np.zeros(setup.x_grid.n)
        mu, h = ModelFactory.scales(self.config)
        model = build_effective_model(heff, mu, h=h, L1=L1, G=G, regime=self.config.get('regime'))
        essential = assemble_essential(model)

        l1_values = L1.values(0.0) if L1 is not None else np.zeros(setup.x_grid.n, dtype=complex)
        rows = zip(setup.x_grid.points, heff.potential, l1_values.real, l1_values.imag, G)
        self.write_table('reduce.csv', ['x', 'H_eff', 'L1_re', 'L1_im', 'G'], rows)

        x_mid = float(setup.x_grid.points[setup.x_grid.n // 2])
        summary.update({
            'regime': model.regime.value,
            'mu': mu,
            'h': h,
            'required_order': required_expansion_order(model.regime),
            'zero_order': float(np.real(essential.zero_order)),
            'kinetic': essential.kinetic,
            'symmetry_defect': family.symmetry_defect(0.0, x_mid, seed=self.config.get('seed', 0)),
        })
        return summary

    def _bloch(self, nu: int, K: int, corrections: bool) -> Dict[str, Any]:
        grid = self.config['grid']
        n_pw = grid.get('n_pw', DEFAULT_N_PW)
        ny = grid.get('ny', DEFAULT_BLOCH_NY)
        x_grid = ModelFactory.x_grid(self.config)
        pot = ModelFactory.periodic_potential(self.config, x_grid)
        bands = compute_bloch_bands(pot, K, n_P=grid.get('P_nodes', DEFAULT_P_NODES), n_pw=n_pw,
                                    max_workers=self.threads)
        gap = band_gap_check(bands, nu, gap_tol=self.config['bloch'].get('gap_tol', 1e-3))

        heff = BlochEffectiveHamiltonian(pot, nu, band=bands[nu - 1], n_pw=n_pw)
        if corrections:
            l1_values = correction_L1(BlochTerm(pot, nu, ny=ny, n_pw=n_pw), bloch_family(pot, ny), heff).values(0.0)
        else:
            l1_values = np.zeros(x_grid.n, dtype=complex)
        rows = ([x, heff.at_node(0.0, i), l1_values[i].real, l1_values[i].imag, 0.0]
                for i, x in enumerate(x_grid.points))
        self.write_table('reduce.csv', ['x', 'H_eff', 'L1_re', 'L1_im', 'G'], rows)

        mu, h = ModelFactory.scales(self.config)
        regime = classify_regime(mu, h)
        return {
            'nu': nu,
            'regime': regime.value,
            'mu': mu,
            'h': h,
            'required_order': required_expansion_order(regime),
            'band_gap': gap,
        }


class BoundStatesProcessor(BaseProcessor):
    """Bohr–Sommerfeld 谱级数与直接一维本征值"""

    command = "bound-states"

    def execute(self) -> Dict[str, Any]:
        section = self.config['bound_states']
        nu = section.get('nu', 1)
        method = section.get('method', 'bohr_sommerfeld')
        potential, x_grid, h = self.effective_potential(nu)
        summary: Dict[str, Any] = {'nu': nu, 'method': method, 'h': h}

        if method in ('bohr_sommerfeld', 'both'):
            levels = bohr_sommerfeld(potential, (x_grid.start, x_grid.stop), h, n=section.get('n'),
                                     window=section.get('window'))
            generator = ModelFactory.generator(section.get('generator'))
            if generator is None:
                rows = ([nu, n, 0, E, 0.0, E] for n, E in zip(levels.n, levels.energies))
            else:
                field = potential_field(potential).with_generator(generator)
                series = spectral_series(field, levels, nu)
                rows = ([r['nu'], r['n'], r['j'], r['E'], r['beta'], r['E_shifted']] for r in series.rows())
            self.write_table('bohr_sommerfeld.csv', ['nu', 'n', 'j', 'E', 'beta', 'E_shifted'], rows)
            summary['levels'] = len(levels)

        if method in ('direct', 'both'):
            essential, regime = self._essential(nu, x_grid, potential, h)
            numbers, energies = self._direct(essential, section)
            self.write_table('direct.csv', ['nu', 'n', 'E'], ([nu, n, E] for n, E in zip(numbers, energies)))
            summary['direct_levels'] = len(energies)
            if regime is not None:
                summary['regime'] = regime.value
        return summary

    def _essential(self, nu: int, x_grid, potential, h: float) -> Tuple[EssentialHamiltonian, Optional[Regime]]:
        if self.config['problem'] == 'effective':
            samples = np.asarray(as_potential(potential)(x_grid.points), dtype=float) + np.zeros(x_grid.n)
            # 给定的一维势按 h = μ 的短波方程处理，不做重标
            return EssentialHamiltonian(x_grid=x_grid, kinetic=0.5, potential=samples, c1=np.zeros(x_grid.n),
                                        zero_order=0.0, h=h, energy_scale=1.0, regime=Regime.SHORT_WAVE), None

        setup = self.waveguide(nu + 1)
        heff = effective_hamiltonian(setup.branches[nu - 1], ModelFactory.external_potential(self.config))
        curvature = ModelFactory.curvature(self.config, setup.x_grid)
        G = geometric_potential(curvature) if curvature is not None else None
        mu, h_red = ModelFactory.scales(self.config)
        model = build_effective_model(heff, mu, h=h_red, G=G, regime=self.config.get('regime'))
        return assemble_essential(model), model.regime

    @staticmethod
    def _direct(essential: EssentialHamiltonian, section: Dict[str, Any]) -> Tuple[List[int], np.ndarray]:
        """返回 (量子数, 原能量尺度的本征值)"""
        if 'n' in section:
            numbers = [int(n) for n in section['n']]
            spectrum = solve_reduced_stationary(essential, count=max(numbers) + 1)
            return numbers, spectrum.physical[numbers]
        lo, hi = section['window']
        offset = float(np.real(essential.zero_order))
        window = ((lo - offset) / essential.energy_scale, (hi - offset) / essential.energy_scale)
        spectrum = solve_reduced_stationary(essential, window=window)
        return list(range(len(spectrum.physical))), spectrum.physical


class RegimesProcessor(BaseProcessor):
    """μ–h 区间分类表"""

    command = "regimes"

    def execute(self) -> Dict[str, Any]:
        mu = float(self.config['mu'])
        rows = []
        for h in self.config['regimes']['h_values']:
            regime = classify_regime(mu, h)
            rows.append([mu, h, np.log(h) / np.log(mu), regime.value, required_expansion_order(regime)])
        self.write_table('regimes.csv', ['mu', 'h', 'exponent', 'regime', 'required_order'], rows)
        return {'mu': mu, 'regimes': [row[3] for row in rows]}
