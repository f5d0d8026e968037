import unittest
import os
import sys
import dataclasses

import numpy as np

# Add the root directory to the path so we can import our modules
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from omlrt.errors import ParameterError
from omlrt.models import SystemParams
from omlrt.presets import PRESETS
from omlrt.observables import (
    greens_at, greens_grid, heaviside, sideband_amplitudes, observables_grid, spectral_and_reflection,
    sweep_observables, optical_response, mechanical_response, lab_frame_signal, causality_check,
    local_extrema, window_half_width,
)

FIG2 = PRESETS['fig2'].spec.params
FIG3_RED = PRESETS['fig3-red'].spec.params
UNCOUPLED = SystemParams(delta=5.0, omega_m=5.0, g=0.0, gamma_m=1e-4, kappa_cp=0.25)


class TestGreensFunctions(unittest.TestCase):

    def test_bare_cavity_at_resonance(self):
        greens = greens_at(UNCOUPLED, 5.0)
        self.assertAlmostEqual(abs(greens.g_aadag - (-2j)), 0.0, places=14)
        self.assertEqual(greens.g_aa, 0)
        self.assertEqual(greens.g_badag, 0)

    def test_grid_matches_pointwise(self):
        omegas = np.array([-6.0, -1.5, 0.25, 4.0, 5.5])
        grid = greens_grid(FIG3_RED, omegas)
        self.assertFalse(np.any(grid['singular']))
        for i, omega in enumerate(omegas):
            point = greens_at(FIG3_RED, omega)
            for key in ('g_aadag', 'g_aa', 'g_badag', 'g_ba'):
                self.assertAlmostEqual(abs(getattr(point, key) - grid[key][i]), 0.0, places=12)

    def test_rwa_has_no_counter_rotating_green(self):
        grid = greens_grid(PRESETS['fig2-rwa'].spec.params, np.linspace(-8, 8, 161))
        self.assertTrue(np.all(grid['g_aa'] == 0))

    def test_heaviside_half_at_zero(self):
        np.testing.assert_array_equal(heaviside(np.array([-1.0, 0.0, 2.0])), [0.0, 0.5, 1.0])

    def test_invalid_params_rejected(self):
        with self.assertRaises(ParameterError):
            sideband_amplitudes(dataclasses.replace(FIG2, gamma_m=-1.0), 1.0)


class TestObservables(unittest.TestCase):
    """
    Tests for sidebands, spectral function and reflection.
    """

    def test_uncoupled_reflection_at_resonance(self):
        point = spectral_and_reflection(UNCOUPLED, 5.0)
        self.assertAlmostEqual(point.rho, 4 / np.pi, places=14)
        self.assertAlmostEqual(abs(point.r_complex - 0.5), 0.0, places=14)
        self.assertAlmostEqual(point.r_power, 0.25, places=14)
        self.assertAlmostEqual(point.r_power_approx, 1 - 1 / np.pi, places=14)

    def test_reflection_identity(self):
        """R = 1 - pi kappa_cp rho + kappa_cp^2 |G|^2 holds at every point."""
        for name in ('fig2', 'fig3-red', 'fig4-red', 'fig6-blue'):
            spec = PRESETS[name].spec
            values = observables_grid(spec.params, spec.grid())
            k = spec.params.kappa_cp
            expected = 1 - np.pi * k * values['rho'] + k ** 2 * np.abs(values['g_aadag']) ** 2
            with self.subTest(preset=name):
                self.assertLessEqual(np.max(np.abs(values['r_power'] - expected)), 1e-12)

    def test_sidebands_equal_at_zero_detuning(self):
        d_as, d_s = sideband_amplitudes(FIG2, 0.0)
        self.assertEqual(d_as, d_s)
        self.assertGreater(d_as, 0)

    def test_sidebands_swap_with_sign(self):
        """Positive detuning reads anti-Stokes from G_aadag, negative from G_aa."""
        d_as, d_s = sideband_amplitudes(FIG3_RED, 4.5)
        self.assertAlmostEqual(d_as, abs(greens_at(FIG3_RED, 4.5).g_aadag), places=14)
        self.assertAlmostEqual(d_s, abs(greens_at(FIG3_RED, -4.5).g_aa), places=14)
        d_as, d_s = sideband_amplitudes(FIG3_RED, -4.5)
        self.assertAlmostEqual(d_as, abs(greens_at(FIG3_RED, 4.5).g_aa), places=14)
        self.assertAlmostEqual(d_s, abs(greens_at(FIG3_RED, -4.5).g_aadag), places=14)

    def test_grid_matches_scalar_sidebands(self):
        omegas = np.array([-3.0, 0.0, 2.5, 5.0])
        values = observables_grid(FIG2, omegas)
        for i, omega in enumerate(omegas):
            d_as, d_s = sideband_amplitudes(FIG2, omega)
            self.assertAlmostEqual(values['d_as'][i], d_as, places=12)
            self.assertAlmostEqual(values['d_s'][i], d_s, places=12)

    def test_rwa_has_no_stokes_for_positive_detuning(self):
        spec = PRESETS['fig2-rwa'].spec
        values = observables_grid(spec.params, spec.grid())
        self.assertTrue(np.all(values['d_s'] == 0))

    def test_uncoupled_mechanics_silent(self):
        values = observables_grid(UNCOUPLED, np.linspace(0, 10, 101))
        self.assertTrue(np.all(values['d_badag'] == 0))
        self.assertTrue(np.all(values['d_ba'] == 0))

    def test_sweep_rows(self):
        rows = sweep_observables(FIG2, np.linspace(2, 8, 7))
        self.assertEqual(len(rows), 7)
        point, greens = rows[3]
        self.assertEqual(point.omega_pc, 5.0)
        self.assertAlmostEqual(point.d_as, abs(greens.g_aadag), places=14)
        self.assertIn('r_complex', point.to_dict())

    def test_spectral_function_is_positive_for_red_detuning(self):
        spec = PRESETS['fig2'].spec
        values = observables_grid(spec.params, spec.grid())
        self.assertTrue(np.all(np.isfinite(values['rho'])))
        self.assertGreater(np.max(values['rho']), 0)


class TestResponseSignals(unittest.TestCase):

    def test_optical_sidebands(self):
        params = dataclasses.replace(FIG3_RED, zeta=complex(1e-3, 2e-4))
        signal = optical_response(params, alpha=2.0, omega_pc=5.5)
        expected_neg = complex(1e-3, -2e-4) * greens_at(params, 5.5).g_aadag
        expected_pos = complex(1e-3, 2e-4) * greens_at(params, -5.5).g_aa
        self.assertAlmostEqual(abs(signal.amp_neg - expected_neg), 0.0, places=16)
        self.assertAlmostEqual(abs(signal.amp_pos - expected_pos), 0.0, places=16)
        self.assertEqual(signal.mean_offset, 2.0)

    def test_mechanical_silent_without_coupling(self):
        signal = mechanical_response(UNCOUPLED, beta=0.1j, omega_pc=5.0)
        self.assertEqual(signal.amp_neg, 0)
        self.assertEqual(signal.amp_pos, 0)

    def test_lab_frame_signal(self):
        signal = optical_response(FIG3_RED, alpha=1.0, omega_pc=5.0)
        trace = lab_frame_signal(signal, omega_c=0.0, times=[0.0, 0.3])
        self.assertAlmostEqual(abs(trace[0] - (1.0 + signal.amp_neg + signal.amp_pos)), 0.0, places=15)
        expected = 1.0 + signal.amp_neg * np.exp(-1.5j) + signal.amp_pos * np.exp(1.5j)
        self.assertAlmostEqual(abs(trace[1] - expected), 0.0, places=15)

    def test_causality(self):
        self.assertLessEqual(causality_check(FIG3_RED), 1e-3)
        self.assertLessEqual(causality_check(UNCOUPLED), 1e-12)


class TestPeakHelpers(unittest.TestCase):

    def test_local_extrema(self):
        x = np.linspace(0, 4 * np.pi, 2001)
        maxima, minima = local_extrema(np.sin(x))
        self.assertEqual(len(maxima), 2)
        self.assertEqual(len(minima), 2)
        self.assertAlmostEqual(x[maxima[0]], np.pi / 2, places=2)

    def test_half_width_of_lorentzian(self):
        x = np.linspace(-5, 5, 10001)
        y = 1 / (1 + x ** 2)
        self.assertAlmostEqual(window_half_width(x, y, 5000, 0.5), 1.0, places=5)

    def test_half_width_needs_crossing(self):
        x = np.linspace(-1, 1, 11)
        with self.assertRaises(ValueError):
            window_half_width(x, np.ones(11), 5, 0.5)


if __name__ == '__main__':
    unittest.main()
