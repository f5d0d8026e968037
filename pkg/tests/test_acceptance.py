import unittest
import os
import sys

import numpy as np

# Add the root directory to the path so we can import our modules
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from omlrt.observables import observables_grid, spectral_and_reflection, local_extrema, window_half_width
from omlrt.presets import PRESETS, OMEGA_M
from omlrt.response import stability
from omlrt.timedomain import integrate_green_eom, log_norm_slope


def preset_values(name):
    spec = PRESETS[name].spec
    return spec.params, observables_grid(spec.params, spec.grid())


class TestNormalModeSplitting(unittest.TestCase):
    """
    Strong coupling, g = 2 kappa, red detuning.
    """

    @classmethod
    def setUpClass(cls):
        cls.params, cls.values = preset_values('fig2')
        cls.rwa_params, cls.rwa_values = preset_values('fig2-rwa')

    def test_two_peaks_and_one_dip(self):
        d_as = self.values['d_as']
        maxima, minima = local_extrema(d_as)
        self.assertEqual(len(maxima), 2)
        self.assertEqual(len(minima), 1)
        omega_min = self.values['omega_pc'][minima[0]]
        # counter-rotating terms pull the dip below omega_m
        self.assertTrue(4.2 <= omega_min <= 5.0)
        self.assertLessEqual(d_as[minima[0]], 0.05 * np.max(d_as))

    def test_transparent_at_mechanical_frequency(self):
        point = spectral_and_reflection(self.params, OMEGA_M)
        self.assertLessEqual(abs(point.rho), 1e-2)
        self.assertGreaterEqual(point.r_power, 0.99)
        self.assertLess(point.d_as, 0.1 * np.max(self.values['d_as']))

    def test_rwa_dip_at_mechanical_frequency(self):
        d_as = self.rwa_values['d_as']
        maxima, minima = local_extrema(d_as)
        self.assertEqual(len(maxima), 2)
        self.assertEqual(len(minima), 1)
        self.assertAlmostEqual(self.rwa_values['omega_pc'][minima[0]], OMEGA_M, delta=0.05)
        self.assertLessEqual(d_as[minima[0]], 0.05 * np.max(d_as))

        point = spectral_and_reflection(self.rwa_params, OMEGA_M)
        self.assertLessEqual(abs(point.rho), 1e-2)
        self.assertGreaterEqual(point.r_power, 0.99)

    def test_rwa_has_no_stokes_sideband(self):
        self.assertTrue(np.all(self.rwa_values['d_s'] == 0))


class TestTransparencyWindow(unittest.TestCase):
    """
    Weak coupling, g = 0.005 kappa, where the window width is set by the
    optomechanical damping 4 g^2 / kappa plus gamma_m.
    """

    @classmethod
    def setUpClass(cls):
        cls.params, cls.values = preset_values('fig4-red')

    def test_reflection_at_mechanical_frequency(self):
        # unit cooperativity halves the port coupling seen on resonance
        self.assertAlmostEqual(spectral_and_reflection(self.params, OMEGA_M).r_power, 0.5625, delta=2e-3)

    def test_reflection_across_the_window(self):
        for offset in (-1e-4, 1e-4):
            self.assertTrue(0.38 <= spectral_and_reflection(self.params, OMEGA_M + offset).r_power <= 0.43)
        for offset in (-1e-3, 1e-3):
            self.assertLess(spectral_and_reflection(self.params, OMEGA_M + offset).r_power, 0.26)

    def test_approximate_reflection_outside_window(self):
        for offset in (-0.05, 0.05):
            point = spectral_and_reflection(self.params, OMEGA_M + offset)
            self.assertAlmostEqual(point.r_power_approx, 0.68, delta=0.05)

    def test_window_width(self):
        r_power = self.values['r_power']
        center = int(np.argmax(r_power))
        self.assertAlmostEqual(self.values['omega_pc'][center], OMEGA_M, delta=1e-4)
        level = (r_power[center] + 0.25) / 2
        half_width = window_half_width(self.values['omega_pc'], r_power, center, level)
        expected = (4 * self.params.g ** 2 / self.params.kappa + self.params.gamma_m) / 2
        self.assertTrue(expected / 2 <= half_width <= 2 * expected)


class TestMechanicalResponse(unittest.TestCase):
    """
    The mechanical amplitude stays finite where the optical one vanishes.
    """

    @classmethod
    def setUpClass(cls):
        cls.params, cls.values = preset_values('fig6-red')

    def test_optical_dip_mechanical_plateau(self):
        point = spectral_and_reflection(self.params, OMEGA_M)
        self.assertLessEqual(point.d_as, 0.05 * point.d_badag)
        self.assertGreaterEqual(point.d_badag, 0.5 * np.max(self.values['d_badag']))

    def test_maxima_paired_with_optical_peaks(self):
        omegas = self.values['omega_pc']
        maxima, _ = local_extrema(self.values['d_badag'])
        self.assertEqual(len(maxima), 2)
        for half in (omegas < OMEGA_M, omegas > OMEGA_M):
            mechanical_peak = omegas[half][np.argmax(self.values['d_badag'][half])]
            optical_peak = omegas[half][np.argmax(self.values['d_as'][half])]
            self.assertLessEqual(abs(mechanical_peak - optical_peak), 0.25)


class TestStabilityLedger(unittest.TestCase):

    def test_verdicts(self):
        for name in ('fig2', 'fig3-red', 'fig4-red', 'fig6-red'):
            self.assertTrue(stability(PRESETS[name].spec.params).stable, name)
        for name in ('fig3-blue', 'fig6-blue'):
            report = stability(PRESETS[name].spec.params)
            self.assertFalse(report.stable, name)
            self.assertGreater(report.margin, 0, name)

    def test_time_domain_decays_for_stable_sets(self):
        for name in ('fig2', 'fig4-red', 'fig6-red'):
            series = integrate_green_eom(PRESETS[name].spec.params)
            with self.subTest(preset=name):
                self.assertLess(log_norm_slope(series), 0)

    def test_no_nan_on_preset_grids(self):
        for name in PRESETS:
            _, values = preset_values(name)
            with self.subTest(preset=name):
                for column in ('d_as', 'd_s', 'rho', 'r_power', 'r_power_approx', 'd_badag', 'd_ba'):
                    self.assertFalse(np.any(np.isnan(values[column])))


if __name__ == '__main__':
    unittest.main()
