import unittest
import os
import sys
import shutil
import tempfile
import dataclasses

# Add the root directory to the path so we can import our modules
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from omlrt.errors import ConfigError, SingularDetuningError, ParameterError
from omlrt.models import SystemParams
from omlrt.params import (
    validate, require_valid, mean_fields, effective_detuning, normalize, parse_config_text, load_config,
)

FIG2 = SystemParams(delta=5.0, omega_m=5.0, g=2.0, gamma_m=1e-4, kappa_cp=0.25)


class TestValidation(unittest.TestCase):
    """
    Tests for parameter validation.
    """

    def test_figure_parameters_pass(self):
        """The standard strong-coupling set is valid."""
        report = validate(FIG2)
        self.assertTrue(report.passed)
        self.assertEqual(report.violations, ())

    def test_zero_mechanical_damping_fails(self):
        report = validate(dataclasses.replace(FIG2, gamma_m=0.0))
        self.assertFalse(report.passed)
        self.assertIn("gamma_m must be > 0", report.violations)

    def test_port_coupling_above_kappa_fails(self):
        report = validate(dataclasses.replace(FIG2, kappa_cp=2.0))
        self.assertFalse(report.passed)
        self.assertIn("kappa_cp must be ≤ kappa", report.violations)

    def test_several_violations_are_all_listed(self):
        params = dataclasses.replace(FIG2, omega_m=-1.0, eps_t=-1.0, g=float('nan'))
        report = validate(params)
        self.assertFalse(report.passed)
        self.assertIn("omega_m must be > 0", report.violations)
        self.assertIn("eps_t must be >= 0", report.violations)
        self.assertIn("g must be finite", report.violations)

    def test_validation_is_idempotent(self):
        first = validate(FIG2)
        second = validate(FIG2)
        self.assertEqual(first, second)
        self.assertEqual(FIG2.g_b, 2.0)
        self.assertEqual(FIG2.g_t, 2.0)

    def test_require_valid_raises(self):
        with self.assertRaises(ParameterError):
            require_valid(dataclasses.replace(FIG2, kappa=0.0))

    def test_report_serialises(self):
        report = validate(dataclasses.replace(FIG2, gamma_m=0.0))
        self.assertEqual(report.to_dict(), {'passed': False, 'violations': ["gamma_m must be > 0"]})


class TestMeanFields(unittest.TestCase):

    def test_direct_ratio(self):
        fields = mean_fields(eta=5.0, g0=0.1, delta=5.0, omega_m=5.0, gamma_m=1e-4)
        self.assertEqual(fields.alpha, -1.0)
        self.assertAlmostEqual(fields.g_eff, -0.1, places=15)
        self.assertAlmostEqual(abs(fields.beta - 0.1 / complex(5.0, -5e-5)), 0.0, places=16)

    def test_undriven_cavity(self):
        fields = mean_fields(eta=0.0, g0=0.1, delta=5.0, omega_m=5.0, gamma_m=1e-4)
        self.assertEqual(fields.alpha, 0)
        self.assertEqual(fields.beta, 0)
        self.assertEqual(fields.g_eff, 0)

    def test_zero_detuning_is_singular(self):
        with self.assertRaises(SingularDetuningError):
            mean_fields(eta=1.0, g0=0.1, delta=0.0, omega_m=5.0, gamma_m=1e-4)

    def test_homogeneity_in_pump(self):
        """Scaling eta by s scales alpha and g_eff by s and beta by s^2."""
        base = mean_fields(eta=2.0, g0=0.3, delta=-4.0, omega_m=5.0, gamma_m=0.01)
        scaled = mean_fields(eta=6.0, g0=0.3, delta=-4.0, omega_m=5.0, gamma_m=0.01)
        self.assertAlmostEqual(abs(scaled.alpha - 3 * base.alpha), 0.0, places=14)
        self.assertAlmostEqual(scaled.g_eff, 3 * base.g_eff, places=14)
        self.assertAlmostEqual(abs(scaled.beta - 9 * base.beta), 0.0, places=13)

    def test_effective_detuning(self):
        self.assertEqual(effective_detuning(10.0, 5.0, 0.0, 5.0), 5.0)
        self.assertAlmostEqual(effective_detuning(10.0, 5.0, 1.0, 5.0), 4.6, places=14)


class TestConfig(unittest.TestCase):
    """
    Tests for the key-value parameter format.
    """

    @classmethod
    def setUpClass(cls):
        cls.temp_dir = tempfile.mkdtemp()

    @classmethod
    def tearDownClass(cls):
        if os.path.exists(cls.temp_dir):
            shutil.rmtree(cls.temp_dir)

    def test_parse_kappa_units(self):
        text = """
        # strong coupling
        delta = 5
        omega_m = 5
        g = 2          # effective coupling
        gamma_m = 1e-4
        kappa_cp = 0.25
        zeta = 1e-3+2e-4j
        omega_min = 2
        omega_max = 8
        n_points = 11
        outputs = d_as, d_s
        """
        params, sweep = parse_config_text(text)
        self.assertEqual(params.g, 2.0)
        self.assertEqual(params.eps_t, 1.0)
        self.assertEqual(params.zeta, complex(1e-3, 2e-4))
        self.assertEqual(sweep, {'omega_min': 2.0, 'omega_max': 8.0, 'n_points': 11, 'outputs': ('d_as', 'd_s')})

    def test_parse_raw_units_divides_by_kappa(self):
        text = "units = raw\nkappa = 2\ndelta = 10\nomega_m = 10\ng = 1\ngamma_m = 2e-4\nkappa_cp = 0.5\nomega_max = 16\n"
        params, sweep = parse_config_text(text)
        self.assertEqual(params.kappa, 1.0)
        self.assertEqual(params.delta, 5.0)
        self.assertEqual(params.g, 0.5)
        self.assertEqual(params.kappa_cp, 0.25)
        self.assertEqual(sweep['omega_max'], 8.0)

    def test_kappa_units_fix_kappa_to_one(self):
        base = "delta = 5\nomega_m = 5\ng = 1\ngamma_m = 1e-4\nkappa_cp = 0.25\n"
        params, _ = parse_config_text(base + "kappa = 1\n")
        self.assertEqual(params.kappa, 1.0)
        with self.assertRaises(ConfigError):
            parse_config_text(base + "kappa = 2\n")
        with self.assertRaises(ConfigError):
            parse_config_text(base + "units = kappa\nkappa = 0.5\n")

    def test_unknown_key_rejected(self):
        with self.assertRaises(ConfigError):
            parse_config_text("delta = 5\nomega_m = 5\ng = 1\ngamma_m = 1\nkappa_cp = 0.1\ntemperature = 3\n")

    def test_missing_key_rejected(self):
        with self.assertRaises(ConfigError):
            parse_config_text("delta = 5\nomega_m = 5\n")

    def test_bad_number_rejected(self):
        with self.assertRaises(ConfigError):
            parse_config_text("delta = five\n")

    def test_line_without_equals_rejected(self):
        with self.assertRaises(ConfigError):
            parse_config_text("delta 5\n")

    def test_normalize_requires_positive_kappa(self):
        with self.assertRaises(ConfigError):
            normalize({'delta': 1.0}, 0.0)

    def test_load_config_from_file(self):
        path = os.path.join(self.temp_dir, 'params.cfg')
        with open(path, 'w') as f:
            f.write("delta = -5\nomega_m = 5\ng = 0.5\ngamma_m = 1e-4\nkappa_cp = 0.25\neps_t = 0\n")
        params, sweep = load_config(path)
        self.assertEqual(params.delta, -5.0)
        self.assertEqual(params.g_t, 0.0)
        self.assertEqual(sweep, {})

    def test_load_config_missing_file(self):
        with self.assertRaises(ConfigError):
            load_config(os.path.join(self.temp_dir, 'nope.cfg'))


if __name__ == '__main__':
    unittest.main()
