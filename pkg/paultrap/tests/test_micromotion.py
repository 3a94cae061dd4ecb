import math

from django.test import SimpleTestCase

from paultrap.core import parse_species
from paultrap.exceptions import TrapValidationError
from paultrap.micromotion import (LineParams, amplitude_for_index, capacitor_impedance, displacement_from_field,
                                  equal_sideband_index, fluorescence_spectrum, inductor_impedance,
                                  micromotion_state, modulation_index, phase_from_path_difference,
                                  phase_imbalance_micromotion, rc_phase_shift, sideband_count)

MG = parse_species('24Mg+')
OMEGA_R = 2 * math.pi * 10e6
OMEGA_RF = 2 * math.pi * 100e6


class MicromotionChainTests(SimpleTestCase):
    def test_stray_field_chain(self):
        state = micromotion_state(MG, OMEGA_R, OMEGA_RF, 500.0, 280e-9, 45.0)
        self.assertAlmostEqual(state.displacement * 1e9, 509, delta=509 * 0.01)
        self.assertAlmostEqual(state.amplitude * 1e9, 72, delta=72 * 0.01)
        self.assertAlmostEqual(state.beta, 1.14, delta=1.14 * 0.03)

    def test_zero_field(self):
        self.assertEqual(displacement_from_field(MG, OMEGA_R, 0.0), 0.0)

    def test_modulation_index(self):
        self.assertAlmostEqual(modulation_index(280e-9, 72e-9, 45.0), 1.14, delta=0.01)
        self.assertAlmostEqual(modulation_index(280e-9, 72e-9, 90.0), 0.0, places=12)

    def test_amplitude_for_index_inverts(self):
        x = amplitude_for_index(280e-9, 1.14, 45.0)
        self.assertAlmostEqual(modulation_index(280e-9, x, 45.0), 1.14, places=12)
        with self.assertRaises(TrapValidationError):
            amplitude_for_index(280e-9, 1.0, 90.0)


class SpectrumTests(SimpleTestCase):
    def setUp(self):
        self.line = LineParams(gamma=2 * math.pi * 1e6, omega_rf=OMEGA_RF, wavelength=280e-9)

    def test_equal_sideband_index(self):
        self.assertAlmostEqual(equal_sideband_index(), 1.4347, delta=1e-3)

    def test_carrier_equals_first_sideband_at_equal_index(self):
        rate = fluorescence_spectrum(self.line, equal_sideband_index())
        self.assertAlmostEqual(rate(0.0) / rate(-OMEGA_RF), 1.0, delta=1e-3)

    def test_no_micromotion_is_a_single_lorentzian(self):
        rate = fluorescence_spectrum(self.line, 0.0)
        self.assertAlmostEqual(rate(0.0), 1.0, places=12)
        self.assertAlmostEqual(rate(self.line.gamma / 2), 0.5, places=12)

    def test_vectorized_detunings(self):
        rate = fluorescence_spectrum(self.line, 1.0)
        values = rate([0.0, -OMEGA_RF, OMEGA_RF])
        self.assertEqual(values.shape, (3,))
        self.assertAlmostEqual(values[1], values[2], places=12)

    def test_truncated_sum_rejected(self):
        with self.assertRaises(TrapValidationError):
            fluorescence_spectrum(self.line, 5.0, n_max=1)

    def test_sideband_count_grows_with_index(self):
        self.assertLess(sideband_count(0.5), sideband_count(5.0))

    def test_line_validation(self):
        with self.assertRaises(TrapValidationError):
            LineParams(gamma=0.0, omega_rf=OMEGA_RF, wavelength=280e-9)


class RfPhaseTests(SimpleTestCase):
    def test_path_difference(self):
        self.assertAlmostEqual(phase_from_path_difference(0.01, 2 * math.pi * 35e6), 0.42, delta=0.005)
        self.assertEqual(phase_from_path_difference(0.0, 2 * math.pi * 35e6), 0.0)

    def test_phase_imbalance_micromotion(self):
        omega = 2 * math.pi * 35e6
        x0 = phase_imbalance_micromotion(MG, 2000.0 * 80.0, 2.2, omega)
        self.assertAlmostEqual(x0 * 1e9, 510, delta=510 * 0.01)
        self.assertAlmostEqual(modulation_index(280e-9, x0, 45.0), 8.1, delta=0.05)
        self.assertEqual(phase_imbalance_micromotion(MG, 1.6e5, 0.0, omega), 0.0)

    def test_large_phase_warns(self):
        with self.assertLogs('paultrap.micromotion', level='WARNING'):
            phase_imbalance_micromotion(MG, 1.6e5, 20.0, 2 * math.pi * 35e6)

    def test_low_pass_divider(self):
        omega = 2 * math.pi * 3e6
        phase, magnitude = rc_phase_shift(1e3, capacitor_impedance(820e-12, omega))
        self.assertAlmostEqual(phase, -math.degrees(math.atan(omega * 1e3 * 820e-12)), places=9)
        self.assertAlmostEqual(magnitude, 1 / math.sqrt(1 + (omega * 1e3 * 820e-12) ** 2), places=12)

    def test_small_rc_lag_on_rf_line(self):
        omega = 2 * math.pi * 35e6
        capacitance = 0.0314 / (omega * 150.0)
        phase, magnitude = rc_phase_shift(150.0, capacitor_impedance(capacitance, omega))
        self.assertLess(phase, 0.0)
        self.assertAlmostEqual(abs(phase), 1.8, delta=0.01)
        self.assertAlmostEqual(magnitude, 1 / math.sqrt(1 + 0.0314 ** 2), places=12)

    def test_high_pass_divider_leads(self):
        omega = 2 * math.pi * 35e6
        phase, _ = rc_phase_shift(capacitor_impedance(1e-15, omega), 1.0)
        self.assertAlmostEqual(phase, 90.0, delta=0.01)

    def test_zero_total_impedance_rejected(self):
        with self.assertRaises(TrapValidationError):
            rc_phase_shift(1j, -1j)

    def test_series_inductor_lags(self):
        omega = 2 * math.pi * 35e6
        phase, _ = rc_phase_shift(inductor_impedance(1e-6, omega), 50.0)
        self.assertAlmostEqual(phase, -math.degrees(math.atan(omega * 1e-6 / 50.0)), places=9)
