import math
from pathlib import Path

from django.test import SimpleTestCase

from paultrap.core import parse_species
from paultrap.documents import budget_from_dict, read_json
from paultrap.exceptions import TrapValidationError
from paultrap.noise import (BudgetSource, CouplingConstants, NoiseKind, NoiseSpec, ResonatorLine,
                            electrode_noise_heating, heating_budget, heating_rate_from_se, johnson_voltage_psd,
                            patch_field, psd_dbm_per_hz, rc_attenuation, relative_psd, resonator_filter_attenuation,
                            rfam_axial_heating, rfam_radial_heating, se_from_heating_rate)

DATA_DIR = Path(__file__).resolve().parent.parent / 'data'
MG = parse_species('24Mg+')
OMEGA_Z = 2 * math.pi * 3e6


class ConversionTests(SimpleTestCase):
    def test_field_noise_to_heating(self):
        rate = heating_rate_from_se(MG, OMEGA_Z, 1.23e-11)
        self.assertAlmostEqual(rate * 1e-3, 1.0, delta=0.01)

    def test_round_trip(self):
        for s_e in (1e-14, 3.3e-11, 2e-9):
            with self.subTest(s_e=s_e):
                back = se_from_heating_rate(MG, OMEGA_Z, heating_rate_from_se(MG, OMEGA_Z, s_e))
                self.assertAlmostEqual(back / s_e, 1.0, places=12)

    def test_negative_inputs_rejected(self):
        with self.assertRaises(TrapValidationError):
            heating_rate_from_se(MG, OMEGA_Z, -1.0)
        with self.assertRaises(TrapValidationError):
            heating_rate_from_se(MG, 0.0, 1.0)


class FilterTests(SimpleTestCase):
    def test_rc_attenuation(self):
        self.assertAlmostEqual(1.0 / rc_attenuation(OMEGA_Z, 1e3, 820e-12), 240, delta=2.4)

    def test_johnson_behind_filter(self):
        s_v = johnson_voltage_psd(1e3, 300.0)
        rate = electrode_noise_heating(MG, OMEGA_Z, s_v, filter_rc=(1e3, 820e-12), c_e_component=457.0,
                                       n_electrodes=4)
        self.assertAlmostEqual(rate * 1e-3, 0.005, delta=0.0005)

    def test_resonator_attenuation_is_symmetric(self):
        omega0 = 2 * math.pi * 70e6
        above = resonator_filter_attenuation(omega0 + 2 * math.pi * 3e6, omega0, 80.0)
        below = resonator_filter_attenuation(omega0 - 2 * math.pi * 3e6, omega0, 80.0)
        self.assertAlmostEqual(above, below, places=12)
        self.assertAlmostEqual(below, -16.8, delta=0.05)

    def test_resonator_attenuation_away_from_resonance(self):
        omega0 = 2 * math.pi * 70e6
        rows = [
            (omega0 - 2 * math.pi * 10e6, -27.2),
            (2 * math.pi * 10e6, -42.7),
            (2 * math.pi * 3e6, -43.7),
        ]
        for omega, expected in rows:
            self.assertAlmostEqual(resonator_filter_attenuation(omega, omega0, 80.0), expected, delta=0.1)

    def test_half_power_point(self):
        omega0 = 2 * math.pi * 70e6
        value = resonator_filter_attenuation(omega0 + omega0 / 160.0, omega0, 80.0)
        self.assertAlmostEqual(value, -3.0, delta=0.02)

    def test_johnson_psd_in_dbm(self):
        self.assertAlmostEqual(psd_dbm_per_hz(johnson_voltage_psd(38e3, 300.0)), -139.0, delta=0.1)
        self.assertEqual(psd_dbm_per_hz(0.0), float('-inf'))

    def test_relative_psd(self):
        self.assertAlmostEqual(relative_psd(-147.0), 10 ** -14.7)
        self.assertAlmostEqual(relative_psd(-147.0, -10.0), 10 ** -15.7)


class RfAmplitudeNoiseTests(SimpleTestCase):
    def test_radial_heating_per_unit_noise(self):
        omega_x = 2 * math.pi * 10e6
        rate = rfam_radial_heating(MG, omega_x, 1.05e-6, 1.0 / 501)
        self.assertAlmostEqual(rate / 2.06e17, 1.0, delta=0.1)
        rate = rfam_radial_heating(MG, omega_x, 1.05e-6, 2.0e-15 / 501)
        self.assertAlmostEqual(rate * 1e-3, 0.41, delta=0.041)
        self.assertEqual(rfam_radial_heating(MG, omega_x, 0.0, 1e-15), 0.0)

    def test_axial_heating_scaling(self):
        omega_rf = 2 * math.pi * 70e6
        base = rfam_axial_heating(MG, OMEGA_Z, omega_rf, 231.0, 1e7, 1e-15)
        self.assertAlmostEqual(rfam_axial_heating(MG, OMEGA_Z, omega_rf, 231.0, 1e7, 3e-15) / base, 3.0)
        self.assertAlmostEqual(rfam_axial_heating(MG, OMEGA_Z, omega_rf, 462.0, 1e7, 1e-15) / base, 4.0)
        self.assertAlmostEqual(rfam_axial_heating(MG, OMEGA_Z, omega_rf, 231.0, 2e7, 1e-15) / base, 4.0)
        self.assertAlmostEqual(
            rfam_axial_heating(MG, OMEGA_Z, omega_rf, 231.0, 1e7, 1e-15, two_sideband=True) / base, 2.0)

    def test_negative_noise_rejected(self):
        with self.assertRaises(TrapValidationError):
            rfam_radial_heating(MG, OMEGA_Z, 1e-6, -1.0)


class PatchFieldTests(SimpleTestCase):
    def test_recessed_strip(self):
        self.assertAlmostEqual(patch_field(1.0, 8e-6, 6e-6, 40e-6), 192, delta=2)

    def test_decreases_with_recess(self):
        values = [patch_field(1.0, 8e-6, t, 40e-6) for t in (3e-6, 6e-6, 9e-6)]
        self.assertTrue(values[0] > values[1] > values[2])

    def test_warns_outside_validity(self):
        with self.assertLogs('paultrap.noise', level='WARNING'):
            patch_field(1.0, 8e-6, 0.0, 20e-6)


class BudgetTests(SimpleTestCase):
    def field_source(self, name, s_e, frequency=OMEGA_Z):
        return BudgetSource(name, 'field', NoiseSpec(NoiseKind.FIELD_PSD, s_e, frequency))

    def test_single_source_total(self):
        budget = heating_budget(MG, OMEGA_Z, [self.field_source('ambient', 1.23e-11)])
        self.assertEqual(budget.total, budget.lines[0].rate)

    def test_all_zero_sources(self):
        budget = heating_budget(MG, OMEGA_Z, [self.field_source('a', 0.0), self.field_source('b', 0.0)])
        self.assertEqual(budget.total, 0.0)

    def test_mixed_frequencies_rejected(self):
        sources = [self.field_source('a', 1e-12), self.field_source('b', 1e-12, 2 * math.pi * 1e6)]
        with self.assertRaises(TrapValidationError):
            heating_budget(MG, OMEGA_Z, sources)

    def test_noise_kind_must_fit_mechanism(self):
        with self.assertRaises(TrapValidationError):
            BudgetSource('dac', 'electrode', NoiseSpec(NoiseKind.FIELD_PSD, 1e-12, OMEGA_Z))

    def test_lines_reconvert_to_field_noise(self):
        coupling = CouplingConstants(c_e=(0.0, 0.0, 457.0), d_e=(0.0, 0.0, 0.0), de_dz=0.0)
        sources = [
            self.field_source('ambient', 1.23e-11),
            BudgetSource('johnson', 'electrode', NoiseSpec.johnson(1e3, 300.0, OMEGA_Z), n_electrodes=4,
                         filter_rc=(1e3, 820e-12)),
        ]
        budget = heating_budget(MG, OMEGA_Z, sources, coupling=coupling)
        for line in budget.lines:
            self.assertAlmostEqual(heating_rate_from_se(MG, OMEGA_Z, line.s_e_equivalent) / line.rate, 1.0,
                                   places=12)
            self.assertTrue(line.formula)
        self.assertAlmostEqual(budget.total, sum(line.rate for line in budget.lines))

    def test_electrode_source_needs_coupling(self):
        source = BudgetSource('dac', 'electrode', NoiseSpec.from_asd(52e-12, OMEGA_Z))
        with self.assertRaises(TrapValidationError):
            heating_budget(MG, OMEGA_Z, [source])

    def test_named_resonator_filters_rf_noise(self):
        omega_x = 2 * math.pi * 10e6
        resonators = {'main': ResonatorLine(omega0=2 * math.pi * 70e6, q_loaded=80.0)}
        raw = BudgetSource('rf', 'rfam_radial', NoiseSpec.from_dbc(-147.0, omega_x), displacement=1.05e-6)
        filtered = BudgetSource('rf', 'rfam_radial', NoiseSpec.from_dbc(-147.0, omega_x), displacement=1.05e-6,
                                resonator='main')
        unfiltered = heating_budget(MG, omega_x, [raw]).total
        total = heating_budget(MG, omega_x, [filtered], resonators=resonators).total
        expected = 10 ** (resonators['main'].attenuation_db(omega_x) / 10)
        self.assertAlmostEqual(total / unfiltered, expected, places=12)

    def test_example_scenario(self):
        budget = heating_budget(**budget_from_dict(read_json(DATA_DIR / 'budget_p371.json')))
        by_name = {line.name: line for line in budget.lines}
        self.assertAlmostEqual(by_name['control_johnson'].rate_per_ms, 0.005, delta=0.0005)
        self.assertAlmostEqual(by_name['ambient_field'].rate_per_ms, 1.0, delta=0.01)
        self.assertIn('control_johnson', budget.table())
        self.assertEqual(len(budget.as_dict()['lines']), 2)
