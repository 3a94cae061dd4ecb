import math

from django.test import SimpleTestCase

from paultrap.core import (CONSTANTS, RfDrive, amu_to_kg, db_power_ratio, dbm_to_watts, make_species,
                           mhz_to_omega, omega_to_mhz, parse_species, power_ratio_db, watts_to_dbm)
from paultrap.exceptions import TrapValidationError


class SpeciesTests(SimpleTestCase):
    def test_parse_singly_charged(self):
        ion = parse_species('24Mg+')
        self.assertAlmostEqual(ion.mass_amu, 24.0, places=12)
        self.assertAlmostEqual(ion.charge_e, 1.0, places=12)
        self.assertEqual(ion.label, '24Mg+')

    def test_parse_multiply_charged(self):
        self.assertAlmostEqual(parse_species('40Ca2+').charge_e, 2.0, places=12)
        self.assertAlmostEqual(parse_species('9Be++').charge_e, 2.0, places=12)
        self.assertAlmostEqual(parse_species('35Cl-').charge_e, -1.0, places=12)

    def test_rejects_bad_labels(self):
        for label in ('Mg+', '24Mg', '24Mg+-', ''):
            with self.subTest(label=label), self.assertRaises(TrapValidationError):
                parse_species(label)

    def test_make_species_validates(self):
        with self.assertRaises(TrapValidationError):
            make_species(0, 1)
        with self.assertRaises(TrapValidationError):
            make_species(24, 0)
        with self.assertRaises(TrapValidationError):
            make_species(24, 1.5)

    def test_mass_in_kg(self):
        self.assertAlmostEqual(make_species(24, 1).mass / amu_to_kg(24), 1.0, places=12)


class DriveTests(SimpleTestCase):
    def test_from_mhz(self):
        drive = RfDrive.from_mhz(100.0, 50.0)
        self.assertAlmostEqual(drive.omega_rf, 2 * math.pi * 1e8)
        self.assertAlmostEqual(drive.freq_mhz, 100.0)

    def test_rejects_nonpositive_frequency(self):
        with self.assertRaises(TrapValidationError):
            RfDrive(omega_rf=0.0, v_rf=10.0)
        with self.assertRaises(TrapValidationError):
            RfDrive(omega_rf=1e8, v_rf=-1.0)


class ConversionTests(SimpleTestCase):
    def test_frequency_round_trip(self):
        self.assertAlmostEqual(omega_to_mhz(mhz_to_omega(35.0)), 35.0, places=12)

    def test_decibels(self):
        self.assertAlmostEqual(db_power_ratio(-10.0), 0.1)
        self.assertAlmostEqual(power_ratio_db(100.0), 20.0)
        self.assertAlmostEqual(dbm_to_watts(0.0), 1e-3)
        self.assertAlmostEqual(watts_to_dbm(1.0), 30.0)
        with self.assertRaises(TrapValidationError):
            power_ratio_db(0.0)

    def test_constants(self):
        self.assertAlmostEqual(CONSTANTS.elementary_charge, 1.602176634e-19, delta=1e-28)
