import math
from pathlib import Path

from django.test import SimpleTestCase

from paultrap.cantilever import (CantileverDevice, RfCircuit, charge_from_inductance, cooled_temperature,
                                 damping_and_shift, detuning_sweep, effective_temperature,
                                 equivalent_circuit, first_mode_eigenvalue, ground_state_ratio, mode_integrals,
                                 mode_shape, parallel_plate_capacitance, power_sweep, v_max_squared)
from paultrap.core import CONSTANTS
from paultrap.documents import cantilever_from_dict, read_json
from paultrap.exceptions import StaticInstabilityError, TrapValidationError

DATA_DIR = Path(__file__).resolve().parent.parent / 'data'
DETUNING = 2 * math.pi * 90e3


def example_device():
    return CantileverDevice(h_c=1500e-6, s=14e-6, w=200e-6, rho=2330.0, d0=16e-6, h=1500e-6,
                            omega_c=2 * math.pi * 7e3, q_c_mech=5000.0)


def example_circuit(device):
    return RfCircuit.from_resonance(l0=330e-9, omega0=2 * math.pi * 100e6,
                                    c_c=device.coupling_capacitance, q_rf=234.0)


class ModeShapeTests(SimpleTestCase):
    def test_first_mode_eigenvalue(self):
        self.assertAlmostEqual(first_mode_eigenvalue(), 1.8751, places=4)

    def test_boundary_values(self):
        self.assertAlmostEqual(float(mode_shape(0.0)), 0.0, places=12)
        self.assertAlmostEqual(float(mode_shape(1.0)), 1.0, places=12)

    def test_full_overlap_integrals(self):
        xi_p, xi_pp, xi_c = mode_integrals(1.5e-3, 1.5e-3)
        self.assertAlmostEqual(xi_p, 0.392, delta=0.003)
        self.assertAlmostEqual(xi_pp, 0.250, delta=0.002)
        self.assertAlmostEqual(xi_c, 0.25, places=6)

    def test_tip_overlap_weights_more(self):
        xi_p, xi_pp, _ = mode_integrals(1.5e-3, 0.3e-3)
        self.assertGreater(xi_p, 0.392)
        self.assertGreater(xi_pp, 0.25)

    def test_overlap_longer_than_beam(self):
        with self.assertRaises(TrapValidationError):
            mode_integrals(1e-3, 2e-3)


class DeviceTests(SimpleTestCase):
    def setUp(self):
        self.device = example_device()

    def test_effective_mass(self):
        self.assertAlmostEqual(self.device.effective_mass / 2.4465e-9, 1.0, delta=1e-3)

    def test_coupling_capacitance(self):
        self.assertAlmostEqual(self.device.coupling_capacitance * 1e12, 0.166, delta=0.001)
        self.assertEqual(parallel_plate_capacitance(200e-6, 1500e-6, 16e-6), self.device.coupling_capacitance)

    def test_invalid_dimension(self):
        with self.assertRaises(TrapValidationError):
            CantileverDevice(h_c=1e-3, s=0.0, w=1e-4, rho=2330.0, d0=1e-5, h=1e-3, omega_c=1e4, q_c_mech=100.0)

    def test_circuit_resonance(self):
        circuit = example_circuit(self.device)
        self.assertAlmostEqual(circuit.omega0 / (2 * math.pi * 100e6), 1.0, places=9)
        self.assertGreater(circuit.c0, 0.0)

    def test_coupling_exceeds_resonant_capacitance(self):
        with self.assertRaises(TrapValidationError):
            RfCircuit.from_resonance(l0=330e-9, omega0=2 * math.pi * 100e6, c_c=1e-9, q_rf=100.0)

    def test_example_document(self):
        device, circuit = cantilever_from_dict(read_json(DATA_DIR / 'cantilever.json'))
        self.assertAlmostEqual(device.effective_mass / self.device.effective_mass, 1.0, places=9)
        self.assertAlmostEqual(device.omega_c, self.device.omega_c)
        self.assertAlmostEqual(circuit.c_c, self.device.coupling_capacitance)
        self.assertEqual(circuit.q_rf, 234.0)


class DampingTests(SimpleTestCase):
    def setUp(self):
        self.device = example_device()
        self.circuit = example_circuit(self.device)

    def damping(self, power, detuning=DETUNING):
        return damping_and_shift(self.device, self.circuit, v_max_squared(power, self.circuit), detuning)

    def test_no_damping_on_resonance(self):
        self.assertEqual(self.damping(1e-3, 0.0).gamma_prime, 0.0)

    def test_blue_detuning_cools(self):
        self.assertGreater(self.damping(1e-3).gamma_prime, 0.0)
        self.assertLess(self.damping(1e-3, -DETUNING).gamma_prime, 0.0)

    def test_linear_in_power(self):
        low, high = self.damping(1e-3), self.damping(2e-3)
        self.assertAlmostEqual(high.gamma_prime / low.gamma_prime, 2.0, places=9)
        self.assertAlmostEqual(high.kappa / low.kappa, 2.0, places=9)
        self.assertLess(high.omega_shifted, low.omega_shifted)

    def test_example_device_rates_per_watt(self):
        # linear in power, so a small drive power stays below the instability
        power = 1e-3
        result = self.damping(power)
        self.assertAlmostEqual(result.gamma_prime / power / 3970.0, 1.0, delta=0.15)
        self.assertAlmostEqual(result.kappa / power / 3.45, 1.0, delta=0.25)

    def test_spring_softening_instability(self):
        with self.assertRaises(StaticInstabilityError) as ctx:
            self.damping(10.0)
        self.assertGreaterEqual(ctx.exception.kappa, 1.0)

    def test_negative_power(self):
        with self.assertRaises(TrapValidationError):
            v_max_squared(-1.0, self.circuit)

    def test_sweeps(self):
        rows = power_sweep(self.device, self.circuit, [1e-4, 1e-3], DETUNING)
        self.assertEqual(len(rows), 2)
        self.assertLess(rows[1][3], rows[0][3])
        self.assertLess(rows[0][3], 300.0)
        rows = detuning_sweep(self.device, self.circuit, 1e-3, [-DETUNING, 0.0, DETUNING])
        self.assertEqual(rows[1][1], 0.0)
        self.assertAlmostEqual(rows[1][3], 300.0)


class EquivalentCircuitTests(SimpleTestCase):
    def setUp(self):
        self.device = example_device()

    def test_inductance_round_trip(self):
        charge = charge_from_inductance(self.device, 27000.0)
        circuit = equivalent_circuit(self.device, charge)
        self.assertAlmostEqual(circuit.l_eq / 27000.0, 1.0, places=9)
        self.assertAlmostEqual(circuit.c_eq * circuit.l_eq * self.device.omega_c ** 2, 1.0, places=9)

    def test_resistances(self):
        circuit = equivalent_circuit(self.device, 1e-12, gamma_prime=10.0)
        self.assertAlmostEqual(circuit.r_eq, circuit.l_eq * self.device.omega_c / 5000.0)
        self.assertAlmostEqual(circuit.r_rf, circuit.l_eq * 10.0)

    def test_zero_charge(self):
        with self.assertRaises(TrapValidationError):
            equivalent_circuit(self.device, 0.0)


class TemperatureTests(SimpleTestCase):
    def test_cooled_temperature(self):
        self.assertAlmostEqual(cooled_temperature(300.0, 1.0, 9.0), 30.0)
        self.assertAlmostEqual(cooled_temperature(300.0, 1.0, 0.0), 300.0)

    def test_effective_temperature_of_matched_johnson_noise(self):
        r, t = 50.0, 300.0
        self.assertAlmostEqual(effective_temperature([4 * CONSTANTS.k_boltzmann * t * r], [r]), t)

    def test_effective_temperature_with_rf_damping(self):
        r_eq, t = 1e3, 300.0
        value = effective_temperature([4 * CONSTANTS.k_boltzmann * t * r_eq], [r_eq, 5.9 * r_eq, 0.0])
        self.assertAlmostEqual(value, 300.0 / 6.9, places=9)
        self.assertAlmostEqual(value, 43.5, delta=0.05)

    def test_effective_temperature_needs_load(self):
        with self.assertRaises(TrapValidationError):
            effective_temperature([1e-18], [0.0])

    def test_ground_state_ratio_example(self):
        ratio = ground_state_ratio(0.1, 2 * math.pi * 20e9, 5000.0, 20000.0)
        self.assertAlmostEqual(ratio / 0.052, 1.0, delta=0.05)
        self.assertEqual(ground_state_ratio(0.0, 2 * math.pi * 20e9, 5000.0, 20000.0), 0.0)

    def test_ground_state_ratio_scales(self):
        ratio = ground_state_ratio(300.0, 2 * math.pi * 100e6, 234.0, 5000.0)
        self.assertAlmostEqual(ground_state_ratio(150.0, 2 * math.pi * 100e6, 234.0, 5000.0), ratio / 2)
        self.assertGreater(ratio, 1.0)
