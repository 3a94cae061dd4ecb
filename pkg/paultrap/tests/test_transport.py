import math
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from paultrap.analysis import secular_frequencies
from paultrap.core import RfDrive, parse_species
from paultrap.documents import load_geometry, read_json, waveform_from_dict
from paultrap.exceptions import InfeasibleWaveformError, TrapValidationError
from paultrap.geometries import five_wire, mirrored_channels
from paultrap.transport import (Waveform, WaveformSpec, WaveformStep, _solve_step, linear_path, solve_waveform,
                                waveform_continuity_check)

DATA_DIR = Path(__file__).resolve().parent.parent / 'data'
MG = parse_species('24Mg+')
OMEGA_Z = 2 * math.pi * 1e6


def constant_waveform(values):
    waveform = Waveform(channels={'a': ['a']})
    for i, v in enumerate(values):
        waveform.steps.append(WaveformStep(index=i, position=i * 1e-5, voltages={'a': v}, null_point=np.zeros(3),
                                           axial_field_residual=0.0, omega_z=OMEGA_Z, residual=0.0))
    return waveform


class WaveformSpecTests(SimpleTestCase):
    def test_empty_path(self):
        with self.assertRaises(TrapValidationError):
            WaveformSpec(path=(), target_omega_z=OMEGA_Z)

    def test_bounds_order(self):
        with self.assertRaises(TrapValidationError):
            WaveformSpec(path=(0.0,), target_omega_z=OMEGA_Z, voltage_bounds=(1.0, -1.0))

    def test_document_bounds_must_be_a_pair(self):
        for bounds in (5, [1.0], [-1.0, 'high']):
            with self.subTest(bounds=bounds), self.assertRaises(TrapValidationError):
                waveform_from_dict({'path_um': [0.0], 'target_freq_mhz': 1.0, 'voltage_bounds': bounds})
        spec = waveform_from_dict({'path_um': [0.0], 'target_freq_mhz': 1.0, 'voltage_bounds': [None, 2.0]})
        self.assertEqual(spec.voltage_bounds, (-math.inf, 2.0))

    def test_linear_path(self):
        path = linear_path(-50e-6, 50e-6, 10e-6)
        self.assertEqual(len(path), 11)
        self.assertAlmostEqual(path[0], -50e-6)
        self.assertAlmostEqual(path[-1], 50e-6)

    def test_example_document(self):
        spec = waveform_from_dict(read_json(DATA_DIR / 'transport.json'))
        self.assertEqual(len(spec.path), 11)
        self.assertEqual(spec.voltage_bounds, (-10.0, 10.0))
        self.assertAlmostEqual(spec.target_omega_z, OMEGA_Z)


class SolveWaveformTests(SimpleTestCase):
    def setUp(self):
        self.model = five_wire(RfDrive.from_mhz(40.0, 40.0))
        self.channels = mirrored_channels(self.model)

    def solve(self, path, omega=OMEGA_Z, **kwargs):
        kwargs.setdefault('channels', self.channels)
        return solve_waveform(self.model, MG, WaveformSpec(path=path, target_omega_z=omega, **kwargs))

    def test_centered_well_is_symmetric(self):
        step = self.solve((0.0,), regularization=0.0).steps[0]
        v = step.voltages
        scale = max(abs(x) for x in v.values())
        self.assertAlmostEqual(v['s1'], v['s5'], delta=1e-6 * scale)
        self.assertAlmostEqual(v['s2'], v['s4'], delta=1e-6 * scale)

    def test_achieved_frequency_closes_the_loop(self):
        waveform = self.solve((0.0, 20e-6), voltage_bounds=(-10.0, 10.0))
        for index, step in enumerate(waveform.steps):
            with self.subTest(step=index):
                self.assertAlmostEqual(step.omega_z / OMEGA_Z, 1.0, delta=0.02)
                trapped = self.model.with_dc_voltages(waveform.electrode_voltages(index))
                result = secular_frequencies(trapped, MG, step.null_point)
                self.assertAlmostEqual(result.omegas[result.axial_index] / OMEGA_Z, 1.0, delta=0.02)
                self.assertAlmostEqual(result.null_point[0], step.position, delta=0.5e-6)

    def test_voltages_within_bounds(self):
        waveform = self.solve(linear_path(-50e-6, 50e-6, 10e-6), voltage_bounds=(-10.0, 10.0))
        self.assertEqual(len(waveform.steps), 11)
        volts = waveform.matrix()
        self.assertTrue(np.all(volts >= -10.0 - 1e-9) and np.all(volts <= 10.0 + 1e-9))
        for step in waveform.steps:
            self.assertLess(abs(step.axial_field_residual), 1e-3)

    def test_stiffer_well_scales_voltages(self):
        soft = self.solve((0.0,), regularization=0.0).matrix()[0]
        stiff = self.solve((0.0,), omega=2 * OMEGA_Z, regularization=0.0).matrix()[0]
        np.testing.assert_allclose(stiff, 4.0 * soft, rtol=1e-2, atol=1e-3 * np.abs(stiff).max())

    def test_mirror_geometry_gives_mirror_waveform(self):
        path = (-20e-6, 20e-6)
        direct = self.solve(path, regularization=0.0)
        mirrored = solve_waveform(self.model.mirrored_y(), MG, WaveformSpec(
            path=path, target_omega_z=OMEGA_Z, regularization=0.0, channels=self.channels))
        np.testing.assert_allclose(direct.matrix(), mirrored.matrix(), rtol=1e-6, atol=1e-9)

    def test_infeasible_bounds(self):
        with self.assertRaises(InfeasibleWaveformError) as ctx:
            self.solve((0.0,), voltage_bounds=(-1e-3, 1e-3))
        self.assertEqual(ctx.exception.step, 0)
        self.assertEqual(ctx.exception.details['constraint'], 'axial_curvature')

    def test_unknown_channel_electrode(self):
        with self.assertRaises(TrapValidationError):
            self.solve((0.0,), channels={'x': ['rf']})

    def test_csv_columns(self):
        waveform = self.solve((0.0,))
        columns = waveform.columns()
        self.assertEqual(columns[:2], ['step', 'axial_um'])
        self.assertEqual(columns[-1], 'omega_z_mhz')
        self.assertEqual(len(next(waveform.rows())), len(columns))

    def test_example_geometry(self):
        model = load_geometry(DATA_DIR / 'five_wire.json')
        spec = waveform_from_dict(read_json(DATA_DIR / 'transport.json'))
        waveform = solve_waveform(model, MG, spec)
        self.assertEqual(len(waveform.steps), len(spec.path))


class StepSolverTests(SimpleTestCase):
    def test_unbounded_solution_is_linear(self):
        rng = np.random.default_rng(5)
        a = rng.normal(size=(4, 6))
        b1, b2 = rng.normal(size=4), rng.normal(size=4)
        unbounded = (-math.inf, math.inf)
        v1 = _solve_step(a, b1, unbounded, 0.0)
        v2 = _solve_step(a, b2, unbounded, 0.0)
        v12 = _solve_step(a, b1 + b2, unbounded, 0.0)
        np.testing.assert_allclose(v12, v1 + v2, atol=1e-9 * np.abs(v12).max())
        np.testing.assert_allclose(a @ v12, b1 + b2, atol=1e-9)

    def test_damping_is_relative_to_largest_singular_value(self):
        unbounded = (-math.inf, math.inf)
        # minimizes (v - 1)^2 + (0.5 v)^2
        v = _solve_step(np.array([[1.0]]), np.array([1.0]), unbounded, 0.5)
        self.assertAlmostEqual(v[0], 0.8, places=12)
        v = _solve_step(np.array([[4.0]]), np.array([4.0]), unbounded, 0.5)
        self.assertAlmostEqual(v[0], 0.8, places=12)

    def test_bounds_clip_solution(self):
        v = _solve_step(np.array([[1.0, 0.0], [0.0, 1.0]]), np.array([3.0, -0.5]), (-1.0, 1.0), 0.0)
        np.testing.assert_allclose(v, [1.0, -0.5], atol=1e-9)


class ContinuityTests(SimpleTestCase):
    def test_constant_waveform_passes(self):
        self.assertTrue(waveform_continuity_check(constant_waveform([1.0, 1.0, 1.0]), 0.1).passed)

    def test_single_jump_flagged(self):
        report = waveform_continuity_check(constant_waveform([1.0, 1.0, 3.0, 3.0]), 0.5)
        self.assertFalse(report.passed)
        self.assertEqual(report.offending_steps, (2,))
        self.assertAlmostEqual(report.max_jump, 2.0)

    def test_infinite_threshold(self):
        self.assertTrue(waveform_continuity_check(constant_waveform([0.0, 100.0]), math.inf).passed)
