"""
Control-voltage waveforms that carry an axial harmonic well along the
trap axis of a planar model.

At each path point the ion is held at the RF null of the transverse plane
and the channel voltages are solved from a linear system: zero total
axial force, zero transverse static field, and the target axial
curvature. The system is solved in the bound-constrained least-squares
sense with Tikhonov damping.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from django.conf import settings
from scipy import linalg, optimize

from .analysis import default_guess, energy_gradient, energy_hessian, find_rf_null
from .exceptions import InfeasibleWaveformError, TrapValidationError
from .fields import ElectrodeRole

logger = logging.getLogger(__name__)

RESIDUAL_TOLERANCE = 1e-3
AXIS_NAMES = 'xyz'


@dataclass(frozen=True)
class WaveformSpec:
    path: tuple
    target_omega_z: float
    voltage_bounds: tuple = (-math.inf, math.inf)
    regularization: Optional[float] = None
    channels: Optional[dict] = None

    def __post_init__(self):
        object.__setattr__(self, 'path', tuple(float(p) for p in self.path))
        if not self.path:
            raise TrapValidationError('Transport path is empty')
        if not self.target_omega_z > 0:
            raise TrapValidationError(f'Target axial frequency must be positive, got {self.target_omega_z!r}')
        v_min, v_max = self.voltage_bounds
        if not v_min < v_max:
            raise TrapValidationError(f'Voltage bounds need v_min < v_max, got {self.voltage_bounds!r}')
        if self.regularization is not None and self.regularization < 0:
            raise TrapValidationError('Regularization must be non-negative')


@dataclass(frozen=True)
class WaveformStep:
    index: int
    position: float
    voltages: dict
    null_point: np.ndarray
    axial_field_residual: float
    omega_z: float
    residual: float


@dataclass
class Waveform:
    channels: dict
    steps: list = field(default_factory=list)

    @property
    def channel_names(self):
        return list(self.channels)

    def electrode_voltages(self, index):
        step = self.steps[index]
        return {label: step.voltages[name] for name, labels in self.channels.items() for label in labels}

    def matrix(self):
        return np.array([[step.voltages[name] for name in self.channels] for step in self.steps])

    def columns(self):
        return ['step', 'axial_um', *(f'{name}_v' for name in self.channels), 'omega_z_mhz']

    def rows(self):
        for step in self.steps:
            yield (step.index, step.position * 1e6, *(step.voltages[name] for name in self.channels),
                   step.omega_z / (2e6 * math.pi))


@dataclass(frozen=True)
class ContinuityReport:
    passed: bool
    offending_steps: tuple
    max_jump: float


def linear_path(start, stop, step=None):
    """Evenly spaced positions from ``start`` to ``stop`` inclusive, about ``step`` apart (m)."""
    step = step if step is not None else getattr(settings, 'PAULTRAP_TRANSPORT_STEP_UM', 10.0) * 1e-6
    if not step > 0:
        raise TrapValidationError(f'Path step must be positive, got {step!r}')
    count = max(1, int(round(abs(stop - start) / step))) + 1
    return tuple(np.linspace(start, stop, count))


def default_channels(model):
    return {label: [label] for label in model.dc_labels}


def _check_channels(model, channels):
    seen = set()
    for name, labels in channels.items():
        if not labels:
            raise TrapValidationError(f'Channel {name!r} drives no electrodes')
        for label in labels:
            if model.electrode(label).role != ElectrodeRole.DC:
                raise TrapValidationError(f'Channel {name!r} includes non-DC electrode {label!r}')
            if label in seen:
                raise TrapValidationError(f'Electrode {label!r} is assigned to more than one channel')
            seen.add(label)


def _channel_fields(model, channels, point):
    """Static field and gradient at ``point`` for 1 V on each channel."""
    e_cols, g_cols = [], []
    for labels in channels.values():
        weights = sum(model.electrode_weights(label) for label in labels)
        _, e, g = model.evaluate(point, weights)
        e_cols.append(e[0])
        g_cols.append(g[0])
    return np.array(e_cols).T, np.array(g_cols)


def _solve_step(a, b, bounds, regularization):
    """
    Least-squares voltages for ``a v = b``. The damping row is
    ``regularization * sigma_max * I``, so the added penalty is
    ``(regularization * sigma_max)**2 * |v|**2``.
    """
    v_min, v_max = bounds
    unbounded = math.isinf(v_min) and math.isinf(v_max)
    if unbounded and regularization == 0:
        return linalg.lstsq(a, b, cond=1e-10)[0]
    sigma = linalg.svdvals(a)[0] if a.size else 1.0
    damping = regularization * sigma * np.eye(a.shape[1])
    a_aug = np.vstack([a, damping])
    b_aug = np.concatenate([b, np.zeros(a.shape[1])])
    if unbounded:
        return linalg.lstsq(a_aug, b_aug)[0]
    result = optimize.lsq_linear(a_aug, b_aug, bounds=(v_min, v_max), method='bvls', tol=1e-14)
    return result.x


def solve_waveform(model, species, spec, guess=None):
    """Channel voltages for every point of ``spec.path``."""
    channels = spec.channels or default_channels(model)
    _check_channels(model, channels)
    regularization = spec.regularization
    if regularization is None:
        regularization = getattr(settings, 'PAULTRAP_TRANSPORT_REGULARIZATION', 1e-6)
    axial = model.axial_axis
    transverse = [i for i in range(3) if i != axial]
    names = [f'axial_field_{AXIS_NAMES[axial]}'] + [f'transverse_field_{AXIS_NAMES[i]}' for i in transverse]
    names.append('axial_curvature')
    stiffness = species.mass * spec.target_omega_z ** 2
    rf_only = model.with_dc_voltages({})

    waveform = Waveform(channels=dict(channels))
    point = None if guess is None else np.asarray(guess, dtype=float)
    for index, position in enumerate(spec.path):
        if point is None:
            point = default_guess(model)
        start = point.copy()
        start[axial] = position
        null = find_rf_null(model, species, start, free_axes=transverse).point
        scale = null[2]
        e_basis, g_basis = _channel_fields(model, channels, null)
        pp_gradient = energy_gradient(rf_only, species, null)
        pp_curvature = energy_hessian(rf_only, species, null)[axial, axial]

        rows = [species.charge * e_basis[axial] / (stiffness * scale)]
        targets = [pp_gradient[axial] / (stiffness * scale)]
        for i in transverse:
            rows.append(species.charge * e_basis[i] / (stiffness * scale))
            targets.append(0.0)
        rows.append(-species.charge * g_basis[:, axial, axial] / stiffness)
        targets.append(1.0 - pp_curvature / stiffness)
        a, b = np.array(rows), np.array(targets)

        v = _solve_step(a, b, spec.voltage_bounds, regularization)
        residuals = a @ v - b
        worst = int(np.argmax(np.abs(residuals)))
        if abs(residuals[worst]) > RESIDUAL_TOLERANCE:
            raise InfeasibleWaveformError(
                f'Step {index} at {position * 1e6:.3f} um cannot satisfy {names[worst]} '
                f'(residual {residuals[worst]:.3e})',
                constraint=names[worst], step=index, residual=float(abs(residuals[worst])),
            )
        curvature = pp_curvature - species.charge * float(g_basis[:, axial, axial] @ v)
        omega_z = math.sqrt(curvature / species.mass) if curvature > 0 else 0.0
        waveform.steps.append(WaveformStep(
            index=index,
            position=position,
            voltages={name: float(volts) for name, volts in zip(channels, v)},
            null_point=null,
            axial_field_residual=float(e_basis[axial] @ v - pp_gradient[axial] / species.charge),
            omega_z=omega_z,
            residual=float(np.linalg.norm(residuals)),
        ))
        logger.debug('Transport step %d at %.2f um: omega_z/2pi=%.4f MHz', index, position * 1e6,
                     omega_z / (2e6 * math.pi))
        point = null
    logger.info('Solved %d-step waveform over %d channels', len(waveform.steps), len(channels))
    return waveform


def waveform_continuity_check(waveform, max_step_v):
    """Steps whose largest channel change from the previous step exceeds ``max_step_v``."""
    volts = waveform.matrix()
    if len(volts) < 2:
        return ContinuityReport(passed=True, offending_steps=(), max_jump=0.0)
    jumps = np.max(np.abs(np.diff(volts, axis=0)), axis=1)
    offending = tuple(int(i) + 1 for i in np.nonzero(jumps > max_step_v)[0])
    return ContinuityReport(passed=not offending, offending_steps=offending, max_jump=float(jumps.max()))
