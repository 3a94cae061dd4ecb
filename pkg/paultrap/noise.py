"""
Electric-field noise and motional heating.

Rates are single-phonon heating rates in quanta/s. Relative RF noise is
taken as r = S_En / E0^2 (1/Hz) of one sideband, after any resonator
filtering; ``two_sideband=True`` doubles the RF-AM rates for noise that
is symmetric about the carrier.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .core import CONSTANTS, db_power_ratio, power_ratio_db, watts_to_dbm
from .exceptions import TrapValidationError
from .fields import electrode_basis, sample_rf_basis

logger = logging.getLogger(__name__)

REFERENCE_IMPEDANCE = 50.0
FREQUENCY_MATCH = 1e-9


class NoiseKind(str, Enum):
    VOLTAGE_PSD = 'voltage_psd'
    FIELD_PSD = 'field_psd'
    RELATIVE_PSD = 'relative_psd'


class Mechanism(str, Enum):
    FIELD = 'field'
    ELECTRODE = 'electrode'
    RFAM_AXIAL = 'rfam_axial'
    RFAM_RADIAL = 'rfam_radial'


@dataclass(frozen=True)
class NoiseSpec:
    kind: NoiseKind
    value: float
    frequency: float

    def __post_init__(self):
        object.__setattr__(self, 'kind', NoiseKind(self.kind))
        if not self.value >= 0:
            raise TrapValidationError(f'Noise spectral density must be non-negative, got {self.value!r}')
        if not self.frequency > 0:
            raise TrapValidationError(f'Noise frequency must be positive, got {self.frequency!r}')

    @classmethod
    def from_dbc(cls, dbc, frequency, attenuation_db=0.0):
        return cls(NoiseKind.RELATIVE_PSD, relative_psd(dbc, attenuation_db), frequency)

    @classmethod
    def from_asd(cls, volts_per_root_hz, frequency):
        return cls(NoiseKind.VOLTAGE_PSD, volts_per_root_hz ** 2, frequency)

    @classmethod
    def johnson(cls, r, t, frequency):
        return cls(NoiseKind.VOLTAGE_PSD, johnson_voltage_psd(r, t), frequency)


@dataclass(frozen=True)
class CouplingConstants:
    """
    Field per volt at the ion: ``c_e`` for a control electrode, ``d_e``
    for the RF electrodes, and ``de_dz`` the axial derivative of the RF
    axial field.
    """
    c_e: tuple
    d_e: tuple
    de_dz: float
    axial_index: int = 2

    def __post_init__(self):
        c_e, d_e = np.asarray(self.c_e, dtype=float), np.asarray(self.d_e, dtype=float)
        if c_e.shape != (3,) or d_e.shape != (3,):
            raise TrapValidationError('Coupling constants c_e and d_e must be 3-vectors')
        if not (np.all(np.isfinite(c_e)) and np.all(np.isfinite(d_e)) and math.isfinite(self.de_dz)):
            raise TrapValidationError('Coupling constants must be finite')
        object.__setattr__(self, 'c_e', tuple(float(v) for v in c_e))
        object.__setattr__(self, 'd_e', tuple(float(v) for v in d_e))


def coupling_constants(model, point, electrode):
    """Coupling constants of ``electrode`` and the RF electrodes at ``point``."""
    control = electrode_basis(model, electrode, point)
    rf = sample_rf_basis(model, point)
    axis = model.axial_axis
    return CouplingConstants(
        c_e=tuple(control.e_field),
        d_e=tuple(rf.e_field),
        de_dz=float(rf.gradient[axis, axis]),
        axial_index=axis,
    )


def _heating_constant(species, omega):
    if not omega > 0:
        raise TrapValidationError(f'Motional frequency must be positive, got {omega!r}')
    return species.charge ** 2 / (4.0 * species.mass * CONSTANTS.hbar * omega)


def heating_rate_from_se(species, omega, s_e):
    """Gamma = q^2 S_E / (4 m hbar omega)."""
    if s_e < 0:
        raise TrapValidationError(f'S_E must be non-negative, got {s_e!r}')
    return _heating_constant(species, omega) * s_e


def se_from_heating_rate(species, omega, rate):
    if rate < 0:
        raise TrapValidationError(f'Heating rate must be non-negative, got {rate!r}')
    return rate / _heating_constant(species, omega)


def johnson_voltage_psd(r, t):
    """S_V = 4 k_B T R."""
    if r < 0 or t < 0:
        raise TrapValidationError('Resistance and temperature must be non-negative')
    return 4.0 * CONSTANTS.k_boltzmann * t * r


def rc_attenuation(omega, r, c):
    """Power transmission of an RC low-pass, 1 / (1 + (omega R C)^2)."""
    if r < 0 or c < 0 or omega < 0:
        raise TrapValidationError('RC filter parameters must be non-negative')
    return 1.0 / (1.0 + (omega * r * c) ** 2)


def electrode_noise_heating(species, omega, s_v, filter_rc=None, c_e_component=0.0, n_electrodes=1):
    """Heating from ``n_electrodes`` independent noisy control electrodes behind an RC filter."""
    if n_electrodes < 1:
        raise TrapValidationError(f'Electrode count must be at least 1, got {n_electrodes!r}')
    attenuation = 1.0 if filter_rc is None else rc_attenuation(omega, *filter_rc)
    s_e = s_v * c_e_component ** 2 * attenuation
    return n_electrodes * heating_rate_from_se(species, omega, s_e)


def _lineshape(omega, omega0, q_loaded):
    if not omega0 > 0 or not q_loaded > 0:
        raise TrapValidationError('Resonance frequency and loaded Q must be positive')
    return 1.0 / (1.0 + 4.0 * q_loaded ** 2 * ((omega - omega0) / omega0) ** 2)


def resonator_filter_attenuation(omega, omega0, q_loaded):
    """Resonator power transmission at ``omega`` relative to resonance, in dB (<= 0)."""
    return power_ratio_db(_lineshape(omega, omega0, q_loaded))


def resonator_johnson_psd(omega, omega0, q_loaded, r_parallel, t):
    return johnson_voltage_psd(r_parallel, t) * _lineshape(omega, omega0, q_loaded)


def psd_dbm_per_hz(s_v, impedance=REFERENCE_IMPEDANCE):
    """Report a voltage PSD as power per Hz (dBm/Hz) into ``impedance``."""
    if s_v <= 0:
        return float('-inf')
    return watts_to_dbm(s_v / impedance)


def relative_psd(dbc, attenuation_db=0.0):
    """r = 10^((dBc + attenuation)/10); ``attenuation_db`` is negative for a filter."""
    return db_power_ratio(dbc + attenuation_db)


def rfam_axial_heating(species, omega_z, omega_rf, e0, de0_dz, r, two_sideband=False):
    """Axial heating from RF amplitude noise at Omega +- omega_z."""
    if r < 0:
        raise TrapValidationError(f'Relative noise PSD must be non-negative, got {r!r}')
    force = species.charge ** 2 / (species.mass * omega_rf ** 2) * e0 * de0_dz
    rate = force ** 2 * r / (4.0 * species.mass * CONSTANTS.hbar * omega_z)
    return 2.0 * rate if two_sideband else rate


def rfam_radial_heating(species, omega_x, x, r, two_sideband=False):
    """Radial heating from RF amplitude noise for an ion displaced ``x`` from the RF null."""
    if x < 0:
        raise TrapValidationError(f'Displacement must be non-negative, got {x!r}')
    if r < 0:
        raise TrapValidationError(f'Relative noise PSD must be non-negative, got {r!r}')
    force = 2.0 * species.mass * omega_x ** 2 * x
    rate = force ** 2 * r / (4.0 * species.mass * CONSTANTS.hbar * omega_x)
    return 2.0 * rate if two_sideband else rate


def patch_field(v_s, a, t, r):
    """Vertical field (V/m) of a charged dielectric strip of width ``a`` recessed ``t`` at distance ``r``."""
    if not (a > 0 and r > 0) or t < 0:
        raise TrapValidationError('Patch geometry needs a > 0, r > 0 and t >= 0')
    if r < 5.0 * a:
        logger.warning('Patch field estimate assumes r >> a (r=%g, a=%g)', r, a)
    if math.pi * t < a:
        logger.warning('Patch field estimate assumes pi t >= a (t=%g, a=%g)', t, a)
    return 4.0 * v_s / math.pi ** 2 * a / r ** 2 * math.exp(-math.pi * t / a)


@dataclass(frozen=True)
class ResonatorLine:
    omega0: float
    q_loaded: float

    def attenuation_db(self, offset):
        """Transmission at Omega0 - ``offset``."""
        return resonator_filter_attenuation(self.omega0 - offset, self.omega0, self.q_loaded)


@dataclass(frozen=True)
class BudgetSource:
    name: str
    mechanism: Mechanism
    noise: NoiseSpec
    n_electrodes: int = 1
    filter_rc: Optional[tuple] = None
    axis: Optional[int] = None
    displacement: float = 0.0
    resonator: Optional[str] = None
    two_sideband: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'mechanism', Mechanism(self.mechanism))
        expected = {
            Mechanism.FIELD: NoiseKind.FIELD_PSD,
            Mechanism.ELECTRODE: NoiseKind.VOLTAGE_PSD,
            Mechanism.RFAM_AXIAL: NoiseKind.RELATIVE_PSD,
            Mechanism.RFAM_RADIAL: NoiseKind.RELATIVE_PSD,
        }[self.mechanism]
        if self.noise.kind != expected:
            raise TrapValidationError(
                f'Source {self.name!r}: {self.mechanism.value} noise must be {expected.value}, '
                f'got {self.noise.kind.value}'
            )


@dataclass(frozen=True)
class BudgetLine:
    name: str
    mechanism: str
    rate: float
    s_e_equivalent: float
    formula: str

    @property
    def rate_per_ms(self):
        return self.rate * 1e-3


@dataclass
class HeatingBudget:
    omega: float
    lines: list = field(default_factory=list)

    @property
    def total(self):
        return float(sum(line.rate for line in self.lines))

    def as_dict(self):
        return {
            'omega_mhz': self.omega / (2e6 * math.pi),
            'lines': [
                {
                    'name': line.name,
                    'mechanism': line.mechanism,
                    'quanta_per_s': line.rate,
                    'quanta_per_ms': line.rate_per_ms,
                    's_e_equivalent_v2_per_m2_hz': line.s_e_equivalent,
                    'formula': line.formula,
                }
                for line in self.lines
            ],
            'total_quanta_per_s': self.total,
            'total_quanta_per_ms': self.total * 1e-3,
        }

    def table(self):
        width = max([len(line.name) for line in self.lines] + [len('total')])
        rows = [f'{"source":<{width}}  {"mechanism":<12}  {"quanta/ms":>12}  {"S_E (V/m)^2/Hz":>15}']
        for line in self.lines:
            rows.append(f'{line.name:<{width}}  {line.mechanism:<12}  {line.rate_per_ms:>12.4g}  '
                        f'{line.s_e_equivalent:>15.4g}')
        rows.append(f'{"total":<{width}}  {"":<12}  {self.total * 1e-3:>12.4g}')
        return '\n'.join(rows)


FORMULAS = {
    Mechanism.FIELD: 'q^2 S_E / (4 m hbar w)',
    Mechanism.ELECTRODE: 'n q^2 S_V C_E^2 A_LP / (4 m hbar w)',
    Mechanism.RFAM_AXIAL: '[q^2 E0 dE0/dz / (m W^2)]^2 r / (4 m hbar w)',
    Mechanism.RFAM_RADIAL: '(2 m w^2 x)^2 r / (4 m hbar w)',
}


def heating_budget(species, omega, sources, coupling=None, v_rf=None, omega_rf=None, resonators=None):
    """Itemized heating rates at motional frequency ``omega``."""
    resonators = resonators or {}
    budget = HeatingBudget(omega=omega)
    for source in sources:
        if abs(source.noise.frequency - omega) > FREQUENCY_MATCH * omega:
            raise TrapValidationError(
                f'Source {source.name!r} is specified at {source.noise.frequency:.6g} rad/s, '
                f'budget frequency is {omega:.6g} rad/s'
            )
        r = source.noise.value
        if source.resonator is not None:
            if source.resonator not in resonators:
                raise TrapValidationError(f'Source {source.name!r} names unknown resonator {source.resonator!r}')
            r *= db_power_ratio(resonators[source.resonator].attenuation_db(omega))

        if source.mechanism == Mechanism.FIELD:
            rate = heating_rate_from_se(species, omega, r)
        elif source.mechanism == Mechanism.ELECTRODE:
            _require(coupling, source, 'coupling constants')
            axis = coupling.axial_index if source.axis is None else source.axis
            rate = electrode_noise_heating(species, omega, r, source.filter_rc, coupling.c_e[axis],
                                           source.n_electrodes)
        elif source.mechanism == Mechanism.RFAM_AXIAL:
            _require(coupling, source, 'coupling constants')
            _require(v_rf, source, 'the RF amplitude')
            _require(omega_rf, source, 'the RF frequency')
            e0 = coupling.d_e[coupling.axial_index] * v_rf
            rate = rfam_axial_heating(species, omega, omega_rf, e0, coupling.de_dz * v_rf, r, source.two_sideband)
        else:
            rate = rfam_radial_heating(species, omega, source.displacement, r, source.two_sideband)
        budget.lines.append(BudgetLine(
            name=source.name,
            mechanism=source.mechanism.value,
            rate=rate,
            s_e_equivalent=se_from_heating_rate(species, omega, rate),
            formula=FORMULAS[source.mechanism],
        ))
    logger.debug('Heating budget of %d sources: %.4g quanta/s', len(budget.lines), budget.total)
    return budget


def _require(value, source, what):
    if value is None:
        raise TrapValidationError(f'Source {source.name!r} ({source.mechanism.value}) needs {what}')
