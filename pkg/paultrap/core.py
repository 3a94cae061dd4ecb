"""
Constants, unit conversions, ion species and RF drive parameters.

Everything inside the toolkit is SI with angular frequencies. MHz, um and
dB only appear at the edges (CLI, geometry documents, reports).
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

from scipy import constants as sc

from .exceptions import TrapValidationError


@dataclass(frozen=True)
class Constants:
    epsilon0: float = sc.epsilon_0
    mu0: float = sc.mu_0
    hbar: float = sc.hbar
    k_boltzmann: float = sc.k
    elementary_charge: float = sc.e
    amu: float = sc.atomic_mass
    speed_of_light: float = sc.c


CONSTANTS = Constants()


@dataclass(frozen=True)
class IonSpecies:
    mass: float
    charge: float
    label: str = ''

    def __post_init__(self):
        if not self.mass > 0:
            raise TrapValidationError(f'Ion mass must be positive, got {self.mass!r}')
        if self.charge == 0:
            raise TrapValidationError(f'Ion charge must be nonzero ({self.label or "unnamed"})')

    @property
    def mass_amu(self):
        return kg_to_amu(self.mass)

    @property
    def charge_e(self):
        return self.charge / CONSTANTS.elementary_charge


@dataclass(frozen=True)
class RfDrive:
    omega_rf: float
    v_rf: float
    phase_deg: float = 0.0

    def __post_init__(self):
        if not self.omega_rf > 0:
            raise TrapValidationError(f'RF angular frequency must be positive, got {self.omega_rf!r}')
        if self.v_rf < 0:
            raise TrapValidationError(f'RF amplitude must be non-negative, got {self.v_rf!r}')

    @classmethod
    def from_mhz(cls, freq_mhz, v_rf, phase_deg=0.0):
        return cls(omega_rf=mhz_to_omega(freq_mhz), v_rf=v_rf, phase_deg=phase_deg)

    @property
    def freq_mhz(self):
        return omega_to_mhz(self.omega_rf)


def make_species(mass_amu, charge_e, label=''):
    if not mass_amu > 0:
        raise TrapValidationError(f'Ion mass must be positive, got {mass_amu!r} amu')
    if int(charge_e) != charge_e or charge_e == 0:
        raise TrapValidationError(f'Ion charge must be a nonzero integer multiple of e, got {charge_e!r}')
    return IonSpecies(
        mass=amu_to_kg(mass_amu),
        charge=int(charge_e) * CONSTANTS.elementary_charge,
        label=label,
    )


_SPECIES_LABEL = re.compile(r'^\s*(\d+)\s*([A-Z][a-z]?)\s*(\d*)\s*([+-]+)\s*$')


def parse_species(label):
    """
    Build a species from a label such as "24Mg+", "9Be+" or "40Ca2+".
    The mass is taken as mass number x amu.
    """
    match = _SPECIES_LABEL.match(label or '')
    if not match:
        raise TrapValidationError(f'Cannot parse species label {label!r} (expected e.g. "24Mg+")')
    mass_number, _element, count, signs = match.groups()
    sign = 1 if signs[0] == '+' else -1
    if count:
        if len(signs) != 1:
            raise TrapValidationError(f'Ambiguous charge in species label {label!r}')
        charge = sign * int(count)
    else:
        if len(set(signs)) != 1:
            raise TrapValidationError(f'Mixed charge signs in species label {label!r}')
        charge = sign * len(signs)
    return make_species(int(mass_number), charge, label.strip())


# Unit conversions

def amu_to_kg(mass_amu):
    return mass_amu * CONSTANTS.amu


def kg_to_amu(mass_kg):
    return mass_kg / CONSTANTS.amu


def mhz_to_omega(freq_mhz):
    return 2.0 * math.pi * freq_mhz * 1e6


def omega_to_mhz(omega):
    return omega / (2.0 * math.pi * 1e6)


def um_to_m(value_um):
    return value_um * 1e-6


def m_to_um(value_m):
    return value_m * 1e6


def db_power_ratio(db):
    """Power ratio for a value in dB (10^(dB/10))."""
    return 10.0 ** (db / 10.0)


def power_ratio_db(ratio):
    if not ratio > 0:
        raise TrapValidationError(f'Power ratio must be positive to express in dB, got {ratio!r}')
    return 10.0 * math.log10(ratio)


def dbm_to_watts(dbm):
    return 1e-3 * db_power_ratio(dbm)


def watts_to_dbm(watts):
    return power_ratio_db(watts / 1e-3)
