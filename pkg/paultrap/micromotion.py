"""
Micromotion: displacement by stray fields, RF-driven amplitude, laser
modulation index, Bessel-sideband fluorescence and RF phase imbalance.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special

from .core import CONSTANTS
from .exceptions import TrapValidationError

logger = logging.getLogger(__name__)

MAX_SIDEBANDS = 64
SIDEBAND_TAIL = 1e-9
PHASE_WARNING_RAD = 0.2


@dataclass(frozen=True)
class MicromotionState:
    displacement: float
    amplitude: float
    beta: float
    geometry_angle_deg: float

    def __post_init__(self):
        if self.amplitude < 0 or self.beta < 0:
            raise TrapValidationError('Micromotion amplitude and modulation index must be non-negative')


@dataclass(frozen=True)
class LineParams:
    gamma: float
    omega_rf: float
    wavelength: float
    detuning: float = 0.0

    def __post_init__(self):
        if not self.gamma > 0:
            raise TrapValidationError(f'Linewidth must be positive, got {self.gamma!r}')
        if not self.wavelength > 0:
            raise TrapValidationError(f'Wavelength must be positive, got {self.wavelength!r}')
        if not self.omega_rf > 0:
            raise TrapValidationError(f'RF frequency must be positive, got {self.omega_rf!r}')


def displacement_from_field(species, omega_r, e_dc):
    """x_d = q E_dc / (m omega_r^2)."""
    if not omega_r > 0:
        raise TrapValidationError(f'Secular frequency must be positive, got {omega_r!r}')
    return species.charge * e_dc / (species.mass * omega_r ** 2)


def micromotion_amplitude(omega_r, omega_rf, x_d):
    if not omega_rf > 0:
        raise TrapValidationError(f'RF frequency must be positive, got {omega_rf!r}')
    return math.sqrt(2.0) * omega_r / omega_rf * x_d


def modulation_index(wavelength, x_um, angle_deg):
    """beta = (2 pi / lambda) x cos(theta); ``x_um`` is the micromotion amplitude in metres."""
    if not wavelength > 0:
        raise TrapValidationError(f'Wavelength must be positive, got {wavelength!r}')
    return abs(2.0 * math.pi / wavelength * x_um * math.cos(math.radians(angle_deg)))


def amplitude_for_index(wavelength, beta, angle_deg):
    """Micromotion amplitude giving modulation index ``beta``."""
    cosine = math.cos(math.radians(angle_deg))
    if abs(cosine) < 1e-15:
        raise TrapValidationError('No amplitude reaches a nonzero index perpendicular to the beam')
    return beta * wavelength / (2.0 * math.pi * abs(cosine))


def micromotion_state(species, omega_r, omega_rf, e_dc, wavelength, angle_deg):
    """Field -> displacement -> amplitude -> modulation index in one step."""
    x_d = displacement_from_field(species, omega_r, e_dc)
    x_mm = abs(micromotion_amplitude(omega_r, omega_rf, x_d))
    return MicromotionState(
        displacement=x_d,
        amplitude=x_mm,
        beta=modulation_index(wavelength, x_mm, angle_deg),
        geometry_angle_deg=angle_deg,
    )


def sideband_count(beta):
    """Smallest n with sum_{|k|<=n} J_k(beta)^2 above 1 - 1e-9, capped."""
    total = special.jv(0, beta) ** 2
    for n in range(1, MAX_SIDEBANDS + 1):
        total += 2.0 * special.jv(n, beta) ** 2
        if total > 1.0 - SIDEBAND_TAIL:
            return n
    logger.warning('Sideband sum for beta=%g still short by %.2e at n=%d', beta, 1.0 - total, MAX_SIDEBANDS)
    return MAX_SIDEBANDS


def fluorescence_spectrum(line, beta, n_max=None):
    """
    Relative low-intensity scattering rate versus detuning (rad/s):
    sum_n J_n^2(beta) (gamma/2)^2 / ((delta + n Omega)^2 + (gamma/2)^2).
    Normalized so that beta = 0 on resonance gives 1.
    """
    if beta < 0:
        raise TrapValidationError(f'Modulation index must be non-negative, got {beta!r}')
    needed = sideband_count(beta)
    if n_max is None:
        n_max = needed
    elif n_max < needed:
        raise TrapValidationError(f'n_max={n_max} truncates the sideband sum for beta={beta} (need {needed})')
    orders = np.arange(-n_max, n_max + 1)
    weights = special.jv(orders, beta) ** 2
    half = line.gamma / 2.0

    def rate(delta):
        d = np.asarray(delta, dtype=float)
        shifted = d[..., None] + orders * line.omega_rf
        values = np.sum(weights * half ** 2 / (shifted ** 2 + half ** 2), axis=-1)
        return float(values) if values.ndim == 0 else values

    return rate


def equal_sideband_index():
    """beta where the carrier and first sideband have equal strength (J0^2 = J1^2)."""
    return optimize.brentq(lambda b: special.jv(0, b) ** 2 - special.jv(1, b) ** 2, 1.0, 2.0, xtol=1e-12)


def phase_from_path_difference(delta_d, omega_rf):
    """RF phase (degrees) accumulated over a cable length difference."""
    freq = omega_rf / (2.0 * math.pi)
    return 360.0 * delta_d * freq / CONSTANTS.speed_of_light


def phase_imbalance_micromotion(species, e0, phi_deg, omega_rf):
    """
    Micromotion amplitude |x0| = q E0 phi / (m Omega^2) from an RF phase
    difference ``phi_deg`` between the RF electrodes.
    """
    phi = math.radians(phi_deg)
    if abs(phi) > PHASE_WARNING_RAD:
        logger.warning('Phase imbalance %.3f rad is outside the small-angle regime', phi)
    return abs(species.charge * e0 * phi / (species.mass * omega_rf ** 2))


def capacitor_impedance(c, omega):
    return 1.0 / (1j * omega * c)


def inductor_impedance(l, omega):
    return 1j * omega * l


def rc_phase_shift(z_series, z_shunt):
    """
    Output/input of a divider with ``z_series`` then ``z_shunt`` to ground.
    Returns (phase in degrees, magnitude) of the ratio. The phase is that of
    the output relative to the input, so a lag is negative: a series R with
    a shunt C gives -atan(omega R C).
    """
    total = complex(z_series) + complex(z_shunt)
    if total == 0:
        raise TrapValidationError('Divider impedances sum to zero')
    ratio = complex(z_shunt) / total
    return math.degrees(np.angle(ratio)), abs(ratio)
