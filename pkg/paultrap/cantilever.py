"""
Passive cooling of a micromechanical cantilever by a driven RF circuit.

The cantilever forms one plate of the coupling capacitor C_c of an RF
resonator (L0, C0). Its motion detunes the resonator; the delayed
response of the stored energy gives a damping rate and a spring shift.

Drive amplitude and input power are related by V_max^2 = 2 P Q Omega0 L0
(matched parallel resonator). Damping rates are angular (rad/s).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np
from scipy import integrate, optimize

from .core import CONSTANTS
from .exceptions import StaticInstabilityError, TrapValidationError

logger = logging.getLogger(__name__)

QUADRATURE_TOLERANCE = 1e-10


@lru_cache(maxsize=None)
def first_mode_eigenvalue():
    """beta L of the first clamped-free bending mode, root of cos(x) cosh(x) = -1."""
    return optimize.brentq(lambda x: math.cos(x) * math.cosh(x) + 1.0, 1.0, 3.0, xtol=1e-14)


def mode_shape(u):
    """First-mode displacement at fractional position ``u`` from the clamp, unit tip deflection."""
    bl = first_mode_eigenvalue()
    sigma = (math.cosh(bl) + math.cos(bl)) / (math.sinh(bl) + math.sin(bl))

    def raw(x):
        return (np.cosh(bl * x) - np.cos(bl * x)) - sigma * (np.sinh(bl * x) - np.sin(bl * x))

    return raw(np.asarray(u, dtype=float)) / raw(1.0)


def mode_integrals(h_c, h):
    """(xi', xi'', xi_c''): mean of f and f^2 over the overlap, and of f^2 over the beam."""
    if not h_c > 0 or not h > 0:
        raise TrapValidationError('Cantilever and overlap lengths must be positive')
    if h > h_c * (1 + 1e-12):
        raise TrapValidationError(f'Overlap length {h!r} exceeds cantilever length {h_c!r}')
    lower = max(0.0, 1.0 - h / h_c)
    span = 1.0 - lower
    xi_p = integrate.quad(mode_shape, lower, 1.0, epsabs=0, epsrel=QUADRATURE_TOLERANCE)[0] / span
    xi_pp = integrate.quad(lambda u: mode_shape(u) ** 2, lower, 1.0,
                           epsabs=0, epsrel=QUADRATURE_TOLERANCE)[0] / span
    xi_c = integrate.quad(lambda u: mode_shape(u) ** 2, 0.0, 1.0, epsabs=0, epsrel=QUADRATURE_TOLERANCE)[0]
    return float(xi_p), float(xi_pp), float(xi_c)


def parallel_plate_capacitance(w, h, d):
    if not (w > 0 and h > 0 and d > 0):
        raise TrapValidationError('Plate dimensions and gap must be positive')
    return CONSTANTS.epsilon0 * w * h / d


@dataclass(frozen=True)
class CantileverDevice:
    h_c: float
    s: float
    w: float
    rho: float
    d0: float
    h: float
    omega_c: float
    q_c_mech: float

    def __post_init__(self):
        for name in ('h_c', 's', 'w', 'rho', 'd0', 'h', 'omega_c', 'q_c_mech'):
            if not getattr(self, name) > 0:
                raise TrapValidationError(f'Cantilever {name} must be positive, got {getattr(self, name)!r}')
        if self.h > self.h_c * (1 + 1e-12):
            raise TrapValidationError('RF overlap length exceeds the cantilever length')

    @cached_property
    def integrals(self):
        return mode_integrals(self.h_c, self.h)

    @property
    def xi_prime(self):
        return self.integrals[0]

    @property
    def xi_dprime(self):
        return self.integrals[1]

    @property
    def xi_c_dprime(self):
        return self.integrals[2]

    @property
    def effective_mass(self):
        return self.rho * self.xi_c_dprime * self.w * self.h_c * self.s

    @property
    def coupling_capacitance(self):
        return parallel_plate_capacitance(self.w, self.h, self.d0)

    @property
    def gamma(self):
        """Intrinsic mechanical damping rate omega_c / Q_c."""
        return self.omega_c / self.q_c_mech


@dataclass(frozen=True)
class RfCircuit:
    l0: float
    c0: float
    c_c: float
    q_rf: float

    def __post_init__(self):
        if not (self.l0 > 0 and self.c_c > 0 and self.q_rf > 0) or self.c0 < 0:
            raise TrapValidationError('RF circuit needs L0, C_c, Q > 0 and C0 >= 0')

    @classmethod
    def from_resonance(cls, l0, omega0, c_c, q_rf):
        """Circuit whose C0 puts the resonance at ``omega0`` with coupling capacitance ``c_c``."""
        c0 = 1.0 / (omega0 ** 2 * l0) - c_c
        if c0 < 0:
            raise TrapValidationError('Coupling capacitance alone exceeds the resonant capacitance')
        return cls(l0=l0, c0=c0, c_c=c_c, q_rf=q_rf)

    @property
    def omega0(self):
        return 1.0 / math.sqrt(self.l0 * (self.c0 + self.c_c))

    @property
    def gamma(self):
        return self.omega0 / self.q_rf

    @property
    def participation(self):
        return self.c_c / (self.c_c + self.c0)


@dataclass(frozen=True)
class DampingResult:
    gamma_prime: float
    kappa: float
    omega_shifted: float
    phase: float

    @property
    def gamma_prime_hz(self):
        return self.gamma_prime / (2.0 * math.pi)


def lorentzian(delta_omega, omega0, q_rf):
    return 1.0 / (1.0 + (2.0 * q_rf * delta_omega / omega0) ** 2)


def rf_force(c_c, v_rf, d):
    """Time-averaged attraction C_c V^2 / (4 d)."""
    return c_c * v_rf ** 2 / (4.0 * d)


def v_max_squared(power, circuit):
    """Peak voltage squared on resonance for ``power`` delivered to the matched resonator."""
    if power < 0:
        raise TrapValidationError(f'Power must be non-negative, got {power!r}')
    return 2.0 * power * circuit.q_rf * circuit.omega0 * circuit.l0


def damping_and_shift(device, circuit, v_max_sq, delta_omega):
    """RF-induced damping Gamma' and spring constant ratio kappa at detuning ``delta_omega``."""
    m = device.effective_mass
    xi_p, xi_pp, _ = device.integrals
    line = lorentzian(delta_omega, circuit.omega0, circuit.q_rf)
    gamma = circuit.gamma
    tau = 4.0 * line / gamma
    phase = device.omega_c * tau
    c_c = circuit.c_c
    kappa = c_c * v_max_sq * line / (2.0 * m * device.omega_c ** 2 * device.d0 ** 2) * (
        xi_pp + 2.0 * xi_p ** 2 * circuit.q_rf * delta_omega * line / gamma * circuit.participation
    )
    gamma_prime = (circuit.q_rf * v_max_sq * c_c ** 2
                   / (m * device.omega_c * device.d0 ** 2 * (c_c + circuit.c0))
                   * xi_p ** 2 * delta_omega * line ** 2 / gamma * math.sin(phase))
    if kappa >= 1.0:
        raise StaticInstabilityError(f'Spring softening kappa={kappa:.4g} removes the restoring force', kappa)
    return DampingResult(
        gamma_prime=gamma_prime,
        kappa=kappa,
        omega_shifted=device.omega_c * math.sqrt(1.0 - kappa),
        phase=phase,
    )


@dataclass(frozen=True)
class EquivalentCircuit:
    l_eq: float
    c_eq: float
    r_eq: float
    r_rf: float


def equivalent_circuit(device, q_charge, gamma_prime=0.0):
    """Series LCR of the cantilever seen through a bias charge ``q_charge`` on the plate."""
    if q_charge == 0:
        raise TrapValidationError('Bias charge must be nonzero')
    l_eq = device.effective_mass * device.d0 ** 2 / (q_charge * device.xi_prime) ** 2
    return EquivalentCircuit(
        l_eq=l_eq,
        c_eq=1.0 / (device.omega_c ** 2 * l_eq),
        r_eq=l_eq * device.gamma,
        r_rf=l_eq * gamma_prime,
    )


def charge_from_inductance(device, l_eq):
    """Bias charge that produces equivalent inductance ``l_eq``."""
    if not l_eq > 0:
        raise TrapValidationError('Equivalent inductance must be positive')
    return device.d0 / device.xi_prime * math.sqrt(device.effective_mass / l_eq)


def effective_temperature(noise_voltages, resistances):
    """T_eff = sum of e_n^2 / (4 k_B (R_eq + R_RF + R_s))."""
    total = float(sum(noise_voltages))
    load = float(sum(resistances))
    if not load > 0:
        raise TrapValidationError('Total resistance must be positive')
    if total < 0:
        raise TrapValidationError('Noise spectral densities must be non-negative')
    return total / (4.0 * CONSTANTS.k_boltzmann * load)


def cooled_temperature(t_c, gamma, gamma_prime):
    """Mode temperature with only thermal mechanical noise, T_c Gamma / (Gamma + Gamma')."""
    if not gamma + gamma_prime > 0:
        raise TrapValidationError('Total damping must be positive')
    return t_c * gamma / (gamma + gamma_prime)


def ground_state_ratio(t_c, omega0, q_rf, q_c):
    """Heating-to-cooling rate ratio 2 k_B T_c Q_RF / (hbar Omega0 Q_c)."""
    return 2.0 * CONSTANTS.k_boltzmann * t_c * q_rf / (CONSTANTS.hbar * omega0 * q_c)


def _sweep_row(x, device, result, t_c):
    # anti-damped modes have no steady-state temperature
    total = device.gamma + result.gamma_prime
    t_eff = cooled_temperature(t_c, device.gamma, result.gamma_prime) if total > 0 else float('inf')
    return (x, result.gamma_prime, result.omega_shifted / (2.0 * math.pi), t_eff)


def power_sweep(device, circuit, powers, delta_omega, t_c=300.0):
    """Rows of (power, Gamma', f_c, T_eff) for the CLI sweep tables."""
    return [
        _sweep_row(power, device, damping_and_shift(device, circuit, v_max_squared(power, circuit), delta_omega), t_c)
        for power in powers
    ]


def detuning_sweep(device, circuit, power, detunings, t_c=300.0):
    v2 = v_max_squared(power, circuit)
    return [_sweep_row(delta, device, damping_and_shift(device, circuit, v2, delta), t_c) for delta in detunings]
