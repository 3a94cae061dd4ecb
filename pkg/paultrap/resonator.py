"""Lumped parallel-RLC models of the RF step-up resonator."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from .core import CONSTANTS
from .exceptions import TrapValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RlcModel:
    l: float
    c: float
    r_parallel: float

    def __post_init__(self):
        if not (self.l > 0 and self.c > 0 and self.r_parallel > 0):
            raise TrapValidationError('L, C and R must all be positive')

    @property
    def omega0(self):
        return 1.0 / math.sqrt(self.l * self.c)

    @property
    def q(self):
        return self.r_parallel * self.c * self.omega0

    @property
    def freq_mhz(self):
        return self.omega0 / (2e6 * math.pi)

    def as_dict(self):
        return {
            'l_h': self.l,
            'c_pf': self.c * 1e12,
            'r_parallel_kohm': self.r_parallel * 1e-3,
            'freq_mhz': self.freq_mhz,
            'q': self.q,
        }


@dataclass(frozen=True)
class ChipLoss:
    r_loaded: float
    r_chip: float
    dissipated: float


def rlc_from_measurement(omega0, q, l):
    """Parallel RLC with resonance ``omega0``, quality factor ``q`` and inductance ``l``."""
    if not omega0 > 0:
        raise TrapValidationError(f'Resonance frequency must be positive, got {omega0!r}')
    if not q > 0:
        raise TrapValidationError(f'Quality factor must be positive, got {q!r}')
    if not l > 0:
        raise TrapValidationError(f'Inductance must be positive, got {l!r}')
    c = 1.0 / (omega0 ** 2 * l)
    return RlcModel(l=l, c=c, r_parallel=q / (c * omega0))


def chip_loss(model_before, q_after, v_rf):
    """
    Chip resistance inferred from the drop in Q after connecting the trap,
    assuming the resonance frequency does not move. R_t is the resistance
    in parallel with R that gives R_p; P = V^2 / (2 R_t).
    """
    if not 0 < q_after < model_before.q:
        raise TrapValidationError(
            f'Q after loading ({q_after!r}) must be positive and below the unloaded Q ({model_before.q:.6g})'
        )
    r_p = q_after / (model_before.c * model_before.omega0)
    r = model_before.r_parallel
    r_chip = r * r_p / (r - r_p)
    return ChipLoss(r_loaded=r_p, r_chip=r_chip, dissipated=0.5 * v_rf ** 2 / r_chip)


def loaded_q(q0, kappa):
    if q0 <= 0 or kappa < 0:
        raise TrapValidationError('Q0 must be positive and the coupling non-negative')
    return q0 / (1.0 + kappa)


def coupling_from_q(q0, q_loaded):
    """kappa such that loaded_q(q0, kappa) == q_loaded."""
    if not 0 < q_loaded <= q0:
        raise TrapValidationError('Loaded Q must be positive and not above Q0')
    return q0 / q_loaded - 1.0


def coupling_coefficient(turns_ratio, r_source, r_parallel):
    """kappa = N^2 R_s / R for a transformer-coupled source."""
    if not r_parallel > 0:
        raise TrapValidationError('Parallel resistance must be positive')
    return turns_ratio ** 2 * r_source / r_parallel


def power_coupling(kappa):
    """Fraction of source power delivered to the resonator (1 when kappa = 1)."""
    return 4.0 * kappa / (1.0 + kappa) ** 2


def q_from_linewidth(omega0, delta_omega_fwhm):
    if not delta_omega_fwhm > 0:
        raise TrapValidationError(f'Linewidth must be positive, got {delta_omega_fwhm!r}')
    return omega0 / delta_omega_fwhm


def lead_inductance(length, wire_radius, separation):
    """Inductance of a wire pair, mu0 l (ln(2d/a) + 1/4)."""
    if not (length > 0 and wire_radius > 0 and separation > wire_radius):
        raise TrapValidationError('Lead geometry needs l > 0 and d > a > 0')
    return CONSTANTS.mu0 * length * (math.log(2.0 * separation / wire_radius) + 0.25)


def lc_resonance(l, c):
    """Angular resonance frequency 1/sqrt(LC)."""
    if not (l > 0 and c > 0):
        raise TrapValidationError('L and C must be positive')
    return 1.0 / math.sqrt(l * c)
