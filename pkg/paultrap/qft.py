"""
Quantum Fourier transform on small registers, coherent and semiclassical.

Basis index k has its most significant bit on qubit 1. The coherent
transform is y_j = sum_k x_k exp(2 pi i j k / N) / sqrt(N). The
semiclassical transform measures qubit 1 first and feeds each outcome
forward as a phase on the later qubits; its measurement register comes
out bit-reversed with respect to j.
"""
from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .exceptions import TrapValidationError

logger = logging.getLogger(__name__)

MAX_QUBITS = 12
NORM_TOLERANCE = 1e-12
SUM_TOLERANCE = 1e-9


class StateKind(str, Enum):
    PERIOD1 = 'period1'
    PERIOD2 = 'period2'
    PERIOD3 = 'period3'
    PERIOD4 = 'period4'
    PERIOD8 = 'period8'


# Fidelity of the prepared input states in the reference experiment.
PREPARATION_FIDELITY = {
    StateKind.PERIOD1: 0.98,
    StateKind.PERIOD2: 0.98,
    StateKind.PERIOD3: 0.90,
    StateKind.PERIOD4: 0.98,
    StateKind.PERIOD8: 0.99,
}

_SUPPORT = {
    StateKind.PERIOD1: (0, 1, 2, 3, 4, 5, 6, 7),
    StateKind.PERIOD2: (1, 3, 5, 7),
    StateKind.PERIOD3: (1, 3, 4, 6),
    StateKind.PERIOD4: (3, 7),
    StateKind.PERIOD8: (7,),
}
_PHASED = (3, 6)


def _qubits(size):
    n = int(round(math.log2(size))) if size > 0 else -1
    if n < 1 or 2 ** n != size:
        raise TrapValidationError(f'Register size must be a power of two, got {size}')
    if n > MAX_QUBITS:
        raise TrapValidationError(f'At most {MAX_QUBITS} qubits are supported, got {n}')
    return n


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray

    def __post_init__(self):
        amplitudes = np.asarray(self.amplitudes, dtype=complex).ravel()
        _qubits(len(amplitudes))
        norm = float(np.sum(np.abs(amplitudes) ** 2))
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise TrapValidationError(f'State is not normalized (sum |a|^2 = {norm:.15g})')
        object.__setattr__(self, 'amplitudes', amplitudes)

    @classmethod
    def normalized(cls, values):
        values = np.asarray(values, dtype=complex).ravel()
        norm = np.linalg.norm(values)
        if norm == 0:
            raise TrapValidationError('State has zero norm')
        return cls(values / norm)

    @property
    def n_qubits(self):
        return _qubits(len(self.amplitudes))

    @property
    def probabilities(self):
        return Distribution(np.abs(self.amplitudes) ** 2)


@dataclass(frozen=True, eq=False)
class Distribution:
    probabilities: np.ndarray

    def __post_init__(self):
        probabilities = np.asarray(self.probabilities, dtype=float).ravel()
        _qubits(len(probabilities))
        if np.any(probabilities < -SUM_TOLERANCE):
            raise TrapValidationError('Probabilities must be non-negative')
        total = float(probabilities.sum())
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise TrapValidationError(f'Probabilities sum to {total:.12g}, not 1')
        object.__setattr__(self, 'probabilities', np.clip(probabilities, 0.0, None))

    @property
    def n_qubits(self):
        return _qubits(len(self.probabilities))

    def __getitem__(self, index):
        return float(self.probabilities[index])

    def labels(self):
        return [format(i, f'0{self.n_qubits}b') for i in range(len(self.probabilities))]

    def as_dict(self):
        return dict(zip(self.labels(), (float(p) for p in self.probabilities)))


def prepare(kind, phase=0.0):
    """
    Periodic 3-qubit input state. ``phase`` (radians) multiplies |011> and
    |110> of the period-3 state.
    """
    kind = StateKind(kind)
    if phase and kind != StateKind.PERIOD3:
        raise TrapValidationError('A relative phase only applies to the period3 state')
    amplitudes = np.zeros(8, dtype=complex)
    for k in _SUPPORT[kind]:
        amplitudes[k] = cmath.exp(1j * phase) if k in _PHASED and kind == StateKind.PERIOD3 else 1.0
    return PureState.normalized(amplitudes)


def basis_state(k, n):
    amplitudes = np.zeros(2 ** n, dtype=complex)
    amplitudes[k] = 1.0
    return PureState(amplitudes)


def coherent_qft(state):
    return PureState(np.fft.ifft(state.amplitudes, norm='ortho'))


def inverse_qft(state):
    return PureState(np.fft.fft(state.amplitudes, norm='ortho'))


def product_form(k, n):
    """QFT of |k> built qubit by qubit from binary fractions of k."""
    factors = []
    for level in range(1, n + 1):
        # output qubit ``level`` (most significant first) carries phase 2 pi k / 2^level
        factors.append(np.array([1.0, cmath.exp(2j * math.pi * k / 2 ** level)]) / math.sqrt(2.0))
    amplitudes = factors[0]
    for factor in factors[1:]:
        amplitudes = np.kron(amplitudes, factor)
    return PureState(amplitudes)


def bit_reverse(index, n):
    return int(format(index, f'0{n}b')[::-1], 2)


def reverse_bits(distribution):
    n = distribution.n_qubits
    order = [bit_reverse(i, n) for i in range(2 ** n)]
    return Distribution(distribution.probabilities[order])


def _measure(tensor, qubit, outcomes, n, sign, register):
    if qubit == n:
        register[sum(m << (n - 1 - i) for i, m in enumerate(outcomes))] += abs(complex(tensor)) ** 2
        return
    theta = sign * sum(2.0 * math.pi / 2 ** (qubit - k + 1) for k, m in enumerate(outcomes) if m)
    zero, one = tensor[0], tensor[1] * cmath.exp(1j * theta)
    for outcome, branch in ((0, (zero + one) / math.sqrt(2.0)), (1, (zero - one) / math.sqrt(2.0))):
        if np.any(branch):
            _measure(branch, qubit + 1, outcomes + (outcome,), n, sign, register)


def semiclassical_qft(state, raw=False, conjugate=False):
    """
    Exact outcome distribution of the measured QFT, by enumerating every
    measurement branch.

    By default the distribution is indexed by j, which equals
    ``|coherent_qft(state)|^2``. ``raw=True`` returns the measurement
    register as recorded (bit-reversed j). ``conjugate=True`` uses the
    conjugated feed-forward rotations, which realize the inverse
    transform; for real amplitudes both give the same distribution.
    """
    if not isinstance(state, PureState):
        state = PureState(state)
    n = state.n_qubits
    register = np.zeros(2 ** n)
    _measure(state.amplitudes.reshape((2,) * n), 0, (), n, -1.0 if conjugate else 1.0, register)
    measured = Distribution(register)
    return measured if raw else reverse_bits(measured)


def sso(measured, expected):
    """Squared statistical overlap (sum_j sqrt(m_j e_j))^2."""
    m = measured.probabilities if isinstance(measured, Distribution) else np.asarray(measured, dtype=float)
    e = expected.probabilities if isinstance(expected, Distribution) else np.asarray(expected, dtype=float)
    if m.shape != e.shape:
        raise TrapValidationError('Distributions have different sizes')
    return float(min(1.0, np.sum(np.sqrt(m * e)) ** 2))


def phase_sweep(phases):
    """Semiclassical QFT output of the phased period-3 state for each phase (radians)."""
    return [(float(phi), semiclassical_qft(prepare(StateKind.PERIOD3, phi))) for phi in phases]


def depolarize(distribution, eps):
    """Mix with the uniform distribution: (1 - eps) p + eps / N."""
    if not 0.0 <= eps <= 1.0:
        raise TrapValidationError(f'Depolarizing weight must lie in [0, 1], got {eps!r}')
    p = distribution.probabilities
    return Distribution((1.0 - eps) * p + eps / len(p))


def sample_distribution(distribution, shots, seed=None):
    """Empirical distribution of ``shots`` draws."""
    if shots < 1:
        raise TrapValidationError(f'Shot count must be positive, got {shots!r}')
    rng = np.random.default_rng(seed)
    p = distribution.probabilities
    counts = rng.multinomial(int(shots), p / p.sum())
    return Distribution(counts / counts.sum())
