"""Equilibrium positions of linear Coulomb crystals in a harmonic axial well."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .core import CONSTANTS
from .exceptions import ConvergenceError, TrapValidationError

logger = logging.getLogger(__name__)

MAX_IONS = 50
GRADIENT_TOLERANCE = 1e-10


@dataclass(frozen=True)
class CrystalResult:
    positions: np.ndarray
    length_scale: float
    converged: bool

    @property
    def dimensionless(self):
        return self.positions / self.length_scale

    @property
    def spacings(self):
        return np.diff(self.positions)


def characteristic_length(species, omega_z):
    """s = (q^2 / (4 pi eps0 m omega_z^2))^(1/3)."""
    if not omega_z > 0:
        raise TrapValidationError(f'Axial frequency must be positive, got {omega_z!r}')
    return (species.charge ** 2 / (4.0 * math.pi * CONSTANTS.epsilon0 * species.mass * omega_z ** 2)) ** (1.0 / 3.0)


def _forces(u):
    diff = u[:, None] - u[None, :]
    np.fill_diagonal(diff, np.inf)
    return u - np.sum(np.sign(diff) / diff ** 2, axis=1)


def _jacobian(u):
    diff = np.abs(u[:, None] - u[None, :])
    np.fill_diagonal(diff, np.inf)
    coupling = 2.0 / diff ** 3
    jac = -coupling
    np.fill_diagonal(jac, 1.0 + coupling.sum(axis=1))
    return jac


def _energy(u):
    diff = np.abs(u[:, None] - u[None, :])
    upper = diff[np.triu_indices(len(u), 1)]
    return 0.5 * float(u @ u) + float(np.sum(1.0 / upper))


def _solve(n):
    guess = 1.08 * (np.arange(n) - (n - 1) / 2.0)
    solution = optimize.root(_forces, guess, jac=_jacobian, method='hybr', options={'xtol': 1e-14})
    if solution.success and np.all(np.diff(solution.x) > 0):
        return solution.x
    logger.warning('Force balance for %d ions did not converge (%s); minimizing the energy instead',
                   n, solution.message)
    relaxed = optimize.minimize(_energy, guess, jac=_forces, method='L-BFGS-B',
                                options={'gtol': 1e-12, 'maxiter': 10000})
    polished = optimize.root(_forces, np.sort(relaxed.x), jac=_jacobian, method='hybr')
    return np.sort(polished.x)


def equilibrium_positions(species, omega_z, n):
    """Axial positions (m, ascending) of ``n`` ions of one species in a well of frequency ``omega_z``."""
    if int(n) != n or not 1 <= n <= MAX_IONS:
        raise TrapValidationError(f'Ion count must be an integer in [1, {MAX_IONS}], got {n!r}')
    n = int(n)
    scale = characteristic_length(species, omega_z)
    if n == 1:
        return CrystalResult(positions=np.zeros(1), length_scale=scale, converged=True)
    u = _solve(n)
    u = 0.5 * (u - u[::-1])
    residual = float(np.max(np.abs(_forces(u))))
    if residual > GRADIENT_TOLERANCE:
        raise ConvergenceError(f'Crystal of {n} ions did not reach force balance', last_iterate=u,
                               residual=residual)
    return CrystalResult(positions=u * scale, length_scale=scale, converged=True)
