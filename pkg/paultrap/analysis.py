"""
Trap characterization: RF null, secular frequencies and principal axes,
trap depth, and Mathieu stability.

The potential energy of the ion is U = q phi_dc + k |E_rf|^2 with
k = q^2 V_rf^2 / (4 m Omega^2) (pseudopotential of the 1 V RF basis field).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from django.conf import settings
from scipy import linalg, optimize

from .core import CONSTANTS
from .exceptions import ConvergenceError, NotConfiningError, SaddleNotFoundError, TrapValidationError
from .fields import IdealQuadrupole, pseudopotential_prefactor

logger = logging.getLogger(__name__)

MAX_ITERATIONS = 200
# Relative eigenvalue below which the axial direction counts as unconfined
# (translation-invariant sources such as the ideal quadrupole without an
# axial well, or very long rails).
FREE_AXIS_TOLERANCE = 1e-6
DEGENERACY_TOLERANCE = 1e-6


@dataclass(frozen=True)
class RfNullResult:
    point: np.ndarray
    residual_field: float
    iterations: int


@dataclass(frozen=True)
class SecularResult:
    null_point: np.ndarray
    rf_null: np.ndarray
    omegas: tuple
    axes: np.ndarray
    tilt_deg: Optional[float]
    degenerate: bool
    axially_free: bool
    axial_index: int
    hessian: np.ndarray

    @property
    def freqs_mhz(self):
        return tuple(w / (2e6 * math.pi) for w in self.omegas)


@dataclass(frozen=True)
class MathieuParams:
    a: float
    q: float


@dataclass(frozen=True)
class StabilityResult:
    stable: bool
    beta: float
    beta_approx: float
    trace: float


@dataclass(frozen=True)
class TrapDepth:
    depth: float
    escape_point: np.ndarray
    null_point: np.ndarray
    radial_only: bool

    @property
    def depth_ev(self):
        return self.depth / CONSTANTS.elementary_charge

    @property
    def depth_mev(self):
        return 1e3 * self.depth_ev


def default_guess(source):
    if isinstance(source, IdealQuadrupole):
        return np.zeros(3)
    rf = source._rects[source.rf_weights() > 0]
    return np.array([
        0.5 * (rf[:, 0].min() + rf[:, 2].max()),
        0.5 * (rf[:, 1].min() + rf[:, 3].max()),
        source.length_scale,
    ])


def _scale(source, point):
    if isinstance(source, IdealQuadrupole):
        return source.length_scale
    return max(float(point[2]), 1e-3 * source.length_scale)


def find_rf_null(source, species=None, guess=None, free_axes=None, max_iterations=MAX_ITERATIONS):
    """
    Locate the point of minimal RF field magnitude. ``free_axes`` limits
    the search to a subset of coordinates (the others stay at the guess).
    """
    p0 = np.array(default_guess(source) if guess is None else guess, dtype=float)
    source.check_points(p0)
    free = list(range(3) if free_axes is None else free_axes)
    scale = _scale(source, p0)

    def point_of(u):
        p = p0.copy()
        p[free] = u * scale
        return p

    def residual(u):
        _, e, _ = source.rf_basis(point_of(u), gradient=False)
        return e[0] * scale

    def jacobian(u):
        _, _, g = source.rf_basis(point_of(u))
        return g[0][:, free] * scale * scale

    u0 = p0[free] / scale
    lower = np.full(len(free), -np.inf)
    if not isinstance(source, IdealQuadrupole) and 2 in free:
        lower[free.index(2)] = 1e-3
    result = optimize.least_squares(
        residual, u0, jac=jacobian, method='trf', bounds=(lower, np.inf),
        xtol=1e-12, ftol=1e-14, gtol=1e-14, max_nfev=max_iterations,
    )
    if result.status > 0:
        point = point_of(result.x)
        iterations = result.nfev
    else:
        logger.warning('RF null trust-region search stopped (%s); retrying with Powell', result.message)
        fallback = optimize.minimize(
            lambda u: float(np.sum(residual(u) ** 2)), result.x, method='Powell',
            bounds=list(zip(lower, [None] * len(free))),
            options={'maxiter': max_iterations * 10, 'xtol': 1e-12, 'ftol': 1e-30},
        )
        point = point_of(fallback.x)
        if not fallback.success:
            _, e, _ = source.rf_basis(point, gradient=False)
            raise ConvergenceError('RF null search did not converge', last_iterate=point,
                                   residual=float(np.linalg.norm(e[0])))
        iterations = result.nfev + fallback.nit
    _, e, _ = source.rf_basis(point, gradient=False)
    return RfNullResult(point=point, residual_field=float(np.linalg.norm(e[0])), iterations=iterations)


def energy(source, species, points):
    """Potential energy q phi_dc + pseudopotential (J) at each point."""
    pts = source.check_points(points)
    phi, _, _ = source.static(pts, gradient=False)
    _, e_rf, _ = source.rf_basis(pts, gradient=False)
    return species.charge * phi + pseudopotential_prefactor(source, species) * np.sum(e_rf ** 2, axis=1)


def energy_gradient(source, species, point):
    _, e_dc, _ = source.static(point, gradient=False)
    _, e_rf, g_rf = source.rf_basis(point)
    k = pseudopotential_prefactor(source, species)
    return -species.charge * e_dc[0] + 2.0 * k * g_rf[0].T @ e_rf[0]


def energy_hessian(source, species, point):
    point = np.asarray(point, dtype=float)
    _, _, g_dc = source.static(point)
    _, e_rf, g_rf = source.rf_basis(point)
    k = pseudopotential_prefactor(source, species)
    g = g_rf[0]
    hessian = -species.charge * 0.5 * (g_dc[0] + g_dc[0].T) + 2.0 * k * g.T @ g
    if np.any(e_rf[0]):
        # E . d2E term, by central differences of the gradient tensor
        h = 1e-4 * _scale(source, point)
        third = np.empty((3, 3, 3))
        for axis in range(3):
            step = np.zeros(3)
            step[axis] = h
            _, _, plus = source.rf_basis(point + step)
            _, _, minus = source.rf_basis(point - step)
            third[:, :, axis] = (plus[0] - minus[0]) / (2.0 * h)
        correction = np.einsum('i,ijl->jl', e_rf[0], third)
        hessian = hessian + 2.0 * k * 0.5 * (correction + correction.T)
    return hessian


def _equilibrium(source, species, start, free=None):
    free = list(range(3) if free is None else free)
    start = np.asarray(start, dtype=float)
    scale = _scale(source, start)
    norm = float(np.linalg.norm(energy_hessian(source, species, start))) or 1.0

    def point_of(u):
        p = start.copy()
        p[free] = u * scale
        return p

    def residual(u):
        return energy_gradient(source, species, point_of(u))[free] / (norm * scale)

    def jacobian(u):
        return energy_hessian(source, species, point_of(u))[np.ix_(free, free)] / norm

    result = optimize.least_squares(residual, start[free] / scale, jac=jacobian, method='lm',
                                    xtol=1e-14, ftol=1e-14, gtol=1e-14, max_nfev=MAX_ITERATIONS)
    if not result.success:
        raise ConvergenceError('Equilibrium search did not converge', last_iterate=point_of(result.x),
                               residual=float(np.linalg.norm(result.fun)))
    return point_of(result.x)


def _axial_split(source, eigvals, eigvecs):
    axial = int(np.argmax(np.abs(eigvecs[source.axial_axis, :])))
    largest = float(np.max(np.abs(eigvals))) or 1.0
    free = abs(eigvals[axial]) <= FREE_AXIS_TOLERANCE * largest
    return axial, free


def _tilt(source, radial_vectors, radial_omegas):
    if abs(radial_omegas[1] - radial_omegas[0]) <= DEGENERACY_TOLERANCE * max(radial_omegas):
        return None, True
    transverse = [i for i in range(3) if i != source.axial_axis]
    v = radial_vectors[0]
    angle = math.degrees(math.atan2(v[transverse[1]], v[transverse[0]]))
    if angle > 90.0:
        angle -= 180.0
    elif angle <= -90.0:
        angle += 180.0
    return angle, False


def secular_frequencies(source, species, guess=None):
    """Secular frequencies and principal axes at the minimum of the total potential."""
    null = find_rf_null(source, species, guess)
    point = _equilibrium(source, species, null.point)
    hessian = energy_hessian(source, species, point)
    eigvals, eigvecs = linalg.eigh(0.5 * (hessian + hessian.T))
    axial, axially_free = _axial_split(source, eigvals, eigvecs)
    confining = [i for i in range(3) if not (axially_free and i == axial)]
    if np.any(eigvals[confining] <= 0) or (axially_free and eigvals[axial] < -FREE_AXIS_TOLERANCE * abs(eigvals).max()):
        raise NotConfiningError(
            f'Total potential is not confining at {point.tolist()} (Hessian eigenvalues {eigvals.tolist()})',
            eigenvalues=eigvals,
        )
    omegas = np.sqrt(np.clip(eigvals, 0.0, None) / species.mass)
    if axially_free:
        omegas[axial] = 0.0
    order = np.argsort(omegas)
    omegas, eigvecs = omegas[order], eigvecs[:, order]
    axial = int(np.where(order == axial)[0][0])
    radial = [i for i in range(3) if i != axial]
    tilt, degenerate = _tilt(source, [eigvecs[:, i] for i in radial], [omegas[i] for i in radial])
    logger.debug('Secular frequencies %s MHz at %s', omegas / (2e6 * math.pi), point)
    return SecularResult(
        null_point=point, rf_null=null.point, omegas=tuple(float(w) for w in omegas), axes=eigvecs.T.copy(),
        tilt_deg=tilt, degenerate=degenerate, axially_free=bool(axially_free), axial_index=axial,
        hessian=hessian,
    )


def _first_local_max(values):
    for i in range(1, len(values) - 1):
        if values[i] >= values[i - 1] and values[i] > values[i + 1]:
            return i
    return None


def trap_depth(source, species, guess=None, box=None):
    """
    Barrier height from the trap minimum to the lowest escape saddle.

    Rays are cast from the minimum along each principal direction; the
    first maximum on a ray seeds a stationary-point refinement. When the
    axial direction is unconfined the search stays in the transverse plane.
    """
    null = find_rf_null(source, species, guess)
    point = _equilibrium(source, species, null.point)
    hessian = energy_hessian(source, species, point)
    eigvals, eigvecs = linalg.eigh(0.5 * (hessian + hessian.T))
    _, axially_free = _axial_split(source, eigvals, eigvecs)
    free = [i for i in range(3) if not (axially_free and i == source.axial_axis)]
    height = _scale(source, point)
    box = (box if box is not None else getattr(settings, 'PAULTRAP_DEPTH_BOX', 10.0)) * height
    u0 = float(energy(source, species, point)[0])

    sub = 0.5 * (hessian + hessian.T)[np.ix_(free, free)]
    _, sub_vecs = linalg.eigh(sub)
    directions = []
    for column in sub_vecs.T:
        d = np.zeros(3)
        d[free] = column
        directions.extend([d, -d])

    ts = np.linspace(0.0, box, 401)[1:]
    profiles = []
    for d in directions:
        pts = point[None, :] + ts[:, None] * d[None, :]
        if not isinstance(source, IdealQuadrupole):
            valid = pts[:, 2] > 0.02 * height
            stop = len(pts) if valid.all() else int(np.argmin(valid))
            pts = pts[:stop]
        if len(pts) < 3:
            continue
        profiles.append((d, pts, energy(source, species, pts) - u0))
    if not profiles:
        raise SaddleNotFoundError('No escape direction fits inside the search box', box)
    scale_u = max(float(np.max(p[2])) for p in profiles)

    candidates = []
    for d, pts, values in profiles:
        i = _first_local_max(values)
        if i is None or values[i] <= 1e-6 * scale_u:
            continue
        barrier, escape = float(values[i]), pts[i]
        try:
            refined = _equilibrium(source, species, pts[i], free=free)
            value = float(energy(source, species, refined)[0]) - u0
            h_s = energy_hessian(source, species, refined)[np.ix_(free, free)]
            is_saddle = np.min(linalg.eigvalsh(0.5 * (h_s + h_s.T))) < 0
            inside = np.linalg.norm(refined - point) <= box * math.sqrt(3)
            if is_saddle and inside and 1e-6 * scale_u < value <= barrier * (1 + 1e-9):
                barrier, escape = value, refined
            else:
                logger.warning('Saddle refinement along %s left the ray maximum in place', d.round(3).tolist())
        except (ConvergenceError, TrapValidationError):
            logger.warning('Saddle refinement failed along %s; using the ray maximum', d.round(3).tolist())
        candidates.append((barrier, escape))
    if not candidates:
        raise SaddleNotFoundError(f'No saddle found within {box:.3e} m of the trap minimum', box)
    depth, escape = min(candidates, key=lambda c: c[0])
    return TrapDepth(depth=depth, escape_point=np.asarray(escape), null_point=point, radial_only=bool(axially_free))


def mathieu_params(r0, v0, vdc, drive, species):
    """a = 4 q Vdc / (m Omega^2 R^2), q = 2 q V0 / (m Omega^2 R^2)."""
    if not r0 > 0:
        raise TrapValidationError(f'R must be positive, got {r0!r}')
    denominator = species.mass * drive.omega_rf ** 2 * r0 ** 2
    return MathieuParams(a=4.0 * species.charge * vdc / denominator, q=2.0 * species.charge * v0 / denominator)


def local_mathieu_params(source, species, point, axes):
    """a and q along each principal axis from the local DC and RF curvatures."""
    _, _, g_dc = source.static(point)
    _, _, g_rf = source.rf_basis(point)
    curv_dc = -0.5 * (g_dc[0] + g_dc[0].T)
    curv_rf = -0.5 * (g_rf[0] + g_rf[0].T)
    denominator = species.mass * source.drive.omega_rf ** 2
    params = []
    for v in np.asarray(axes):
        params.append(MathieuParams(
            a=4.0 * species.charge * float(v @ curv_dc @ v) / denominator,
            q=2.0 * species.charge * source.drive.v_rf * float(v @ curv_rf @ v) / denominator,
        ))
    return params


def _monodromy(a, q, steps):
    """One-period (tau in [0, pi]) fundamental matrix of x'' + (a - 2q cos 2 tau) x = 0, RK4."""
    h = math.pi / steps
    y = np.eye(2)

    def rhs(tau, state):
        return np.array([state[1], -(a - 2.0 * q * math.cos(2.0 * tau)) * state[0]])

    tau = 0.0
    for _ in range(steps):
        k1 = rhs(tau, y)
        k2 = rhs(tau + h / 2, y + h / 2 * k1)
        k3 = rhs(tau + h / 2, y + h / 2 * k2)
        k4 = rhs(tau + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        tau += h
    return y


def mathieu_stability(params, steps=None):
    steps = int(steps or getattr(settings, 'PAULTRAP_FLOQUET_STEPS', 2000))
    trace = float(np.trace(_monodromy(params.a, params.q, steps)))
    stable = abs(trace) <= 2.0 + 1e-9
    beta = math.acos(max(-1.0, min(1.0, trace / 2.0))) / math.pi if stable else float('nan')
    approx_arg = params.a + params.q ** 2 / 2.0
    beta_approx = math.sqrt(approx_arg) if approx_arg >= 0 else float('nan')
    return StabilityResult(stable=stable, beta=beta, beta_approx=beta_approx, trace=trace)


def secular_from_spacing(spacing_3ion, species):
    """Axial frequency from the nearest-neighbour spacing of a three-ion crystal."""
    if not spacing_3ion > 0:
        raise TrapValidationError(f'Ion spacing must be positive, got {spacing_3ion!r}')
    s = spacing_3ion / (5.0 / 4.0) ** (1.0 / 3.0)
    return abs(species.charge) / 2.0 / math.sqrt(math.pi * CONSTANTS.epsilon0 * species.mass * s ** 3)
