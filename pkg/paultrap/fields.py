"""
Analytic electrostatics for Paul traps.

Two field sources share one interface (``rf_basis``, ``static``,
``check_points``, ``drive``, ``axial_axis``, ``length_scale``):

* ``PlanarTrapModel``: gapless rectangular electrodes in the z = 0 plane,
  ion above the plane (z > 0). The trap axis runs along x.
* ``IdealQuadrupole``: the linear quadrupole potential near the trap
  center, axis along z.

``rf_basis`` is the field for 1 V on every RF electrode; ``static`` is
the field of the DC voltages. Both return ``(phi, e_field, gradient)``
arrays for an ``(N, 3)`` block of points, where ``gradient[n, i, j]`` is
dE_i/dx_j.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np
from django.conf import settings

from .core import CONSTANTS
from .exceptions import DomainError, TrapValidationError

logger = logging.getLogger(__name__)

# Relative finite-difference step (times ion height) for field gradients.
GRADIENT_STEP = 1e-6


class ElectrodeRole(str, Enum):
    RF = 'rf'
    DC = 'dc'


@dataclass(frozen=True)
class Rect:
    x1: float
    y1: float
    x2: float
    y2: float

    def __post_init__(self):
        if not (self.x1 < self.x2 and self.y1 < self.y2):
            raise TrapValidationError(
                f'Rectangle needs x1 < x2 and y1 < y2, got [{self.x1}, {self.x2}] x [{self.y1}, {self.y2}]'
            )

    @property
    def width(self):
        return self.x2 - self.x1

    @property
    def height(self):
        return self.y2 - self.y1

    def overlaps(self, other):
        """True when the open interiors intersect."""
        return (min(self.x2, other.x2) > max(self.x1, other.x1)
                and min(self.y2, other.y2) > max(self.y1, other.y1))

    def translated(self, dx, dy):
        return Rect(self.x1 + dx, self.y1 + dy, self.x2 + dx, self.y2 + dy)

    def mirrored_y(self):
        return Rect(self.x1, -self.y2, self.x2, -self.y1)


@dataclass(frozen=True)
class PlanarElectrode:
    label: str
    role: ElectrodeRole
    rectangles: tuple

    def __post_init__(self):
        object.__setattr__(self, 'role', ElectrodeRole(self.role))
        object.__setattr__(self, 'rectangles', tuple(self.rectangles))
        if not self.rectangles:
            raise TrapValidationError(f'Electrode {self.label!r} has no rectangles')


@dataclass(frozen=True)
class FieldSample:
    potential: float
    e_field: np.ndarray
    gradient: np.ndarray


def _as_points(points):
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise TrapValidationError(f'Points must have shape (N, 3), got {pts.shape}')
    return pts


def _rect_terms(points, rects, weights):
    """
    Potential and field of weighted rectangles held at 1 V in a grounded
    plane, from the solid-angle closed form (sum of four arctangents).
    """
    x = points[:, 0, None]
    y = points[:, 1, None]
    z = points[:, 2, None]
    phi = np.zeros(len(points))
    e = np.zeros((len(points), 3))
    z2 = z * z
    for xc, sx in ((rects[:, 2], 1.0), (rects[:, 0], -1.0)):
        for yc, sy in ((rects[:, 3], 1.0), (rects[:, 1], -1.0)):
            dx = xc[None, :] - x
            dy = yc[None, :] - y
            r = np.sqrt(dx * dx + dy * dy + z2)
            s = sx * sy * weights[None, :]
            xz = dx * dx + z2
            yz = dy * dy + z2
            phi += np.sum(s * np.arctan(dx * dy / (z * r)), axis=1)
            e[:, 0] += np.sum(s * z * dy / (r * xz), axis=1)
            e[:, 1] += np.sum(s * z * dx / (r * yz), axis=1)
            e[:, 2] += np.sum(s * dx * dy * (r * r + z2) / (r * xz * yz), axis=1)
    return phi / (2.0 * math.pi), e / (2.0 * math.pi)


def _richardson_gradient(field_fn, points, steps):
    """dE_i/dx_j by Richardson-extrapolated central differences."""
    def central(h):
        grad = np.empty((len(points), 3, 3))
        for j in range(3):
            offset = np.zeros((len(points), 3))
            offset[:, j] = h
            grad[:, :, j] = (field_fn(points + offset) - field_fn(points - offset)) / (2.0 * h[:, None])
        return grad

    coarse = central(steps)
    fine = central(steps / 2.0)
    return (4.0 * fine - coarse) / 3.0


def rect_basis_potential(point, rect):
    """Potential per volt of a single plate in the grounded plane at ``point`` (z > 0)."""
    pts = _as_points(point)
    if np.any(pts[:, 2] <= 0):
        raise DomainError(f'Basis potential requires z > 0, got z = {pts[0, 2]!r}')
    rects = np.array([[rect.x1, rect.y1, rect.x2, rect.y2]])
    phi, _ = _rect_terms(pts, rects, np.ones(1))
    return float(phi[0])


class PlanarTrapModel:
    """Coplanar gapless electrodes with their RF drive and DC voltages."""

    axial_axis = 0

    def __init__(self, electrodes, drive, dc_voltages=None):
        self.electrodes = tuple(electrodes)
        self.drive = drive
        self.dc_voltages = dict(dc_voltages or {})
        self._validate()
        rects, owners = [], []
        for index, electrode in enumerate(self.electrodes):
            for rect in electrode.rectangles:
                rects.append([rect.x1, rect.y1, rect.x2, rect.y2])
                owners.append(index)
        self._rects = np.array(rects, dtype=float)
        self._owners = np.array(owners, dtype=int)

    def _validate(self):
        labels = [e.label for e in self.electrodes]
        if len(set(labels)) != len(labels):
            raise TrapValidationError('Electrode labels must be unique')
        if not any(e.role == ElectrodeRole.RF for e in self.electrodes):
            raise TrapValidationError('Trap model needs at least one RF electrode')
        roles = {e.label: e.role for e in self.electrodes}
        for label in self.dc_voltages:
            if label not in roles:
                raise TrapValidationError(f'DC voltage given for unknown electrode {label!r}')
            if roles[label] != ElectrodeRole.DC:
                raise TrapValidationError(f'Electrode {label!r} is not a DC electrode')
        for i, first in enumerate(self.electrodes):
            for second in self.electrodes[i + 1:]:
                for a in first.rectangles:
                    for b in second.rectangles:
                        if a.overlaps(b):
                            raise TrapValidationError(
                                f'Electrodes {first.label!r} and {second.label!r} overlap'
                            )

    def __repr__(self):
        return f'<PlanarTrapModel {len(self.electrodes)} electrodes>'

    @property
    def labels(self):
        return [e.label for e in self.electrodes]

    @property
    def dc_labels(self):
        return [e.label for e in self.electrodes if e.role == ElectrodeRole.DC]

    @property
    def length_scale(self):
        return float(np.median(np.minimum(self._rects[:, 2] - self._rects[:, 0],
                                          self._rects[:, 3] - self._rects[:, 1])))

    def electrode(self, label):
        for e in self.electrodes:
            if e.label == label:
                return e
        raise TrapValidationError(f'Unknown electrode {label!r}')

    def with_dc_voltages(self, dc_voltages):
        return PlanarTrapModel(self.electrodes, self.drive, dc_voltages)

    def with_drive(self, drive):
        return PlanarTrapModel(self.electrodes, drive, self.dc_voltages)

    def translated(self, dx, dy):
        electrodes = [
            replace(e, rectangles=tuple(r.translated(dx, dy) for r in e.rectangles))
            for e in self.electrodes
        ]
        return PlanarTrapModel(electrodes, self.drive, self.dc_voltages)

    def mirrored_y(self):
        electrodes = [
            replace(e, rectangles=tuple(r.mirrored_y() for r in e.rectangles))
            for e in self.electrodes
        ]
        return PlanarTrapModel(electrodes, self.drive, self.dc_voltages)

    def check_points(self, points):
        pts = _as_points(points)
        if np.any(pts[:, 2] <= 0):
            raise DomainError(f'Planar trap fields require z > 0 (got min z = {pts[:, 2].min()!r})')
        return pts

    def rf_weights(self):
        return np.array([1.0 if self.electrodes[i].role == ElectrodeRole.RF else 0.0 for i in self._owners])

    def dc_weights(self):
        return np.array([
            float(self.dc_voltages.get(self.electrodes[i].label, 0.0))
            if self.electrodes[i].role == ElectrodeRole.DC else 0.0
            for i in self._owners
        ])

    def electrode_weights(self, label):
        self.electrode(label)
        return np.array([1.0 if self.electrodes[i].label == label else 0.0 for i in self._owners])

    def evaluate(self, points, weights, gradient=True):
        pts = self.check_points(points)
        mask = weights != 0
        if not np.any(mask):
            n = len(pts)
            return np.zeros(n), np.zeros((n, 3)), np.zeros((n, 3, 3))
        rects, w = self._rects[mask], weights[mask]
        phi, e = _rect_terms(pts, rects, w)
        if not gradient:
            return phi, e, None
        steps = GRADIENT_STEP * pts[:, 2]
        grad = _richardson_gradient(lambda p: _rect_terms(p, rects, w)[1], pts, steps)
        return phi, e, grad

    def rf_basis(self, points, gradient=True):
        return self.evaluate(points, self.rf_weights(), gradient)

    def static(self, points, gradient=True):
        return self.evaluate(points, self.dc_weights(), gradient)


class IdealQuadrupole:
    """
    Linear quadrupole of characteristic distance ``r0``:
    phi = 1/2 V (1 + (x^2 - y^2)/r0^2) for the RF (per volt) and the DC
    quadrupole term, plus an optional static axial well of curvature
    ``axial_curvature`` (V/m^2) along z.
    """

    axial_axis = 2

    def __init__(self, r0, drive, v_dc=0.0, axial_curvature=0.0):
        if not r0 > 0:
            raise TrapValidationError(f'Quadrupole r0 must be positive, got {r0!r}')
        self.r0 = float(r0)
        self.drive = drive
        self.v_dc = float(v_dc)
        self.axial_curvature = float(axial_curvature)

    def __repr__(self):
        return f'<IdealQuadrupole r0={self.r0:g} m>'

    @property
    def length_scale(self):
        return self.r0

    def with_drive(self, drive):
        return IdealQuadrupole(self.r0, drive, self.v_dc, self.axial_curvature)

    def check_points(self, points):
        return _as_points(points)

    def _quadrupole(self, points, volts, kappa):
        pts = self.check_points(points)
        x, y, z = pts[:, 0], pts[:, 1], pts[:, 2]
        inv = 1.0 / self.r0 ** 2
        phi = 0.5 * volts * (1.0 + (x * x - y * y) * inv) + 0.5 * kappa * (z * z - 0.5 * (x * x + y * y))
        e = np.stack([
            -volts * x * inv + 0.5 * kappa * x,
            volts * y * inv + 0.5 * kappa * y,
            -kappa * z,
        ], axis=1)
        g = np.diag([-volts * inv + 0.5 * kappa, volts * inv + 0.5 * kappa, -kappa])
        return phi, e, np.broadcast_to(g, (len(pts), 3, 3)).copy()

    def rf_basis(self, points, gradient=True):
        return self._quadrupole(points, 1.0, 0.0)

    def static(self, points, gradient=True):
        return self._quadrupole(points, self.v_dc, self.axial_curvature)


def _sample(result):
    phi, e, g = result
    return FieldSample(potential=float(phi[0]), e_field=e[0].copy(), gradient=g[0].copy())


def sample_static(model, point):
    return _sample(model.static(point))


def sample_rf_basis(model, point):
    return _sample(model.rf_basis(point))


def electrode_basis(model, label, point):
    """Field for 1 V on electrode ``label`` and 0 V everywhere else."""
    return _sample(model.evaluate(point, model.electrode_weights(label)))


def pseudopotential_prefactor(model, species):
    """k such that the pseudopotential energy is k |E_rf,1V|^2."""
    drive = model.drive
    return species.charge ** 2 * drive.v_rf ** 2 / (4.0 * species.mass * drive.omega_rf ** 2)


def pseudopotential(model, species, point):
    """Pseudopotential energy (J) at ``point``."""
    _, e, _ = model.rf_basis(point, gradient=False)
    return float(pseudopotential_prefactor(model, species) * np.sum(e[0] ** 2))


def pseudopotential_ev(model, species, point):
    return pseudopotential(model, species, point) / CONSTANTS.elementary_charge


def quadrupole_potential(r0, v0, vdc, point):
    """Instantaneous potential 1/2 (V0 + Vdc)(1 + (x^2 - y^2)/R^2) of the ideal quadrupole."""
    if not r0 > 0:
        raise TrapValidationError(f'Quadrupole R must be positive, got {r0!r}')
    x, y = float(point[0]), float(point[1])
    return 0.5 * (v0 + vdc) * (1.0 + (x * x - y * y) / r0 ** 2)


@dataclass(frozen=True)
class GridSpec:
    xs: tuple
    ys: tuple
    zs: tuple

    @classmethod
    def from_axes(cls, xs, ys, zs):
        return cls(tuple(np.atleast_1d(xs).astype(float)),
                   tuple(np.atleast_1d(ys).astype(float)),
                   tuple(np.atleast_1d(zs).astype(float)))

    @property
    def shape(self):
        return len(self.xs), len(self.ys), len(self.zs)

    def points(self):
        # x slowest, z fastest
        gx, gy, gz = np.meshgrid(self.xs, self.ys, self.zs, indexing='ij')
        return np.stack([gx.ravel(), gy.ravel(), gz.ravel()], axis=1)


@dataclass
class FieldMap:
    grid: GridSpec
    points: np.ndarray
    phi_dc: np.ndarray
    e_dc: np.ndarray
    phi_pp_ev: np.ndarray
    samples: list = field(default_factory=list, repr=False)

    COLUMNS = ('x_um', 'y_um', 'z_um', 'phi_dc_v', 'ex_v_per_m', 'ey_v_per_m', 'ez_v_per_m', 'phi_pp_ev')

    def rows(self):
        for p, phi, e, pp in zip(self.points, self.phi_dc, self.e_dc, self.phi_pp_ev):
            yield (p[0] * 1e6, p[1] * 1e6, p[2] * 1e6, phi, e[0], e[1], e[2], pp)

    def lattice(self, values):
        return np.asarray(values).reshape(self.grid.shape)


def field_map(model, species, grid, threads=None):
    """Static field and pseudopotential sampled on a lattice."""
    if min(grid.shape) == 0:
        raise TrapValidationError('Field map grid is empty')
    points = model.check_points(grid.points())
    threads = threads or getattr(settings, 'PAULTRAP_THREADS', 1)
    chunks = np.array_split(np.arange(len(points)), max(1, min(int(threads), len(points))))
    prefactor = pseudopotential_prefactor(model, species)

    def work(index):
        pts = points[index]
        phi, e, g = model.static(pts)
        _, e_rf, _ = model.rf_basis(pts, gradient=False)
        pp = prefactor * np.sum(e_rf ** 2, axis=1) / CONSTANTS.elementary_charge
        return phi, e, g, pp

    with ThreadPoolExecutor(max_workers=max(1, int(threads))) as pool:
        parts = list(pool.map(work, chunks))
    logger.debug('Field map of %d points on %d worker(s)', len(points), len(chunks))
    phi = np.concatenate([p[0] for p in parts])
    e = np.concatenate([p[1] for p in parts])
    g = np.concatenate([p[2] for p in parts])
    pp = np.concatenate([p[3] for p in parts])
    samples = [FieldSample(float(a), b, c) for a, b, c in zip(phi, e, g)]
    return FieldMap(grid=grid, points=points, phi_dc=phi, e_dc=e, phi_pp_ev=pp, samples=samples)
