"""
Geometry documents, scenario files and report serialization.

Geometry JSON (lengths in ``length_unit``, default um):

    {"schema": "paultrap-kit/1", "length_unit": "um",
     "electrodes": [{"label": "rf", "role": "rf", "rects": [[x1, y1, x2, y2], ...]}, ...],
     "drive": {"freq_mhz": 40, "v_rf": 60, "phase_deg": 0},
     "dc_voltages": {"t1": 2.0}}

or, for the ideal linear quadrupole,

    {"quadrupole": {"r0_um": 50, "v_dc": 0, "axial_freq_mhz": 1.0},
     "drive": {"freq_mhz": 100, "v_rf": 50}}
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np
from django.conf import settings

from .cantilever import CantileverDevice, RfCircuit, parallel_plate_capacitance
from .core import RfDrive, make_species, mhz_to_omega, parse_species
from .exceptions import TrapValidationError
from .fields import IdealQuadrupole, PlanarElectrode, PlanarTrapModel, Rect
from .noise import BudgetSource, CouplingConstants, NoiseKind, NoiseSpec, ResonatorLine
from .transport import WaveformSpec, linear_path

LENGTH_UNITS = {'m': 1.0, 'mm': 1e-3, 'um': 1e-6, 'nm': 1e-9}


def schema():
    return getattr(settings, 'PAULTRAP_SCHEMA', 'paultrap-kit/1')


def read_json(path):
    path = Path(path)
    if not path.is_file():
        raise TrapValidationError(f'Input file not found: {path}')
    try:
        document = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise TrapValidationError(f'Invalid JSON in {path}: {exc}')
    if not isinstance(document, dict):
        raise TrapValidationError(f'{path} must contain a JSON object')
    version = document.get('schema')
    if version is not None and version != schema():
        raise TrapValidationError(f'{path} has schema {version!r}, expected {schema()!r}')
    return document


def drive_from_dict(data):
    if not data:
        raise TrapValidationError('Geometry is missing its "drive" block')
    try:
        return RfDrive.from_mhz(float(data['freq_mhz']), float(data.get('v_rf', 0.0)),
                                float(data.get('phase_deg', 0.0)))
    except KeyError as exc:
        raise TrapValidationError(f'Drive block is missing {exc.args[0]!r}')


def species_from_dict(data):
    if isinstance(data, str):
        return parse_species(data)
    if 'mass_amu' in data:
        return make_species(float(data['mass_amu']), int(data.get('charge_e', 1)), data.get('label', ''))
    return parse_species(data.get('label', ''))


def model_from_dict(document):
    drive = drive_from_dict(document.get('drive'))
    if 'quadrupole' in document:
        quad = document['quadrupole']
        unit = quad.get('length_unit', 'um')
        if unit not in LENGTH_UNITS:
            raise TrapValidationError(f'Unknown length unit {unit!r}')
        scale = LENGTH_UNITS[unit]
        r0 = float(quad['r0_um']) * 1e-6 if 'r0_um' in quad else float(quad.get('r0', 0.0)) * scale
        curvature = float(quad.get('axial_curvature', 0.0))
        if 'axial_freq_mhz' in quad:
            species = species_from_dict(quad.get('species', '24Mg+'))
            omega = mhz_to_omega(float(quad['axial_freq_mhz']))
            curvature = species.mass * omega ** 2 / species.charge
        return IdealQuadrupole(r0, drive, v_dc=float(quad.get('v_dc', 0.0)), axial_curvature=curvature)

    unit = document.get('length_unit', 'um')
    if unit not in LENGTH_UNITS:
        raise TrapValidationError(f'Unknown length unit {unit!r}')
    scale = LENGTH_UNITS[unit]
    electrodes = []
    for entry in document.get('electrodes', []):
        try:
            rects = tuple(
                Rect(*(float(v) * scale for v in rect)) for rect in entry['rects']
            )
            electrodes.append(PlanarElectrode(entry['label'], entry['role'], rects))
        except (KeyError, TypeError) as exc:
            raise TrapValidationError(f'Malformed electrode entry {entry!r}: {exc}')
        except ValueError as exc:
            raise TrapValidationError(f'Bad electrode role in {entry!r}: {exc}')
    return PlanarTrapModel(electrodes, drive, document.get('dc_voltages', {}))


def model_to_dict(model):
    drive = {'freq_mhz': model.drive.freq_mhz, 'v_rf': model.drive.v_rf, 'phase_deg': model.drive.phase_deg}
    if isinstance(model, IdealQuadrupole):
        return {'schema': schema(), 'drive': drive,
                'quadrupole': {'r0_um': model.r0 * 1e6, 'v_dc': model.v_dc,
                               'axial_curvature': model.axial_curvature}}
    return {
        'schema': schema(),
        'length_unit': 'um',
        'drive': drive,
        'electrodes': [
            {'label': e.label, 'role': e.role.value,
             'rects': [[r.x1 * 1e6, r.y1 * 1e6, r.x2 * 1e6, r.y2 * 1e6] for r in e.rectangles]}
            for e in model.electrodes
        ],
        'dc_voltages': dict(model.dc_voltages),
    }


def load_geometry(path):
    return model_from_dict(read_json(path))


def _number(data, key, where, default=None):
    value = data.get(key, default)
    if value is None:
        raise TrapValidationError(f'{where} is missing {key!r}')
    try:
        return float(value)
    except (TypeError, ValueError):
        raise TrapValidationError(f'{where}: {key!r} must be a number, got {value!r}')


def budget_from_dict(document):
    """
    Keyword arguments for ``noise.heating_budget`` from a scenario document:

        {"species": "24Mg+", "freq_mhz": 3.0,
         "rf": {"freq_mhz": 70, "v_rf": 50},
         "coupling": {"c_e": [...], "d_e": [...], "de_dz": ..., "axial_index": 2},
         "resonators": {"main": {"freq_mhz": 70, "q_loaded": 80}},
         "sources": [{"name": "dac", "mechanism": "electrode", "asd_v_per_rthz": 5e-8,
                      "filter": {"r_ohm": 1000, "c_pf": 820}, "n_electrodes": 4}, ...]}

    A source gives its noise as ``s_e`` (V^2/m^2/Hz), ``s_v`` (V^2/Hz),
    ``asd_v_per_rthz``, ``johnson`` ({"r_ohm", "t_k"}) or ``dbc`` (per Hz).
    """

    species = species_from_dict(document.get('species', '24Mg+'))
    omega = mhz_to_omega(_number(document, 'freq_mhz', 'Budget'))
    rf = document.get('rf') or {}
    v_rf = float(rf['v_rf']) if 'v_rf' in rf else None
    omega_rf = mhz_to_omega(float(rf['freq_mhz'])) if 'freq_mhz' in rf else None

    coupling = None
    if document.get('coupling'):
        c = document['coupling']
        coupling = CouplingConstants(
            c_e=c.get('c_e', (0.0, 0.0, 0.0)), d_e=c.get('d_e', (0.0, 0.0, 0.0)),
            de_dz=_number(c, 'de_dz', 'Coupling', 0.0), axial_index=int(c.get('axial_index', 2)),
        )

    resonators = {
        name: ResonatorLine(omega0=mhz_to_omega(_number(r, 'freq_mhz', f'Resonator {name!r}')),
                            q_loaded=_number(r, 'q_loaded', f'Resonator {name!r}'))
        for name, r in (document.get('resonators') or {}).items()
    }

    sources = []
    entries = document.get('sources')
    if not entries:
        raise TrapValidationError('Budget lists no noise sources')
    for i, entry in enumerate(entries):
        name = entry.get('name', f'source{i + 1}')
        where = f'Source {name!r}'
        if 's_e' in entry:
            noise = NoiseSpec(NoiseKind.FIELD_PSD, _number(entry, 's_e', where), omega)
        elif 's_v' in entry:
            noise = NoiseSpec(NoiseKind.VOLTAGE_PSD, _number(entry, 's_v', where), omega)
        elif 'asd_v_per_rthz' in entry:
            noise = NoiseSpec.from_asd(_number(entry, 'asd_v_per_rthz', where), omega)
        elif 'johnson' in entry:
            j = entry['johnson']
            noise = NoiseSpec.johnson(_number(j, 'r_ohm', where), _number(j, 't_k', where, 300.0), omega)
        elif 'dbc' in entry:
            noise = NoiseSpec.from_dbc(_number(entry, 'dbc', where), omega)
        else:
            raise TrapValidationError(f'{where} gives no noise level (s_e, s_v, asd_v_per_rthz, johnson or dbc)')
        rc = entry.get('filter')
        sources.append(BudgetSource(
            name=name,
            mechanism=entry.get('mechanism', 'field'),
            noise=noise,
            n_electrodes=int(entry.get('n_electrodes', 1)),
            filter_rc=None if not rc else (_number(rc, 'r_ohm', where), _number(rc, 'c_pf', where) * 1e-12),
            axis=entry.get('axis'),
            displacement=_number(entry, 'displacement_um', where, 0.0) * 1e-6,
            resonator=entry.get('resonator'),
            two_sideband=bool(entry.get('two_sideband', False)),
        ))
    return {'species': species, 'omega': omega, 'sources': sources, 'coupling': coupling,
            'v_rf': v_rf, 'omega_rf': omega_rf, 'resonators': resonators}


def waveform_from_dict(document):
    """
    A ``transport.WaveformSpec`` from

        {"path_um": [...]} or {"start_um": -50, "stop_um": 50, "step_um": 10},
        "target_freq_mhz": 1.0, "voltage_bounds": [-10, 10],
        "regularization": 1e-6, "channels": {"s1": ["t1", "b1"], ...}
    """
    if 'path_um' in document:
        path = [float(p) * 1e-6 for p in document['path_um']]
    else:
        step = document.get('step_um')
        path = linear_path(_number(document, 'start_um', 'Waveform') * 1e-6,
                           _number(document, 'stop_um', 'Waveform') * 1e-6,
                           None if step is None else float(step) * 1e-6)
    bounds = document.get('voltage_bounds')
    if bounds is None:
        bounds = (-math.inf, math.inf)
    if not isinstance(bounds, (list, tuple)) or len(bounds) != 2:
        raise TrapValidationError(f'voltage_bounds must be [v_min, v_max], got {bounds!r}')
    try:
        v_min = -math.inf if bounds[0] is None else float(bounds[0])
        v_max = math.inf if bounds[1] is None else float(bounds[1])
    except (TypeError, ValueError):
        raise TrapValidationError(f'voltage_bounds must be numbers, got {bounds!r}')
    regularization = document.get('regularization')
    return WaveformSpec(
        path=path,
        target_omega_z=mhz_to_omega(_number(document, 'target_freq_mhz', 'Waveform')),
        voltage_bounds=(v_min, v_max),
        regularization=None if regularization is None else float(regularization),
        channels=document.get('channels'),
    )


def cantilever_from_dict(document):
    """
    (``CantileverDevice``, ``RfCircuit``) from

        {"cantilever": {"length_um", "thickness_um", "width_um", "density_kg_m3",
                        "gap_um", "overlap_um", "freq_khz", "q_mech"},
         "circuit": {"l0_nh", "freq_mhz", "q_rf", "c_c_pf" (default: parallel plate)}}
    """
    c = document.get('cantilever') or {}
    device = CantileverDevice(
        h_c=_number(c, 'length_um', 'Cantilever') * 1e-6,
        s=_number(c, 'thickness_um', 'Cantilever') * 1e-6,
        w=_number(c, 'width_um', 'Cantilever') * 1e-6,
        rho=_number(c, 'density_kg_m3', 'Cantilever'),
        d0=_number(c, 'gap_um', 'Cantilever') * 1e-6,
        h=_number(c, 'overlap_um', 'Cantilever') * 1e-6,
        omega_c=2.0 * math.pi * _number(c, 'freq_khz', 'Cantilever') * 1e3,
        q_c_mech=_number(c, 'q_mech', 'Cantilever'),
    )
    r = document.get('circuit') or {}
    c_c = (float(r['c_c_pf']) * 1e-12 if 'c_c_pf' in r
           else parallel_plate_capacitance(device.w, device.h, device.d0))
    circuit = RfCircuit.from_resonance(
        l0=_number(r, 'l0_nh', 'Circuit') * 1e-9,
        omega0=mhz_to_omega(_number(r, 'freq_mhz', 'Circuit')),
        c_c=c_c,
        q_rf=_number(r, 'q_rf', 'Circuit'),
    )
    return device, circuit


def amplitudes_from_list(values):
    """State amplitudes from numbers or ``[re, im]`` pairs."""
    if not isinstance(values, list) or not values:
        raise TrapValidationError('Amplitudes must be a non-empty list')
    out = []
    for v in values:
        if isinstance(v, (list, tuple)):
            if len(v) != 2:
                raise TrapValidationError(f'Complex amplitude must be [re, im], got {v!r}')
            out.append(complex(float(v[0]), float(v[1])))
        else:
            out.append(complex(float(v)))
    return np.array(out)


def _plain(value):
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if np.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def dump_report(payload, seed=None):
    report = {'schema': schema(), **_plain(payload)}
    if seed is not None:
        report['seed'] = seed
    return json.dumps(report, sort_keys=True, indent=2) + '\n'


def dump_csv(columns, rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(v) for v in row])
    return buffer.getvalue()


def _csv_cell(value):
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return value
