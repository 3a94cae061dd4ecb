import math

from paultrap.analysis import (find_rf_null, local_mathieu_params, mathieu_stability, secular_frequencies,
                               trap_depth)
from paultrap.documents import load_geometry
from paultrap.exceptions import SaddleNotFoundError
from paultrap.fields import IdealQuadrupole

from ._base import Report, ToolkitCommand, parse_vector

AXIS_LABELS = ('low', 'mid', 'high')


class Command(ToolkitCommand):
    help = 'RF null, secular frequencies, principal-axis tilt, trap depth and Mathieu a/q of a geometry'
    uses_species = True

    def add_scenario_arguments(self, parser):
        parser.add_argument('--geometry', required=True, help='Geometry JSON document')
        parser.add_argument('--guess', default=None, help='Starting point x,y,z in um')
        parser.add_argument('--skip-depth', action='store_true', help='Do not search for the escape saddle')

    def compute(self, options):
        model = load_geometry(options['geometry'])
        species = self.species(options)
        guess = None if options['guess'] is None else parse_vector(options['guess'], 'guess') * 1e-6

        null = find_rf_null(model, species, guess)
        secular = secular_frequencies(model, species, null.point)
        params = local_mathieu_params(model, species, secular.null_point, secular.axes)

        axes, rows = [], []
        for label, omega, vector, p in zip(AXIS_LABELS, secular.omegas, secular.axes, params):
            stability = mathieu_stability(p)
            free = secular.axially_free and label == AXIS_LABELS[secular.axial_index]
            axes.append({
                'mode': label,
                'freq_mhz': omega / (2e6 * math.pi),
                'direction': vector,
                'axial': label == AXIS_LABELS[secular.axial_index],
                'free': free,
                'a': p.a,
                'q': p.q,
                'stable': stability.stable,
                'beta': stability.beta,
            })
            rows.append((label, omega / (2e6 * math.pi), p.a, p.q, stability.beta, stability.stable))

        data = {
            'command': 'analyze',
            'species': species.label,
            'drive': {'freq_mhz': model.drive.freq_mhz, 'v_rf': model.drive.v_rf},
            'rf_null_um': null.point * 1e6,
            'rf_null_residual_v_per_m': null.residual_field,
            'minimum_um': secular.null_point * 1e6,
            'secular_freqs_mhz': secular.freqs_mhz,
            'tilt_deg': secular.tilt_deg,
            'degenerate': secular.degenerate,
            'axially_free': secular.axially_free,
            'axes': axes,
            'depth': self.depth(model, species, secular, options['skip_depth']),
        }
        return Report(data=data, columns=['mode', 'freq_mhz', 'a', 'q', 'beta', 'stable'], rows=rows)

    def depth(self, model, species, secular, skip):
        if skip:
            return None
        if isinstance(model, IdealQuadrupole):
            # the harmonic model has no escape saddle
            return {'depth_mev': None, 'note': 'unbounded harmonic model'}
        try:
            depth = trap_depth(model, species, secular.null_point)
        except SaddleNotFoundError as exc:
            return {'depth_mev': None, 'note': exc.text}
        return {
            'depth_mev': depth.depth_mev,
            'escape_point_um': depth.escape_point * 1e6,
            'radial_only': depth.radial_only,
        }
