from paultrap.documents import load_geometry
from paultrap.fields import GridSpec, field_map

from ._base import Report, ToolkitCommand, parse_range


class Command(ToolkitCommand):
    help = 'Sample the static field and the pseudopotential of a geometry on a grid (um)'
    default_format = 'csv'
    uses_species = True

    def add_scenario_arguments(self, parser):
        parser.add_argument('--geometry', required=True)
        parser.add_argument('--x', default='0', help='start:stop:count in um')
        parser.add_argument('--y', default='0', help='start:stop:count in um')
        parser.add_argument('--z', default='20:200:19', help='start:stop:count in um')
        parser.add_argument('--threads', type=int, default=None, help='Overrides PAULTRAP_THREADS')

    def compute(self, options):
        model = load_geometry(options['geometry'])
        grid = GridSpec.from_axes(*(parse_range(options[axis], axis) * 1e-6 for axis in 'xyz'))
        result = field_map(model, self.species(options), grid, threads=options['threads'])
        rows = list(result.rows())
        data = {'command': 'fieldmap', 'shape': grid.shape, 'points': len(rows)}
        return Report(data=data, columns=list(result.COLUMNS), rows=rows)
