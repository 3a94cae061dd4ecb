from django.core.management.base import CommandError

from paultrap.analysis import MathieuParams, mathieu_params, mathieu_stability
from paultrap.core import RfDrive

from ._base import Report, ToolkitCommand


class Command(ToolkitCommand):
    help = 'Floquet stability of the Mathieu equation, from (a, q) or from quadrupole trap parameters'
    uses_species = True

    def add_scenario_arguments(self, parser):
        parser.add_argument('--a', type=float, default=None)
        parser.add_argument('--q', type=float, default=None)
        parser.add_argument('--r0-um', type=float, default=None)
        parser.add_argument('--v-rf', type=float, default=None, help='RF amplitude V0 (V)')
        parser.add_argument('--v-dc', type=float, default=0.0)
        parser.add_argument('--rf-mhz', type=float, default=None)
        parser.add_argument('--steps', type=int, default=None, help='Overrides PAULTRAP_FLOQUET_STEPS')

    def compute(self, options):
        if options['q'] is not None:
            params = MathieuParams(a=options['a'] or 0.0, q=options['q'])
        elif None not in (options['r0_um'], options['v_rf'], options['rf_mhz']):
            drive = RfDrive.from_mhz(options['rf_mhz'], options['v_rf'])
            params = mathieu_params(options['r0_um'] * 1e-6, options['v_rf'], options['v_dc'], drive,
                                    self.species(options))
        else:
            raise CommandError('Give --q (and optionally --a), or --r0-um, --v-rf and --rf-mhz')
        result = mathieu_stability(params, options['steps'])
        data = {
            'command': 'stability',
            'a': params.a,
            'q': params.q,
            'stable': result.stable,
            'beta': result.beta,
            'beta_approx': result.beta_approx,
            'trace': result.trace,
        }
        columns = ['a', 'q', 'stable', 'beta', 'beta_approx', 'trace']
        return Report(data=data, columns=columns, rows=[tuple(data[c] for c in columns)])
