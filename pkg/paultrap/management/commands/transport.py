from paultrap.core import omega_to_mhz
from paultrap.documents import load_geometry, read_json, waveform_from_dict
from paultrap.transport import solve_waveform, waveform_continuity_check

from ._base import Report, ToolkitCommand


class Command(ToolkitCommand):
    help = 'Control-voltage waveform that moves an axial well along the trap axis'
    default_format = 'csv'
    uses_species = True

    def add_scenario_arguments(self, parser):
        parser.add_argument('--geometry', required=True)
        parser.add_argument('--waveform', required=True, help='Waveform document (JSON)')
        parser.add_argument('--max-step-v', type=float, default=None,
                            help='Flag steps whose channel change exceeds this many volts')

    def compute(self, options):
        model = load_geometry(options['geometry'])
        spec = waveform_from_dict(read_json(options['waveform']))
        waveform = solve_waveform(model, self.species(options), spec)
        data = {
            'command': 'transport',
            'channels': waveform.channels,
            'steps': [
                {
                    'step': step.index,
                    'axial_um': step.position * 1e6,
                    'null_point_um': step.null_point * 1e6,
                    'voltages_v': step.voltages,
                    'omega_z_mhz': omega_to_mhz(step.omega_z),
                    'residual': step.residual,
                }
                for step in waveform.steps
            ],
        }
        if options['max_step_v'] is not None:
            report = waveform_continuity_check(waveform, options['max_step_v'])
            data['continuity'] = {'passed': report.passed, 'offending_steps': report.offending_steps,
                                  'max_jump_v': report.max_jump}
            if not report.passed:
                self.stderr.write(f'Voltage jumps above {options["max_step_v"]} V at steps {report.offending_steps}')
        return Report(data=data, columns=waveform.columns(), rows=list(waveform.rows()))
