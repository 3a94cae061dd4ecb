from paultrap.core import mhz_to_omega
from paultrap.crystal import equilibrium_positions

from ._base import Report, ToolkitCommand


class Command(ToolkitCommand):
    help = 'Equilibrium positions of a linear ion crystal in a harmonic axial well'
    default_format = 'csv'
    uses_species = True

    def add_scenario_arguments(self, parser):
        parser.add_argument('--freq-mhz', type=float, required=True, help='Axial frequency omega_z / 2 pi')
        parser.add_argument('--ions', type=int, default=2)

    def compute(self, options):
        result = equilibrium_positions(self.species(options), mhz_to_omega(options['freq_mhz']), options['ions'])
        rows = [(i, p * 1e6, u) for i, (p, u) in enumerate(zip(result.positions, result.dimensionless))]
        data = {
            'command': 'crystal',
            'ions': len(result.positions),
            'length_scale_um': result.length_scale * 1e6,
            'positions_um': result.positions * 1e6,
            'spacings_um': result.spacings * 1e6,
        }
        return Report(data=data, columns=['ion', 'position_um', 'position_scaled'], rows=rows)
