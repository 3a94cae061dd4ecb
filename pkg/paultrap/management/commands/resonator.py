from django.core.management.base import CommandError

from paultrap.core import mhz_to_omega, omega_to_mhz
from paultrap.documents import read_json
from paultrap.resonator import (chip_loss, coupling_from_q, lc_resonance, lead_inductance, loaded_q,
                                power_coupling, q_from_linewidth, rlc_from_measurement)

from ._base import Report, ToolkitCommand

ANALYSES = ('rlc', 'chip-loss', 'loaded-q', 'linewidth', 'lead')


class Command(ToolkitCommand):
    help = 'Resonator analyses: RLC model, chip loss from a Q drop, loaded Q, Q from linewidth, lead inductance'

    def add_scenario_arguments(self, parser):
        parser.add_argument('analysis', choices=ANALYSES)
        parser.add_argument('--scenario', default=None, help='JSON with the same keys as the flags (underscored)')
        parser.add_argument('--freq-mhz', type=float, default=None)
        parser.add_argument('--q', type=float, default=None)
        parser.add_argument('--l-uh', type=float, default=None)
        parser.add_argument('--q-after', type=float, default=None)
        parser.add_argument('--v-rf', type=float, default=None)
        parser.add_argument('--kappa', type=float, default=None)
        parser.add_argument('--q-loaded', type=float, default=None)
        parser.add_argument('--linewidth-khz', type=float, default=None)
        parser.add_argument('--length-mm', type=float, default=None)
        parser.add_argument('--wire-radius-mm', type=float, default=None)
        parser.add_argument('--separation-mm', type=float, default=None)
        parser.add_argument('--c-pf', type=float, default=None, help='Load capacitance for the lead resonance')

    def compute(self, options):
        values = dict(options)
        if options['scenario']:
            values.update({k: v for k, v in read_json(options['scenario']).items() if k != 'schema'})
        analysis = options['analysis']
        data = {'command': 'resonator', 'analysis': analysis,
                **getattr(self, 'analyze_' + analysis.replace('-', '_'))(values)}
        return Report(data=data)

    def require(self, values, *names):
        missing = [n for n in names if values.get(n) is None]
        if missing:
            flags = ', '.join('--' + n.replace('_', '-') for n in missing)
            raise CommandError(f'resonator {values["analysis"]} needs {flags}')
        return [float(values[n]) for n in names]

    def analyze_rlc(self, values):
        freq, q, l_uh = self.require(values, 'freq_mhz', 'q', 'l_uh')
        return {'model': rlc_from_measurement(mhz_to_omega(freq), q, l_uh * 1e-6).as_dict()}

    def analyze_chip_loss(self, values):
        freq, q, l_uh, q_after, v_rf = self.require(values, 'freq_mhz', 'q', 'l_uh', 'q_after', 'v_rf')
        model = rlc_from_measurement(mhz_to_omega(freq), q, l_uh * 1e-6)
        loss = chip_loss(model, q_after, v_rf)
        return {
            'model': model.as_dict(),
            'r_loaded_kohm': loss.r_loaded * 1e-3,
            'r_chip_kohm': loss.r_chip * 1e-3,
            'dissipated_mw': loss.dissipated * 1e3,
        }

    def analyze_loaded_q(self, values):
        if values.get('kappa') is not None:
            q0, kappa = self.require(values, 'q', 'kappa')
            q_l = loaded_q(q0, kappa)
        else:
            q0, q_l = self.require(values, 'q', 'q_loaded')
            kappa = coupling_from_q(q0, q_l)
        return {'q0': q0, 'kappa': kappa, 'q_loaded': q_l, 'power_coupling': power_coupling(kappa)}

    def analyze_linewidth(self, values):
        freq, width = self.require(values, 'freq_mhz', 'linewidth_khz')
        return {'q': q_from_linewidth(mhz_to_omega(freq), mhz_to_omega(width * 1e-3))}

    def analyze_lead(self, values):
        length, radius, separation = self.require(values, 'length_mm', 'wire_radius_mm', 'separation_mm')
        inductance = lead_inductance(length * 1e-3, radius * 1e-3, separation * 1e-3)
        data = {'inductance_nh': inductance * 1e9}
        if values.get('c_pf') is not None:
            data['resonance_mhz'] = omega_to_mhz(lc_resonance(inductance, float(values['c_pf']) * 1e-12))
        return data
