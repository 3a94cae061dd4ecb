import math

from paultrap.cantilever import (damping_and_shift, detuning_sweep, ground_state_ratio, power_sweep,
                                 v_max_squared)
from paultrap.documents import cantilever_from_dict, read_json

from ._base import Report, ToolkitCommand, parse_range

PROBE_POWER = 1e-3


class Command(ToolkitCommand):
    help = 'RF-circuit cooling of a cantilever: damping, frequency shift and temperature sweeps'
    default_format = 'csv'

    def add_scenario_arguments(self, parser):
        parser.add_argument('--device', required=True, help='Cantilever and circuit JSON')
        parser.add_argument('--sweep', choices=('power', 'detuning'), default='power')
        parser.add_argument('--power-w', default='1e-4:1e-2:21', help='Power (W), start:stop:count or a value')
        parser.add_argument('--detuning-khz', default='90',
                            help='Circuit detuning Delta Omega / 2 pi (kHz), start:stop:count or a value')
        parser.add_argument('--t-c', type=float, default=300.0, help='Bath temperature (K)')

    def compute(self, options):
        device, circuit = cantilever_from_dict(read_json(options['device']))
        powers = parse_range(options['power_w'], 'power-w')
        detunings = parse_range(options['detuning_khz'], 'detuning-khz') * 2e3 * math.pi
        t_c = options['t_c']

        if options['sweep'] == 'power':
            rows = power_sweep(device, circuit, powers, detunings[0], t_c)
            first = 'power_w'
        else:
            rows = [(d / (2e3 * math.pi), g, f, t) for d, g, f, t in detuning_sweep(device, circuit, powers[0],
                                                                                      detunings, t_c)]
            first = 'detuning_khz'

        # both scale linearly with power; probe well below the static instability
        reference = damping_and_shift(device, circuit, v_max_squared(PROBE_POWER, circuit), detunings[0])
        data = {
            'command': 'cantilever',
            'sweep': options['sweep'],
            'effective_mass_kg': device.effective_mass,
            'coupling_capacitance_pf': circuit.c_c * 1e12,
            'mode_integrals': {'xi_prime': device.xi_prime, 'xi_dprime': device.xi_dprime,
                               'xi_c_dprime': device.xi_c_dprime},
            'circuit_freq_mhz': circuit.omega0 / (2e6 * math.pi),
            'gamma_prime_per_watt': reference.gamma_prime / PROBE_POWER,
            'kappa_per_watt': reference.kappa / PROBE_POWER,
            'ground_state_ratio': ground_state_ratio(t_c, circuit.omega0, circuit.q_rf, device.q_c_mech),
        }
        columns = [first, 'gamma_prime_rad_per_s', 'f_c_hz', 't_eff_k']
        return Report(data=data, columns=columns, rows=rows)
