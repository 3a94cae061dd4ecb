import math

import numpy as np
from django.core.management.base import CommandError

from paultrap.core import mhz_to_omega
from paultrap.micromotion import LineParams, fluorescence_spectrum, micromotion_state, sideband_count

from ._base import Report, ToolkitCommand


class Command(ToolkitCommand):
    help = 'Fluorescence versus laser detuning for an ion with excess micromotion'
    default_format = 'csv'
    uses_species = True

    def add_scenario_arguments(self, parser):
        parser.add_argument('--beta', type=float, default=None, help='Modulation index')
        parser.add_argument('--field', type=float, default=None,
                            help='Stray DC field (V/m); with --secular-mhz replaces --beta')
        parser.add_argument('--secular-mhz', type=float, default=None)
        parser.add_argument('--angle-deg', type=float, default=45.0, help='Beam to micromotion angle')
        parser.add_argument('--rf-mhz', type=float, required=True)
        parser.add_argument('--linewidth-mhz', type=float, default=43.0, help='Natural linewidth gamma / 2 pi')
        parser.add_argument('--wavelength-nm', type=float, default=280.0)
        parser.add_argument('--span-mhz', type=float, default=None, help='Half-width of the sweep (default 1.5 Omega)')
        parser.add_argument('--points', type=int, default=601)
        parser.add_argument('--n-max', type=int, default=None)

    def compute(self, options):
        omega_rf = mhz_to_omega(options['rf_mhz'])
        wavelength = options['wavelength_nm'] * 1e-9
        state = None
        if options['beta'] is not None:
            beta = options['beta']
        elif options['field'] is not None and options['secular_mhz'] is not None:
            state = micromotion_state(self.species(options), mhz_to_omega(options['secular_mhz']), omega_rf,
                                      options['field'], wavelength, options['angle_deg'])
            beta = state.beta
        else:
            raise CommandError('Give --beta, or --field with --secular-mhz')
        if options['points'] < 2:
            raise CommandError('--points must be at least 2')

        line = LineParams(gamma=mhz_to_omega(options['linewidth_mhz']), omega_rf=omega_rf, wavelength=wavelength)
        rate = fluorescence_spectrum(line, beta, options['n_max'])
        span = options['span_mhz'] if options['span_mhz'] is not None else 1.5 * options['rf_mhz']
        detunings = np.linspace(-span, span, options['points'])
        values = rate(mhz_to_omega(detunings))
        data = {
            'command': 'spectrum',
            'beta': beta,
            'sidebands': sideband_count(beta),
            'micromotion': None if state is None else {
                'displacement_nm': state.displacement * 1e9,
                'amplitude_nm': state.amplitude * 1e9,
            },
            'carrier_rate': rate(0.0),
            'first_sideband_rate': rate(-2.0 * math.pi * options['rf_mhz'] * 1e6),
        }
        return Report(data=data, columns=['detuning_mhz', 'relative_rate'], rows=list(zip(detunings, values)))
