import json
import math
from pathlib import Path

from django.core.management.base import CommandError

from paultrap.documents import amplitudes_from_list
from paultrap.qft import (PREPARATION_FIDELITY, PureState, StateKind, coherent_qft, depolarize, phase_sweep,
                          prepare, sample_distribution, semiclassical_qft, sso)

from ._base import Report, ToolkitCommand, parse_range


class Command(ToolkitCommand):
    help = 'Outcome distribution of the semiclassical quantum Fourier transform on periodic input states'

    def add_scenario_arguments(self, parser):
        parser.add_argument('mode', nargs='?', choices=('distribution', 'sweep'), default='distribution')
        parser.add_argument('--state', choices=[k.value for k in StateKind], default=StateKind.PERIOD1.value)
        parser.add_argument('--phase-deg', type=float, default=0.0, help='Relative phase of the period3 state')
        parser.add_argument('--amplitudes', default=None, help='JSON list of amplitudes (numbers or [re, im])')
        parser.add_argument('--raw', action='store_true', help='Report the bit-reversed measurement register')
        parser.add_argument('--conjugate', action='store_true', help='Conjugated feed-forward rotations')
        parser.add_argument('--depolarize', type=float, default=None,
                            help='Mix with the uniform distribution (default: 1 - preparation fidelity)')
        parser.add_argument('--shots', type=int, default=None, help='Sample this many measurements')
        parser.add_argument('--phases-deg', default='0:360:37', help='Sweep phases, start:stop:count')

    def compute(self, options):
        if options['mode'] == 'sweep':
            return self.sweep(options)
        state = self.state(options)
        exact = semiclassical_qft(state, raw=options['raw'], conjugate=options['conjugate'])
        data = {
            'command': 'qft',
            'state': 'custom' if options['amplitudes'] else options['state'],
            'raw': options['raw'],
            'distribution': exact.as_dict(),
        }
        if not options['raw'] and not options['conjugate']:
            data['coherent_agreement'] = sso(exact, coherent_qft(state).probabilities)

        reported = exact
        eps = options['depolarize']
        if eps is None and options['shots'] and not options['amplitudes']:
            eps = 1.0 - PREPARATION_FIDELITY[StateKind(options['state'])]
        if eps:
            reported = depolarize(exact, eps)
            data['depolarize'] = eps
        if options['shots']:
            if options['seed'] is None:
                raise CommandError('--shots needs --seed so the sample is reproducible')
            reported = sample_distribution(reported, options['shots'], options['seed'])
            data['shots'] = options['shots']
            data['sampled'] = reported.as_dict()
            data['sso'] = sso(reported, exact)
        rows = [(label, p) for label, p in reported.as_dict().items()]
        return Report(data=data, columns=['outcome', 'probability'], rows=rows)

    def state(self, options):
        if options['amplitudes']:
            return PureState.normalized(amplitudes_from_list(self.read_list(options['amplitudes'])))
        return prepare(options['state'], math.radians(options['phase_deg']))

    @staticmethod
    def read_list(path):
        try:
            return json.loads(Path(path).read_text())
        except ValueError as exc:
            raise CommandError(f'Invalid JSON in {path}: {exc}')

    def sweep(self, options):
        phases = parse_range(options['phases_deg'], 'phases-deg')
        results = phase_sweep([math.radians(p) for p in phases])
        labels = results[0][1].labels()
        rows = [(math.degrees(phi), *dist.probabilities) for phi, dist in results]
        data = {'command': 'qft', 'mode': 'sweep', 'state': StateKind.PERIOD3.value}
        return Report(data=data, columns=['phase_deg', *(f'p_{label}' for label in labels)], rows=rows)
