from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
from django.core.management.base import BaseCommand, CommandError

from paultrap.core import make_species, parse_species
from paultrap.documents import dump_csv, dump_report
from paultrap.exceptions import TrapValidationError


@dataclass
class Report:
    data: dict
    columns: Optional[list] = None
    rows: list = field(default_factory=list)


def parse_range(text, name):
    """``start:stop:count`` (or a single value) as a numpy array."""
    try:
        parts = [float(p) for p in str(text).split(':')]
    except ValueError:
        raise CommandError(f'--{name} expects start:stop:count, got {text!r}')
    if len(parts) == 1:
        return np.array(parts)
    if len(parts) != 3 or parts[2] < 1 or int(parts[2]) != parts[2]:
        raise CommandError(f'--{name} expects start:stop:count with an integer count, got {text!r}')
    return np.linspace(parts[0], parts[1], int(parts[2]))


def parse_vector(text, name, length=3):
    try:
        values = [float(p) for p in str(text).split(',')]
    except ValueError:
        values = []
    if len(values) != length:
        raise CommandError(f'--{name} expects {length} comma-separated numbers, got {text!r}')
    return np.array(values)


class ToolkitCommand(BaseCommand):
    """
    Shared plumbing for the toolkit subcommands: ``--format``, ``--seed``,
    ``--output`` and the species flags. Subclasses implement ``compute``.
    """

    default_format = 'json'
    uses_species = False

    def add_arguments(self, parser):
        parser.add_argument('--format', choices=('json', 'csv'), default=None,
                            help=f'Output format (default {self.default_format})')
        parser.add_argument('--seed', type=int, default=None, help='Random seed, echoed in the report')
        parser.add_argument('--output', default=None, help='Write the result to this file instead of stdout')
        if self.uses_species:
            parser.add_argument('--species', default='24Mg+', help='Ion label such as 24Mg+ or 40Ca+')
            parser.add_argument('--mass-amu', type=float, default=None)
            parser.add_argument('--charge', type=int, default=1, help='Charge in units of e (with --mass-amu)')
        self.add_scenario_arguments(parser)

    def add_scenario_arguments(self, parser):
        pass

    def species(self, options):
        if options.get('mass_amu') is not None:
            return make_species(options['mass_amu'], options['charge'], options.get('species') or '')
        return parse_species(options['species'])

    def compute(self, options):
        raise NotImplementedError('subclasses of ToolkitCommand must provide a compute() method')

    def handle(self, *args, **options):
        if options['seed'] is not None and not 0 <= options['seed'] < 2 ** 64:
            raise CommandError('--seed must be an unsigned 64-bit integer')
        report = self.compute(options)
        fmt = options['format'] or self.default_format
        if fmt == 'csv':
            if report.columns is None:
                raise CommandError(f'{self.name} has no CSV form; use --format json')
            text = dump_csv(report.columns, report.rows)
        else:
            data = dict(report.data)
            if report.columns is not None and 'table' not in data:
                data['table'] = {'columns': list(report.columns), 'rows': [list(r) for r in report.rows]}
            text = dump_report(data, seed=options['seed'])
        self.emit(text, options)

    def emit(self, text, options):
        """Write ``text`` to ``--output`` when given, else to stdout."""
        path = options.get('output')
        if not path:
            self.stdout.write(text, ending='')
            return
        try:
            Path(path).write_text(text)
        except OSError as exc:
            raise TrapValidationError(f'Cannot write {path}: {exc.strerror or exc}')
        self.stdout.write(f'Wrote {path}', ending='\n')

    @property
    def name(self):
        return self.__module__.rsplit('.', 1)[-1].replace('_', '-')
