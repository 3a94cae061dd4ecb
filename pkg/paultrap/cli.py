"""
Command-line entry point. Every subcommand is a management command of
the ``paultrap`` app; ``run`` adds the exit-code contract and the JSON
error object on stderr.
"""
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from django.core.management import call_command
from django.core.management.base import CommandError

from .documents import schema
from .exceptions import ConvergenceError, PaulTrapError, TrapValidationError

logger = logging.getLogger(__name__)

COMMANDS = (
    'analyze',
    'fieldmap',
    'crystal',
    'spectrum',
    'heating-budget',
    'resonator',
    'transport',
    'cantilever',
    'qft',
    'stability',
)

# Flags whose value names an input document.
INPUT_FLAGS = ('--geometry', '--scenario', '--waveform', '--device', '--amplitudes')

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CONVERGENCE = 3
EXIT_USAGE = 64

USAGE = (
    'usage: manage.py paultrap <command> [options]\n'
    '\n'
    'commands:\n'
    + ''.join(f'  {name}\n' for name in COMMANDS)
    + '\n'
    "Run 'manage.py <command> --help' (underscores for hyphens) for the options of a command.\n"
)


@dataclass
class Scenario:
    command: str
    arguments: list = field(default_factory=list)
    input_paths: list = field(default_factory=list)
    output: Optional[str] = None

    @classmethod
    def from_argv(cls, argv):
        if not argv or argv[0] not in COMMANDS:
            raise KeyError(argv[0] if argv else '')
        command, arguments = argv[0], list(argv[1:])
        inputs, output = [], None
        for i, token in enumerate(arguments):
            flag, _, inline = token.partition('=')
            value = inline or (arguments[i + 1] if i + 1 < len(arguments) else None)
            if flag in INPUT_FLAGS and value is not None:
                inputs.append(value)
            elif flag == '--output' and value is not None:
                output = value
        return cls(command=command, arguments=arguments, input_paths=inputs, output=output)

    @property
    def command_name(self):
        return self.command.replace('-', '_')

    def validate(self):
        # schema versions are checked when the command reads each document
        for path in self.input_paths:
            if not Path(path).is_file():
                raise TrapValidationError(f'Input file not found: {path}')


def error_document(kind, message, details=None):
    return json.dumps(
        {'schema': schema(), 'error': {'type': kind, 'message': message, 'details': details or {}}},
        sort_keys=True,
    ) + '\n'


def run(argv, stdout=None, stderr=None):
    """Execute one subcommand and return its exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        scenario = Scenario.from_argv(list(argv))
    except KeyError as exc:
        if exc.args[0]:
            stderr.write(f'Unknown command {exc.args[0]!r}\n')
        stderr.write(USAGE)
        return EXIT_USAGE

    try:
        scenario.validate()
        call_command(scenario.command_name, *scenario.arguments, stdout=stdout, stderr=stderr)
    except ConvergenceError as exc:
        logger.warning('%s failed to converge: %s', scenario.command, exc.text)
        stderr.write(error_document(exc.kind, exc.text, exc.details))
        return EXIT_CONVERGENCE
    except PaulTrapError as exc:
        stderr.write(error_document(exc.kind, exc.text, exc.details))
        return exc.exit_code
    except CommandError as exc:
        stderr.write(error_document('usage', str(exc)))
        return EXIT_VALIDATION
    return EXIT_OK
