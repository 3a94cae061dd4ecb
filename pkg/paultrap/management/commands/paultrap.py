import argparse
import sys

from django.core.management.base import BaseCommand

from paultrap import cli


class Command(BaseCommand):
    help = 'Run a toolkit subcommand with the CLI exit codes: ' + ', '.join(cli.COMMANDS)

    def add_arguments(self, parser):
        parser.add_argument('argv', nargs=argparse.REMAINDER)

    def handle(self, *args, **options):
        code = cli.run(options['argv'], stdout=self.stdout, stderr=self.stderr)
        if code:
            sys.exit(code)
