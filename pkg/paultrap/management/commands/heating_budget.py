from paultrap.documents import budget_from_dict, read_json
from paultrap.noise import heating_budget

from ._base import Report, ToolkitCommand


class Command(ToolkitCommand):
    help = 'Itemized motional heating budget from a JSON scenario of noise sources'

    def add_scenario_arguments(self, parser):
        parser.add_argument('--scenario', required=True, help='Budget scenario JSON')
        parser.add_argument('--table', action='store_true', help='Print the human-readable table instead')

    def compute(self, options):
        budget = heating_budget(**budget_from_dict(read_json(options['scenario'])))
        self.table_text = budget.table()
        data = {'command': 'heating-budget', **budget.as_dict(), 'table_text': self.table_text}
        rows = [(line.name, line.mechanism, line.rate, line.rate_per_ms, line.s_e_equivalent) for line in budget.lines]
        columns = ['source', 'mechanism', 'quanta_per_s', 'quanta_per_ms', 's_e_v2_per_m2_hz']
        return Report(data=data, columns=columns, rows=rows)

    def handle(self, *args, **options):
        if not options['table']:
            return super().handle(*args, **options)
        self.compute(options)
        self.emit(self.table_text + '\n', options)
