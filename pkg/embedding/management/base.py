import json

from django.core.management.base import BaseCommand, CommandError

from ..embeddings import Ratio
from ..exceptions import BudgetExceeded, DecompositionError, InputError
from ..graphs import parse_edge_list, parse_host_spec, read_guest


EXIT_FOUND, EXIT_INFEASIBLE, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class EmbeddingCommand(BaseCommand):
    """Общий разбор файлов и флагов; ошибки входных данных и исчерпание бюджета
    превращаются в CommandError с кодами выхода 2 и 3."""

    def execute(self, *args, **options):
        self.host_labels = None
        try:
            return super().execute(*args, **options)
        except InputError as exc:
            raise CommandError(str(exc), returncode=EXIT_INPUT)
        except DecompositionError as exc:
            raise CommandError(f'bad tree decomposition: {exc}', returncode=EXIT_INPUT)
        except BudgetExceeded as exc:
            raise CommandError(str(exc), returncode=EXIT_BUDGET)

    def add_instance_arguments(self, parser, distortion=True):
        parser.add_argument('--graph', required=True, help='гость: список рёбер')
        parser.add_argument('--host', required=True, help='path:N | cycle:N | theta:l1,...,lk | file:PATH')
        if distortion:
            parser.add_argument('--distortion', required=True, help='целое или a/b')
        parser.add_argument('--weighted', action='store_true', help='гость со взвешенными рёбрами')

    def read(self, path):
        try:
            with open(path, encoding='utf-8') as source:
                return source.read()
        except OSError as exc:
            raise InputError(f'cannot read {path}: {exc.strerror}', code='io')

    def load_guest(self, path, weighted=False):
        g, labels = read_guest(self.read(path))
        if g.is_weighted and not weighted:
            raise InputError('weighted edge list needs --weighted', code='weighted')
        return g, labels

    def load_host(self, text):
        def read_file(path):
            graph, labels = parse_edge_list(self.read(path))
            self.host_labels = labels
            return graph
        return parse_host_spec(text, read_file=read_file)

    @property
    def host_index(self):
        if self.host_labels is None:
            return None
        return {label: i for i, label in enumerate(self.host_labels)}

    def load_red(self, path, host_size):
        index = self.host_index
        red = set()
        for number, raw in enumerate(self.read(path).splitlines(), 1):
            for token in raw.split('#', 1)[0].split():
                try:
                    label = int(token)
                except ValueError:
                    raise InputError(f'non-integer red vertex {token!r}', code='red', line=number)
                vertex = label if index is None else index.get(label)
                if vertex is None or not 0 <= vertex < host_size:
                    raise InputError(f'red vertex {label} is not in the host', code='red', line=number)
                red.add(vertex)
        return frozenset(red)

    def parse_distortion(self, text):
        d = Ratio.parse(text)
        if d < 1:
            raise InputError('distortion must be >= 1', code='distortion')
        return d

    def write_json(self, data):
        self.stdout.write(json.dumps(data, ensure_ascii=False))
