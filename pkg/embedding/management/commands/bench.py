import csv
from pathlib import Path

from api.serializers import BenchRowSerializer
from embedding.apps import instance_solved
from embedding.exceptions import InputError
from embedding.management.base import EmbeddingCommand
from embedding.solvers import SOLVERS, Instance, solve


def split_hosts(text):
    """Список хостов через запятую; числа после theta:... относятся к длинам плеч."""
    specs = []
    for part in (p.strip() for p in text.split(',')):
        if not part:
            continue
        if part.isdigit() and specs and specs[-1].startswith('theta:'):
            specs[-1] += ',' + part
        else:
            specs.append(part)
    return specs


class Command(EmbeddingCommand):
    help = 'Прогоняет решатели на всех графах каталога и печатает CSV: instance,solver,verdict,nodes,millis.'

    def add_arguments(self, parser):
        parser.add_argument('--corpus', required=True, help='каталог со списками рёбер *.txt')
        parser.add_argument('--hosts', required=True, help='хосты через запятую')
        parser.add_argument('--distortion', required=True)
        parser.add_argument('--solvers', default='auto,oracle')

    def handle(self, *args, **options):
        corpus = Path(options['corpus'])
        if not corpus.is_dir():
            raise InputError(f'{corpus} is not a directory', code='io')
        solvers = [s.strip() for s in options['solvers'].split(',') if s.strip()]
        unknown = sorted(set(solvers) - set(SOLVERS))
        if unknown:
            raise InputError(f'unknown solvers {", ".join(unknown)}', code='solver')
        d = self.parse_distortion(options['distortion'])
        hosts = [(text, self.load_host(text)) for text in split_hosts(options['hosts'])]

        solved = []

        def count(sender, **kwargs):
            solved.append(kwargs.get('verdict'))

        writer = csv.writer(self.stdout, lineterminator='\n')
        writer.writerow(BenchRowSerializer.FIELDS)
        instance_solved.connect(count)
        try:
            for path in sorted(corpus.glob('*.txt')):
                g, labels = self.load_guest(str(path), weighted=True)
                for host_text, spec in hosts:
                    for solver in solvers:
                        row = self.run_one(f'{path.name}@{host_text}', g, labels, spec, d, solver)
                        serializer = BenchRowSerializer(data=row)
                        serializer.is_valid(raise_exception=True)
                        writer.writerow([serializer.validated_data[field] for field in BenchRowSerializer.FIELDS])
        finally:
            instance_solved.disconnect(count)
        self.stderr.write(f'bench: {len(solved)} instances solved')

    def run_one(self, name, g, labels, spec, d, solver):
        try:
            outcome = solve(Instance(g, spec, d, labels=labels), solver)
        except InputError as exc:
            self.stderr.write(f'{name} [{solver}]: {exc}')
            return {'instance': name, 'solver': solver, 'verdict': 'error', 'nodes': 0, 'millis': 0}
        return {'instance': name, 'solver': outcome.solver if solver == 'auto' else solver,
                'verdict': outcome.verdict, 'nodes': outcome.nodes, 'millis': outcome.millis}
