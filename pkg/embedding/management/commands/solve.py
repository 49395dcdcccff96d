from django.core.management.base import CommandError

from api.serializers import EmbeddingSerializer
from embedding.ctw import geodesic_cycle_length
from embedding.decomposition import parse_td
from embedding.embeddings import embedding_to_dot
from embedding.management.base import EXIT_BUDGET, EXIT_INFEASIBLE, EmbeddingCommand
from embedding.solvers import SOLVERS, Instance, solve


class Command(EmbeddingCommand):
    help = 'Ищет вложение гостя в хост с искажением не больше D и печатает его в JSON.'

    def add_arguments(self, parser):
        self.add_instance_arguments(parser)
        parser.add_argument('--td', help='древесная декомпозиция хоста в формате PACE .td')
        parser.add_argument('--bijective', action='store_true')
        parser.add_argument('--red', help='файл с номерами красных вершин хоста')
        parser.add_argument('--solver', choices=SOLVERS, default='auto')
        parser.add_argument('--dot', help='куда записать хост с вложением в формате DOT')
        parser.add_argument('--cross-check', action='store_true', help='для theta с двумя плечами сверить с циклом')

    def handle(self, *args, **options):
        g, labels = self.load_guest(options['graph'], options['weighted'])
        spec = self.load_host(options['host'])
        td = parse_td(self.read(options['td']), index=self.host_index) if options['td'] else None
        instance = Instance(g, spec, self.parse_distortion(options['distortion']),
                            bijective=options['bijective'], td=td, labels=labels)
        if td is not None:
            td.validate(instance.host)
        if options['red']:
            instance.red = self.load_red(options['red'], instance.host.n)
        outcome = solve(instance, options['solver'], cross_check=options['cross_check'])

        if outcome.solver == 'ctw' and outcome.search is not None:
            cnd = outcome.search.cnd
            self.stderr.write(f'ctw: width {cnd.width}, gamma {cnd.gamma}, '
                              f'longest geodesic cycle {geodesic_cycle_length(instance.host)}')
        if outcome.verdict == 'budget':
            raise CommandError(f'{outcome.solver}: search budget exceeded after {outcome.nodes} nodes',
                               returncode=EXIT_BUDGET)
        if outcome.embedding is None:
            self.stdout.write('infeasible')
            raise CommandError('no embedding', returncode=EXIT_INFEASIBLE)

        f = outcome.embedding
        context = {'labels': labels, 'host_labels': self.host_labels,
                   'allow_contraction': instance.d.denominator != 1}
        self.write_json(EmbeddingSerializer(f, context=context).data)
        if options['dot']:
            try:
                with open(options['dot'], 'w', encoding='utf-8') as target:
                    target.write(embedding_to_dot(g, instance.host, f, instance.red))
            except OSError as exc:
                raise CommandError(f'cannot write {options["dot"]}: {exc.strerror}', returncode=2)
