from django.core.management.base import CommandError

from api.serializers import EmbeddingSerializer
from embedding.embeddings import distortion_report
from embedding.exceptions import InputError
from embedding.graphs import all_pairs_distances, generate
from embedding.management.base import EXIT_INFEASIBLE, EmbeddingCommand
from embedding.oracle import SearchBudget, brute_force_embed, min_distortion_integer


class Command(EmbeddingCommand):
    help = 'Полный перебор: вложение с искажением D или наименьшее целое искажение до DMAX.'

    def add_arguments(self, parser):
        self.add_instance_arguments(parser, distortion=False)
        group = parser.add_mutually_exclusive_group(required=True)
        group.add_argument('--distortion', help='целое или a/b')
        group.add_argument('--min-distortion', type=int, metavar='DMAX')
        parser.add_argument('--bijective', action='store_true')
        parser.add_argument('--max-nodes', type=int, help='предел числа узлов перебора')

    def handle(self, *args, **options):
        g, labels = self.load_guest(options['graph'], options['weighted'])
        host = generate(self.load_host(options['host']))
        dg, dh = all_pairs_distances(g), all_pairs_distances(host)
        budget = SearchBudget.from_settings()
        if options['max_nodes'] is not None:
            budget = SearchBudget(options['max_nodes'], budget.max_seconds)

        if options['min_distortion'] is not None:
            if options['bijective']:
                raise InputError('--min-distortion searches injective embeddings only', code='flags')
            d = min_distortion_integer(g, dg, host, dh, options['min_distortion'], budget=budget)
            if d is None:
                self.stdout.write('infeasible')
                raise CommandError(f'no embedding with distortion <= {options["min_distortion"]}',
                                   returncode=EXIT_INFEASIBLE)
            self.write_json({'distortion': d})
            return

        d = self.parse_distortion(options['distortion'])
        f = brute_force_embed(g, dg, host, dh, d, bijective=options['bijective'], budget=budget)
        if f is None:
            self.stdout.write('infeasible')
            raise CommandError('no embedding', returncode=EXIT_INFEASIBLE)
        f.report = distortion_report(g, host, dg, dh, f)
        self.write_json(EmbeddingSerializer(f, context={'labels': labels, 'host_labels': self.host_labels}).data)
