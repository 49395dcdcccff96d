import json

from django.core.management.base import CommandError

from api.serializers import EmbeddingSerializer, ReportSerializer
from embedding.embeddings import distortion_report, verify_nc_distortion
from embedding.exceptions import InputError, PartialityError
from embedding.graphs import all_pairs_distances, generate
from embedding.management.base import EXIT_INFEASIBLE, EmbeddingCommand


class Command(EmbeddingCommand):
    help = 'Проверяет, что вложение из JSON несжимающее и растягивает не больше чем в D раз.'

    def add_arguments(self, parser):
        self.add_instance_arguments(parser)
        parser.add_argument('--embedding', required=True, help='JSON вида {"map": {...}}')

    def handle(self, *args, **options):
        g, labels = self.load_guest(options['graph'], options['weighted'])
        host = generate(self.load_host(options['host']))
        d = self.parse_distortion(options['distortion'])
        try:
            data = json.loads(self.read(options['embedding']))
        except json.JSONDecodeError as exc:
            raise InputError(f'bad JSON: {exc.msg}', code='json', line=exc.lineno)

        serializer = EmbeddingSerializer(data=data, context={'labels': labels, 'host_labels': self.host_labels})
        if not serializer.is_valid():
            raise InputError(json.dumps(serializer.errors, ensure_ascii=False), code='embedding')
        f = serializer.save()
        if any(not 0 <= x < host.n for _, x in f.items()):
            raise InputError('embedding maps outside the host', code='embedding')
        try:
            dg, dh = all_pairs_distances(g), all_pairs_distances(host)
            report = distortion_report(g, host, dg, dh, f)
        except PartialityError as exc:
            raise InputError(str(exc), code='partial')

        self.write_json(ReportSerializer(report, context={'labels': labels}).data)
        violation = verify_nc_distortion(g, host, dg, dh, f, d)
        if violation is not None:
            u, v = labels[violation.u], labels[violation.v]
            self.stderr.write(f'{violation.kind} on pair ({u}, {v}): '
                              f'D_G={violation.guest_distance}, D_H={violation.host_distance}')
            raise CommandError(f'violation on pair ({u}, {v})', returncode=EXIT_INFEASIBLE)
