from embedding.exceptions import InputError
from embedding.graphs import format_edge_list, guest_family
from embedding.management.base import EmbeddingCommand
from embedding.utilities import setting


FAMILIES = ('path', 'cycle', 'star', 'complete', 'tree', 'random', 'theta')


class Command(EmbeddingCommand):
    help = 'Генерирует гостевой граф и печатает (или записывает) его список рёбер.'

    def add_arguments(self, parser):
        parser.add_argument('--family', choices=FAMILIES, required=True)
        parser.add_argument('--size', type=int, default=0)
        parser.add_argument('--arms', help='длины плеч theta через запятую')
        parser.add_argument('--max-degree', type=int)
        parser.add_argument('--seed', type=int, help='по умолчанию EMBED_SEED')
        parser.add_argument('--out', help='файл для списка рёбер')

    def handle(self, *args, **options):
        family = options['family']
        arms = ()
        if family == 'theta':
            if not options['arms']:
                raise InputError('theta needs --arms', code='arms')
            try:
                arms = tuple(int(x) for x in options['arms'].split(',') if x.strip())
            except ValueError:
                raise InputError(f'bad arms {options["arms"]!r}', code='arms')
        elif options['size'] < 1:
            raise InputError('--size must be >= 1', code='size')
        seed = setting('EMBED_SEED') if options['seed'] is None else options['seed']
        g = guest_family(family, options['size'], seed=seed, max_degree=options['max_degree'], arms=arms)
        text = format_edge_list(g)
        if options['out']:
            try:
                with open(options['out'], 'w', encoding='utf-8') as target:
                    target.write(text)
            except OSError as exc:
                raise InputError(f'cannot write {options["out"]}: {exc.strerror}', code='io')
        else:
            self.stdout.write(text, ending='')
