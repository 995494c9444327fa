"""Generate certified q-ary benchmark instances."""
from django.conf import settings

from exclqa import bench, utils

from ._options import ExclqaCommand


class Command(ExclqaCommand):
    help = 'Generate LLL-reduced q-ary sublattices with certified shortest vectors.'
    uses_config = True

    def add_command_arguments(self, parser):
        parser.add_argument('--out', help='output directory (default: $EXCLQA_DATA_DIR/instances)')
        parser.add_argument('--workers', type=int, help='parallel lattices (0 = all CPUs)')
        parser.add_argument('--search-space-k', default='1,2,3,4',
                            help='bits per qudit for the search-space table')

    def run(self, **options):
        cfg = self.load_config(options)
        out = self.output_dir(options, 'instances')
        instances = bench.generate_instances(
            cfg, out, self.workers(options),
            delta=settings.EXCLQA_LLL_DELTA, eta=settings.EXCLQA_LLL_ETA,
        )
        k_list = [int(k) for k in options['search_space_k'].split(',') if k.strip()]
        rows = bench.search_space_probability(instances, k_list)
        utils.write_csv(out / 'search_space.csv', bench.SEARCH_SPACE_COLUMNS, [r._asdict() for r in rows])
        self.stdout.write(self.style.SUCCESS(f'{len(instances)} instances written to {out}'))
        for row in rows:
            self.stdout.write(f'rank {row.rank:3d} k={row.k}: {row.valid}/{row.total} in the search space')
