"""LLL-reduce a basis file."""
from pathlib import Path

from django.conf import settings

from exclqa import utils
from exclqa.bench import PROVENANCE_KEYS
from exclqa.lattice import Basis, is_lll_reduced, lattice_stats, lll_reduce

from ._options import ExclqaCommand


class Command(ExclqaCommand):
    help = 'LLL-reduce the basis in a JSON file and write the reduced basis.'

    def add_command_arguments(self, parser):
        parser.add_argument('--basis', type=Path, required=True, help='input basis JSON ({"rows": [...]})')
        parser.add_argument('--out', type=Path, required=True, help='output basis JSON')
        parser.add_argument('--delta', type=float, default=None, help='Lovasz parameter')
        parser.add_argument('--eta', type=float, default=None, help='size-reduction parameter')

    def run(self, **options):
        self.check_not_input(options['out'], options['basis'])
        delta = options['delta'] or settings.EXCLQA_LLL_DELTA
        eta = options['eta'] or settings.EXCLQA_LLL_ETA
        data = utils.read_json(options['basis'])
        provenance = {key: data[key] for key in PROVENANCE_KEYS if key in data}
        reduced = lll_reduce(Basis.from_dict(data), delta, eta)
        stats = lattice_stats(reduced)
        utils.write_json(options['out'], reduced.to_dict(
            **provenance, delta=delta, eta=eta, lll_reduced=is_lll_reduced(reduced, delta, eta),
        ))
        norms = reduced.row_norms_sq()
        self.stdout.write(f'rank {reduced.rank}, dimension {reduced.dimension}')
        self.stdout.write(f'shortest row |b|^2 = {min(norms)}')
        self.stdout.write(f'gh = {stats.gaussian_heuristic:.6g}, Minkowski bound = {stats.minkowski_bound:.6g}')
        self.stdout.write(self.style.SUCCESS(f'reduced basis written to {options["out"]}'))
